#pragma once

#include <stdexcept>
#include <string>

namespace metrise {

// Exit-code taxonomy used by the CLI: parse/input -> 2, precondition -> 3, internal -> 4.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct parse_error : error {
    parse_error(const std::string& msg, std::size_t pos)
        : error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

struct input_error : error {
    using error::error;
};

struct precondition_error : error {
    using error::error;
};

struct internal_error : error {
    using error::error;
};

inline void check_internal(bool ok, const std::string& what) {
    if (!ok) throw internal_error("internal assertion failed: " + what);
}

} // namespace metrise
