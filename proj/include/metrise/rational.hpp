#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

#include "metrise/errors.hpp"

namespace metrise {

// Arbitrary-precision integers and rationals. cpp_rational keeps values
// reduced with a positive denominator, which is exactly the Rat contract.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline std::string to_string(const Rat& r) {
    if (rat_den(r) == 1) return rat_num(r).str();
    return rat_num(r).str() + "/" + rat_den(r).str();
}

inline Rat rat_pow(const Rat& r, unsigned n) {
    Rat out = 1;
    Rat base = r;
    while (n) {
        if (n & 1u) out *= base;
        base *= base;
        n >>= 1u;
    }
    return out;
}

// Exact integer k-th root if it exists.
inline std::optional<Int> exact_root(const Int& n, unsigned k) {
    if (n < 0) return std::nullopt;
    if (n == 0 || n == 1) return n;
    Int lo = 1, hi = n;
    while (lo < hi) {
        Int mid = (lo + hi + 1) / 2;
        Int p = 1;
        for (unsigned i = 0; i < k && p <= n; ++i) p *= mid;
        if (p <= n) lo = mid; else hi = mid - 1;
    }
    Int p = 1;
    for (unsigned i = 0; i < k; ++i) p *= lo;
    if (p == n) return lo;
    return std::nullopt;
}

} // namespace metrise
