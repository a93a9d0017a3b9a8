#include "metrise/parse.hpp"

#include <cctype>

#include "metrise/errors.hpp"

namespace metrise {

namespace {

class Parser {
public:
    Parser(const std::string& text, const VarsPtr& vars) : s_(text), vars_(vars) {}

    Poly run() {
        Poly p = expr();
        skip_ws();
        if (pos_ != s_.size())
            throw parse_error("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
        return p;
    }

private:
    const std::string& s_;
    VarsPtr vars_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) { ++pos_; return true; }
        return false;
    }

    Poly expr() {
        bool neg = false;
        skip_ws();
        if (accept('-')) neg = true;
        else accept('+');
        Poly p = term();
        if (neg) p = -p;
        for (;;) {
            if (accept('+')) p += term();
            else if (accept('-')) p -= term();
            else break;
        }
        return p;
    }

    Poly term() {
        Poly p = factor();
        while (accept('*')) p = p * factor();
        return p;
    }

    Poly factor() {
        Poly b = base();
        if (accept('^')) {
            skip_ws();
            if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+'))
                throw parse_error("negative or non-integer exponent", pos_);
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                throw parse_error("negative or non-integer exponent", pos_);
            unsigned long n = read_uint();
            return b.pow(static_cast<unsigned>(n));
        }
        return b;
    }

    unsigned long read_uint() {
        std::size_t start = pos_;
        unsigned long n = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            n = n * 10 + static_cast<unsigned long>(s_[pos_] - '0');
            if (n > 1000000) throw parse_error("exponent too large", start);
            ++pos_;
        }
        return n;
    }

    Int read_int() {
        Int n = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            n = n * 10 + (s_[pos_] - '0');
            ++pos_;
        }
        return n;
    }

    Poly base() {
        skip_ws();
        if (pos_ >= s_.size()) throw parse_error("unexpected end of input", pos_);
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Poly p = expr();
            if (!accept(')')) throw parse_error("expected ')'", pos_);
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Int num = read_int();
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '/') {
                ++pos_;
                skip_ws();
                std::size_t dpos = pos_;
                if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                    throw parse_error("expected positive integer denominator", pos_);
                Int den = read_int();
                if (den == 0) throw parse_error("zero denominator", dpos);
                return Poly::constant(Rat(num, den), vars_);
            }
            return Poly::constant(Rat(num), vars_);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            auto it = std::find(vars_->begin(), vars_->end(), name);
            if (it == vars_->end())
                throw parse_error("unknown identifier '" + name + "'", start);
            return Poly::variable(name, vars_);
        }
        throw parse_error("unexpected character '" + std::string(1, c) + "'", pos_);
    }
};

} // namespace

Poly parse_poly(const std::string& text, const VarsPtr& variables) {
    return Parser(text, variables).run();
}

} // namespace metrise
