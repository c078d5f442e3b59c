#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "charp/poly.hpp"

namespace charp {

// Canonical form: terms in stored (grevlex-descending) order, every
// coefficient explicit mod p, e.g. "2*a*b^2 + 1*c^3". Stable bytes for
// fixed input, so printed polynomials can be compared as strings.
inline std::string poly_to_string(const Poly& p, const std::vector<std::string>& vars) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : p.terms()) {
        if (!first) out += " + ";
        first = false;
        out += std::to_string(t.c.v);
        for (std::size_t i = 0; i < t.m.size(); ++i) {
            if (t.m[i] == 0) continue;
            out += "*";
            out += vars[i];
            if (t.m[i] > 1) {
                out += "^";
                out += std::to_string(t.m[i]);
            }
        }
    }
    return out;
}

namespace detail {

class PolyParser {
public:
    PolyParser(std::string_view s, const std::vector<std::string>& vars)
        : s_(s), vars_(vars) {}

    Poly parse() {
        Poly p = expr();
        skip_ws();
        if (pos_ != s_.size())
            fail_parse("unexpected character '" + std::string(1, s_[pos_]) +
                       "' at offset " + std::to_string(pos_));
        return p;
    }

private:
    Poly expr() {
        skip_ws();
        bool neg = false;
        if (peek() == '+' || peek() == '-') neg = (get() == '-');
        Poly acc = product();
        if (neg) acc = -acc;
        while (true) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-') break;
            get();
            Poly rhs = product();
            acc = (c == '+') ? acc + rhs : acc - rhs;
        }
        return acc;
    }

    Poly product() {
        Poly acc = power();
        while (true) {
            skip_ws();
            if (peek() != '*') break;
            get();
            acc *= power();
        }
        return acc;
    }

    Poly power() {
        Poly base = atom();
        skip_ws();
        if (peek() == '^') {
            get();
            skip_ws();
            long e = integer();
            if (e < 0) fail_parse("negative exponent");
            base = base.pow(static_cast<int>(e));
        }
        return base;
    }

    Poly atom() {
        skip_ws();
        char c = peek();
        if (c == '-') {
            get();
            return -atom();
        }
        if (c == '(') {
            get();
            Poly p = expr();
            skip_ws();
            if (peek() != ')') fail_parse("missing ')'");
            get();
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return Poly::constant(vars_.size(), FpScalar::of(integer()));
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name = ident();
            for (std::size_t i = 0; i < vars_.size(); ++i)
                if (vars_[i] == name) return Poly::variable(vars_.size(), i);
            fail_parse("unknown identifier '" + name + "'");
        }
        if (c == '\0') fail_parse("unexpected end of polynomial");
        fail_parse("unexpected character '" + std::string(1, c) + "'");
    }

    long integer() {
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            fail_parse("expected integer");
        long v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (get() - '0');
            if (v > 100000000L) fail_parse("integer literal too large");
        }
        return v;
    }

    std::string ident() {
        std::string name;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
            name += get();
        return name;
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char get() { return s_[pos_++]; }

    std::string_view s_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Poly parse_poly(std::string_view text, const std::vector<std::string>& vars) {
    return detail::PolyParser(text, vars).parse();
}

} // namespace charp
