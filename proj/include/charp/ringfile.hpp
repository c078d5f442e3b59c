#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "charp/polytext.hpp"
#include "charp/tower.hpp"

namespace charp {

// Line-oriented presentation of a base ring:
//
//   # optional comments
//   p = 5
//   vars = a, b, c, d
//   ideal = a*d - b*c, b^2*d - a*c^2, b^3 - a^2*c, c^3 - b*d^2
//   cech = a, d
//
// Every key appears exactly once; `ideal` may be empty. Parsing sets
// the session modulus as a side effect.
struct RingFile {
    long p = 0;
    RingPresentation pres;
};

namespace detail {

inline std::string strip(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> split_commas(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= s.size(); ++k) {
        if (k == s.size() || s[k] == ',') {
            std::string piece = strip(s.substr(start, k - start));
            if (!piece.empty()) out.push_back(piece);
            start = k + 1;
        }
    }
    return out;
}

inline bool valid_identifier(const std::string& s) {
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

} // namespace detail

inline RingFile parse_ring(std::string_view text) {
    std::string pLine, varsLine, idealLine, cechLine;
    bool haveP = false, haveVars = false, haveIdeal = false, haveCech = false;
    std::size_t pos = 0;
    int lineNo = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string line = detail::strip(text.substr(pos, nl - pos));
        pos = nl + 1;
        ++lineNo;
        if (line.empty() || line[0] == '#') {
            if (pos > text.size()) break;
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail_parse("line " + std::to_string(lineNo) + ": expected `key = value`");
        std::string key = detail::strip(std::string_view(line).substr(0, eq));
        std::string val = detail::strip(std::string_view(line).substr(eq + 1));
        auto take = [&](std::string& slot, bool& have) {
            if (have) fail_parse("duplicate key `" + key + "`");
            slot = val;
            have = true;
        };
        if (key == "p") take(pLine, haveP);
        else if (key == "vars") take(varsLine, haveVars);
        else if (key == "ideal") take(idealLine, haveIdeal);
        else if (key == "cech") take(cechLine, haveCech);
        else fail_parse("unknown key `" + key + "`");
        if (pos > text.size()) break;
    }
    if (!haveP) fail_parse("missing key `p`");
    if (!haveVars) fail_parse("missing key `vars`");
    if (!haveCech) fail_parse("missing key `cech`");

    RingFile out;
    try {
        out.p = std::stol(pLine);
    } catch (const std::exception&) {
        fail_parse("`p` is not an integer: " + pLine);
    }
    if (out.p < 2) fail_parse("non-prime modulus " + pLine);
    FpContext::set(static_cast<std::uint32_t>(out.p)); // rejects composites

    out.pres.vars = detail::split_commas(varsLine);
    if (out.pres.vars.empty()) fail_parse("`vars` lists no variables");
    for (const auto& v : out.pres.vars) {
        if (!detail::valid_identifier(v)) fail_parse("bad variable name `" + v + "`");
        for (const auto& w : out.pres.vars)
            if (&v != &w && v == w) fail_parse("repeated variable name `" + v + "`");
    }

    if (haveIdeal) {
        int k = 0;
        for (const auto& src : detail::split_commas(idealLine)) {
            ++k;
            Poly g = parse_poly(src, out.pres.vars);
            if (!g.is_zero() && !g.homogeneous_degree()) {
                std::string degs;
                for (const auto& t : g.terms()) {
                    if (!degs.empty()) degs += ", ";
                    degs += std::to_string(total_degree(t.m));
                }
                fail_parse("ideal generator " + std::to_string(k) +
                           " is inhomogeneous (term degrees " + degs + ")");
            }
            if (!g.is_zero()) out.pres.ideal.push_back(std::move(g));
        }
    }

    for (const auto& name : detail::split_commas(cechLine)) {
        std::size_t idx = out.pres.vars.size();
        for (std::size_t i = 0; i < out.pres.vars.size(); ++i)
            if (out.pres.vars[i] == name) idx = i;
        if (idx == out.pres.vars.size())
            fail_parse("cech entry `" + name + "` is not a declared variable");
        for (auto j : out.pres.cech)
            if (j == idx) fail_parse("cech entry `" + name + "` repeated");
        out.pres.cech.push_back(idx);
    }
    if (out.pres.cech.empty()) fail_parse("`cech` lists no variables");
    return out;
}

// Canonical round-trip form; equal presentations print identically, so
// the printout doubles as hash input.
inline std::string serialize_ring(long p, const RingPresentation& pres) {
    std::string out = "p = " + std::to_string(p) + "\n";
    out += "vars = ";
    for (std::size_t i = 0; i < pres.vars.size(); ++i)
        out += (i ? ", " : "") + pres.vars[i];
    out += "\nideal = ";
    for (std::size_t i = 0; i < pres.ideal.size(); ++i)
        out += (i ? ", " : "") + poly_to_string(pres.ideal[i], pres.vars);
    out += "\ncech = ";
    for (std::size_t i = 0; i < pres.cech.size(); ++i)
        out += (i ? ", " : "") + pres.vars[pres.cech[i]];
    out += "\n";
    return out;
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string ring_hash(long p, const RingPresentation& pres) {
    std::uint64_t h = fnv1a64(serialize_ring(p, pres));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace charp
