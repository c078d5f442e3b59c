#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "charp/errors.hpp"

namespace charp {

// A monomial is an exponent vector over a fixed variable list.
using Monomial = std::vector<int>;

inline long total_degree(const Monomial& m) {
    return std::accumulate(m.begin(), m.end(), 0L);
}

inline bool mono_divides(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

// b / a; caller guarantees divisibility.
inline Monomial mono_div(const Monomial& b, const Monomial& a) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = b[i] - a[i];
    return r;
}

inline Monomial mono_lcm(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

inline Monomial mono_pow(const Monomial& a, int k) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * k;
    return r;
}

inline bool mono_coprime(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > 0 && b[i] > 0) return false;
    return true;
}

// Term orders. Grevlex is the workhorse; Elim(k) is a block order that
// compares the tail block [k, n) by grevlex first, so eliminating the
// variables at positions >= k means taking basis elements whose leading
// term has zero tail block.
struct MonomialOrder {
    enum class Kind { Grevlex, Elim };
    Kind kind = Kind::Grevlex;
    std::size_t elimStart = 0; // first eliminated position (Elim only)

    static MonomialOrder grevlex() { return {Kind::Grevlex, 0}; }
    static MonomialOrder elim(std::size_t start) { return {Kind::Elim, start}; }

    // grevlex on the index slice [lo, hi): higher degree wins; on equal
    // degree the one with the smaller exponent at the last differing
    // index wins.
    static int cmp_slice(const Monomial& a, const Monomial& b,
                         std::size_t lo, std::size_t hi) {
        long da = 0, db = 0;
        for (std::size_t i = lo; i < hi; ++i) { da += a[i]; db += b[i]; }
        if (da != db) return da < db ? -1 : 1;
        for (std::size_t i = hi; i-- > lo;) {
            if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
        }
        return 0;
    }

    // -1 if a < b, 0 if equal, 1 if a > b.
    int cmp(const Monomial& a, const Monomial& b) const {
        if (a.size() != b.size()) fail_internal("monomial arity mismatch");
        if (kind == Kind::Grevlex)
            return cmp_slice(a, b, 0, a.size());
        if (int c = cmp_slice(a, b, elimStart, a.size()); c != 0) return c;
        return cmp_slice(a, b, 0, elimStart);
    }

    bool less(const Monomial& a, const Monomial& b) const { return cmp(a, b) < 0; }
};

} // namespace charp
