#pragma once

#include "charp/koszul.hpp"

namespace charp {

// g(T) = T^{p^s} - sum_j lowerCoeffs[j] * T^{p^j}, j = 0..s-1.
// All exponents are p-powers, so g is additive in characteristic p.
// s = 0 is the degenerate g(T) = T used for classes that are already zero.
struct FrobeniusPoly {
    int s = 0;
    std::vector<Poly> lowerCoeffs;
};

// A cohomology class carried by an explicit cocycle.
struct ClassHandle {
    Cochain cocycle;
    long internalDegree = 0;
    std::optional<std::vector<FpScalar>> pieceRef;
};

// componentwise p-th power: r/x^e -> r^p/x^{pe}
inline Cochain frob_cochain(const CechComplex& C, const Cochain& c) {
    C.validate(c);
    const long p = FpContext::modulus();
    Cochain out;
    out.level = c.level;
    for (const auto& [J, fr] : c.comps) {
        Fraction f{fr.numerator.pow_p(1), fr.denomExponents};
        for (auto& e : f.denomExponents) {
            if (e > (1 << 20) / p) fail_budget("denominator exponent overflow under Frobenius");
            e = static_cast<int>(e * p);
        }
        out.comps[J] = std::move(f);
    }
    return out;
}

inline Cochain frob_power(const CechComplex& C, Cochain c, int times) {
    for (int k = 0; k < times; ++k) c = frob_cochain(C, c);
    return c;
}

// g evaluated on a ring element of the given arity
inline Poly apply_frobenius_poly(const FrobeniusPoly& g, const Poly& f) {
    Poly out = f.pow_p(g.s);
    for (int j = 0; j < g.s; ++j)
        out -= g.lowerCoeffs[j].extend_vars(f.nvars()) * f.pow_p(j);
    return out;
}

// g evaluated componentwise on a cochain; commutes with the differential
// because the coefficients are global ring elements
inline Cochain apply_frobenius_poly(const CechComplex& C, const FrobeniusPoly& g,
                                    const Cochain& c) {
    Cochain out = frob_power(C, c, g.s);
    for (int j = 0; j < g.s; ++j) {
        Poly cj = g.lowerCoeffs[j].extend_vars(C.ring().nvars());
        out = C.sub(out, C.scale(frob_power(C, c, j), cj));
    }
    return out;
}

namespace detail {

inline void validate_class(const CechComplex& C, const ClassHandle& a) {
    C.validate(a.cocycle);
    if (!C.is_cocycle(a.cocycle)) fail_pre("class handle does not carry a cocycle");
    for (const auto& [J, fr] : a.cocycle.comps)
        if (fraction_degree(fr) != a.internalDegree)
            fail_pre("class handle degree does not match its cocycle");
}

// Finite-length evidence for a nonzero-degree orbit: the graded pieces
// on the guard bands flanking the scanned degrees must vanish.
inline void require_guard_band(const CechComplex& C, int i, long tMin, long tMax,
                               std::map<long, std::size_t>& dimCache) {
    const int G = C.ring().budgets().guard;
    auto dim_at = [&](long t) {
        auto it = dimCache.find(t);
        if (it != dimCache.end()) return it->second;
        std::size_t d = lc_graded_piece(C, i, t).dimension;
        dimCache.emplace(t, d);
        return d;
    };
    for (long t = tMin - G; t < tMin; ++t)
        if (dim_at(t) != 0)
            fail_pre("finite length not evidenced: nonzero graded piece in the guard band"
                     " at degree " + std::to_string(t));
    for (long t = tMax + 1; t <= tMax + G; ++t)
        if (dim_at(t) != 0)
            fail_pre("finite length not evidenced: nonzero graded piece in the guard band"
                     " at degree " + std::to_string(t));
}

} // namespace detail

// The monic p-polynomial relation g(alpha) = 0, certified by the
// bounding cochain for g(alpha-tilde). Search order: ascending s, and at
// each s a pure boundary is preferred to nonzero lower coefficients.
struct FrobeniusRelation {
    FrobeniusPoly g;
    Cochain beta;
    int exponent = 0; // uniform denominator exponent of beta
};

inline FrobeniusRelation find_relation(const CechComplex& C, const ClassHandle& alpha) {
    detail::validate_class(C, alpha);
    const Budgets& bud = C.ring().budgets();
    const long t = alpha.internalDegree;
    const int i = alpha.cocycle.level;

    FrobeniusRelation out;
    if (alpha.cocycle.empty()) {
        out.g = {0, {}};
        out.beta.level = std::max(0, i - 1);
        return out;
    }
    // a class that is already a boundary gets the degenerate g(T) = T
    if (auto b = boundary_solve(C, alpha.cocycle, bud.exp_cap, t)) {
        out.g = {0, {}};
        out.beta = *b;
        out.exponent = detail::max_denom_exponent(out.beta);
        return out;
    }

    std::map<long, std::size_t> dimCache;
    std::vector<Cochain> orbit{alpha.cocycle};
    std::vector<long> degs{t};
    long p = FpContext::modulus();
    for (int s = 1; s <= bud.orbit_cap; ++s) {
        bud.check_deadline();
        orbit.push_back(frob_cochain(C, orbit.back()));
        degs.push_back(degs.back() * p);
        if (detail::max_denom_exponent(orbit.back()) > bud.exp_cap)
            fail_budget("orbit exponents exceed the denominator exponent cap; "
                        "raise exp_cap to search further");
        if (t != 0) {
            long lo = std::min(degs.front(), degs.back());
            long hi = std::max(degs.front(), degs.back());
            detail::require_guard_band(C, i, lo, hi, dimCache);
        }
        std::vector<std::pair<const Cochain*, long>> gens;
        for (int j = 0; j < s; ++j) gens.push_back({&orbit[j], degs[j]});
        auto r = membership_solve(C, orbit[s], degs[s], gens, bud.exp_cap);
        if (!r) continue;
        out.g = {s, r->coeffs};
        out.beta = r->beta;
        out.exponent = r->exponent;
        return out;
    }
    fail_budget("no Frobenius relation found within the orbit cap");
}

// [alpha, alpha^p, ...] until a member is a boundary (appended as the
// zero class) or depends on earlier members (orbit closed).
inline std::vector<ClassHandle> frob_orbit(const CechComplex& C, const ClassHandle& alpha,
                                           int cap) {
    detail::validate_class(C, alpha);
    const Budgets& bud = C.ring().budgets();
    const long p = FpContext::modulus();
    if (alpha.cocycle.empty()) {
        Cochain zero;
        zero.level = alpha.cocycle.level;
        return {ClassHandle{zero, alpha.internalDegree, {}}};
    }
    std::vector<ClassHandle> out{alpha};
    Cochain cur = alpha.cocycle;
    long deg = alpha.internalDegree;
    for (int k = 1; k <= cap; ++k) {
        bud.check_deadline();
        cur = frob_cochain(C, cur);
        deg *= p;
        if (detail::max_denom_exponent(cur) > bud.exp_cap)
            fail_budget("orbit exponents exceed the denominator exponent cap; "
                        "raise exp_cap to search further");
        if (boundary_solve(C, cur, bud.exp_cap, deg)) {
            Cochain zero;
            zero.level = cur.level;
            out.push_back({zero, deg, {}});
            return out;
        }
        std::vector<std::pair<const Cochain*, long>> gens;
        for (const auto& h : out) gens.push_back({&h.cocycle, h.internalDegree});
        if (membership_solve(C, cur, deg, gens, bud.exp_cap)) return out;
        out.push_back({cur, deg, {}});
    }
    fail_budget("Frobenius orbit not resolved below the cap");
}

} // namespace charp
