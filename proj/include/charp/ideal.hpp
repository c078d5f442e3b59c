#pragma once

#include <bit>
#include <optional>
#include <vector>

#include "charp/budget.hpp"
#include "charp/poly.hpp"

namespace charp {

namespace detail {

// Convert between canonical (grevlex) Poly storage and working term
// vectors sorted under an arbitrary order.
inline TermVec to_order(const Poly& p, const MonomialOrder& ord) {
    if (ord.kind == MonomialOrder::Kind::Grevlex) return p.terms();
    return normalize_terms(p.terms(), ord);
}

inline Poly from_order(std::size_t nvars, TermVec v, const MonomialOrder& ord) {
    if (ord.kind == MonomialOrder::Kind::Grevlex) return Poly(nvars, std::move(v));
    return Poly(nvars, normalize_terms(std::move(v), MonomialOrder::grevlex()));
}

} // namespace detail

struct DivisionResult {
    std::vector<Poly> quotients; // one per divisor: f = sum q_i g_i + r
    Poly remainder;
};

// Multivariate division with full tail reduction. Deterministic: always
// cancels the current leading term against the first divisor whose
// leading term divides it.
inline DivisionResult divide(const Poly& f, const std::vector<Poly>& divisors,
                             const MonomialOrder& ord = MonomialOrder::grevlex(),
                             const Budgets& bud = {}) {
    const std::size_t n = f.nvars();
    struct Div { TermVec t; Term lt; };
    std::vector<Div> ds;
    ds.reserve(divisors.size());
    for (const auto& g : divisors) {
        TermVec t = detail::to_order(g, ord);
        if (t.empty()) fail_pre("zero divisor in division");
        Term lt = t[0];
        ds.push_back({std::move(t), lt});
    }

    std::vector<TermVec> quot(ds.size());
    TermVec rem, h = detail::to_order(f, ord);
    long steps = 0;
    while (!h.empty()) {
        if (++steps % 256 == 0) bud.check_deadline();
        if (static_cast<long>(h.size()) > bud.support_cap)
            fail_budget("polynomial support exceeded cap during reduction");
        const Term& lead = h[0];
        bool reduced = false;
        for (std::size_t k = 0; k < ds.size(); ++k) {
            if (!mono_divides(ds[k].lt.m, lead.m)) continue;
            Term q{lead.c * ds[k].lt.c.inv(), mono_div(lead.m, ds[k].lt.m)};
            quot[k] = merge_add(quot[k], {q}, ord);
            h = merge_add(h, negate(term_mul(ds[k].t, q)), ord);
            reduced = true;
            break;
        }
        if (!reduced) {
            rem.push_back(lead);
            h.erase(h.begin());
        }
    }

    DivisionResult out;
    out.remainder = detail::from_order(n, std::move(rem), ord);
    out.quotients.reserve(ds.size());
    for (auto& q : quot) out.quotients.push_back(detail::from_order(n, std::move(q), ord));
    return out;
}

inline Poly reduce(const Poly& f, const std::vector<Poly>& basis,
                   const MonomialOrder& ord = MonomialOrder::grevlex(),
                   const Budgets& bud = {}) {
    return divide(f, basis, ord, bud).remainder;
}

// Buchberger with sugar-strategy pair selection and the coprime-leading-
// term criterion. Returns the reduced Groebner basis, monic, sorted by
// ascending leading term (unique for the ideal and order).
inline std::vector<Poly> buchberger(const std::vector<Poly>& gens,
                                    const MonomialOrder& ord = MonomialOrder::grevlex(),
                                    const Budgets& bud = {}) {
    std::size_t n = 0;
    for (const auto& g : gens) n = std::max(n, g.nvars());

    struct Elem { TermVec t; Term lt; long sugar; };
    std::vector<Elem> basis;
    auto push_elem = [&](TermVec t) {
        if (t.empty()) return false;
        Term lt = t[0];
        long sug = 0;
        for (const auto& tm : t) sug = std::max(sug, total_degree(tm.m));
        basis.push_back({std::move(t), lt, sug});
        return true;
    };

    struct Pair { std::size_t i, j; Monomial lcm; long sugar; };
    std::vector<Pair> pending;
    auto add_pairs = [&](std::size_t j) {
        for (std::size_t i = 0; i < j; ++i) {
            if (mono_coprime(basis[i].lt.m, basis[j].lt.m)) continue;
            Monomial l = mono_lcm(basis[i].lt.m, basis[j].lt.m);
            long sug = std::max(basis[i].sugar + total_degree(mono_div(l, basis[i].lt.m)),
                                basis[j].sugar + total_degree(mono_div(l, basis[j].lt.m)));
            pending.push_back({i, j, std::move(l), sug});
        }
    };

    for (const auto& g : gens)
        if (push_elem(detail::to_order(g, ord))) add_pairs(basis.size() - 1);

    auto reduce_terms = [&](TermVec h) -> TermVec {
        TermVec rem;
        while (!h.empty()) {
            if (static_cast<long>(h.size()) > bud.support_cap)
                fail_budget("polynomial support exceeded cap in basis computation");
            const Term& lead = h[0];
            bool hit = false;
            for (const auto& e : basis) {
                if (!mono_divides(e.lt.m, lead.m)) continue;
                Term q{lead.c * e.lt.c.inv(), mono_div(lead.m, e.lt.m)};
                h = merge_add(h, negate(term_mul(e.t, q)), ord);
                hit = true;
                break;
            }
            if (!hit) {
                rem.push_back(lead);
                h.erase(h.begin());
            }
        }
        return rem;
    };

    long processed = 0;
    while (!pending.empty()) {
        if (++processed > bud.pair_cap) fail_budget("S-pair cap exceeded");
        bud.check_deadline();
        // min by (sugar, lcm degree, lcm under ord, indices)
        std::size_t best = 0;
        for (std::size_t k = 1; k < pending.size(); ++k) {
            const Pair &a = pending[k], &b = pending[best];
            long da = total_degree(a.lcm), db = total_degree(b.lcm);
            int c;
            if (a.sugar != b.sugar) c = a.sugar < b.sugar ? -1 : 1;
            else if (da != db) c = da < db ? -1 : 1;
            else if (int oc = ord.cmp(a.lcm, b.lcm); oc != 0) c = oc;
            else c = (a.j < b.j || (a.j == b.j && a.i < b.i)) ? -1 : 1;
            if (c < 0) best = k;
        }
        Pair pr = std::move(pending[best]);
        pending.erase(pending.begin() + best);

        const Elem &gi = basis[pr.i], &gj = basis[pr.j];
        Term ti{gj.lt.c, mono_div(pr.lcm, gi.lt.m)};
        Term tj{gi.lt.c, mono_div(pr.lcm, gj.lt.m)};
        TermVec s = merge_add(term_mul(gi.t, ti), negate(term_mul(gj.t, tj)), ord);
        TermVec r = reduce_terms(std::move(s));
        if (push_elem(std::move(r))) add_pairs(basis.size() - 1);
    }

    // minimalize: drop elements whose leading term another divides
    std::vector<bool> keep(basis.size(), true);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) {
            if (i == j || !keep[i] || !keep[j]) continue;
            if (mono_divides(basis[j].lt.m, basis[i].lt.m) &&
                !(basis[j].lt.m == basis[i].lt.m && j > i)) {
                keep[i] = false;
                break;
            }
        }
    std::vector<Poly> minimal;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (keep[i]) minimal.push_back(detail::from_order(n, basis[i].t, ord));

    // inter-reduce to the unique reduced basis
    std::vector<Poly> reduced;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<Poly> others;
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        Poly r = others.empty() ? minimal[i] : reduce(minimal[i], others, ord, bud);
        if (!r.is_zero()) reduced.push_back(r.monic());
    }
    std::sort(reduced.begin(), reduced.end(), [&](const Poly& a, const Poly& b) {
        return ord.cmp(a.leading(ord).m, b.leading(ord).m) < 0;
    });
    return reduced;
}

// Quotient-ring presentation: F_p[vars]/I with a cached reduced basis.
class IdealPresentation {
public:
    IdealPresentation() = default;
    IdealPresentation(std::size_t nvars, std::vector<Poly> gens,
                      MonomialOrder ord = MonomialOrder::grevlex())
        : nvars_(nvars), gens_(std::move(gens)), ord_(ord) {}

    std::size_t nvars() const { return nvars_; }
    const std::vector<Poly>& generators() const { return gens_; }
    const MonomialOrder& order() const { return ord_; }

    const std::vector<Poly>& basis(const Budgets& bud = {}) const {
        if (!gb_) gb_ = buchberger(gens_, ord_, bud);
        return *gb_;
    }

    void set_basis(std::vector<Poly> gb) { gb_ = std::move(gb); }

private:
    std::size_t nvars_ = 0;
    std::vector<Poly> gens_;
    MonomialOrder ord_ = MonomialOrder::grevlex();
    mutable std::optional<std::vector<Poly>> gb_;
};

inline Poly normal_form(const Poly& f, const IdealPresentation& I, const Budgets& bud = {}) {
    if (f.nvars() != I.nvars()) fail_pre("variable count mismatch in normal form");
    const auto& gb = I.basis(bud);
    if (gb.empty()) return f;
    return reduce(f, gb, I.order(), bud);
}

inline bool ideal_member(const Poly& f, const IdealPresentation& I, const Budgets& bud = {}) {
    return normal_form(f, I, bud).is_zero();
}

// Reduced bases are unique per (ideal, order), so ideal equality is
// list equality of the two reduced bases under a common order.
inline bool ideal_equal(const IdealPresentation& I, const IdealPresentation& J,
                        const Budgets& bud = {}) {
    if (I.nvars() != J.nvars()) return false;
    const MonomialOrder g = MonomialOrder::grevlex();
    auto a = buchberger(I.generators(), g, bud);
    auto b = buchberger(J.generators(), g, bud);
    return a == b;
}

// Basis of the ideal's contraction to the first `keep` variables,
// via a block order eliminating the tail.
inline std::vector<Poly> elimination_basis(const std::vector<Poly>& gens,
                                           std::size_t nvars, std::size_t keep,
                                           const Budgets& bud = {}) {
    auto gb = buchberger(gens, MonomialOrder::elim(keep), bud);
    std::vector<Poly> out;
    for (const auto& g : gb) {
        bool tailFree = true;
        for (const auto& t : g.terms())
            for (std::size_t i = keep; i < nvars && tailFree; ++i)
                if (t.m[i] != 0) tailFree = false;
        if (!tailFree) continue;
        TermVec shrunk;
        for (const auto& t : g.terms()) {
            Monomial m(t.m.begin(), t.m.begin() + keep);
            shrunk.push_back({t.c, std::move(m)});
        }
        out.push_back(Poly(keep, normalize_terms(std::move(shrunk), MonomialOrder::grevlex())));
    }
    return out;
}

// (I : f), by intersecting with (f) and dividing out f exactly.
inline IdealPresentation colon(const IdealPresentation& I, const Poly& f,
                               const Budgets& bud = {}) {
    if (f.is_zero()) fail_pre("colon by zero");
    const std::size_t n = I.nvars();
    std::vector<Poly> aug; // over n+1 vars, t appended last
    Poly t = Poly::variable(n + 1, n);
    for (const auto& g : I.generators()) aug.push_back(t * g.extend_vars(n + 1));
    Poly fx = f.extend_vars(n + 1);
    aug.push_back((Poly::one(n + 1) - t) * fx);
    std::vector<Poly> inter = elimination_basis(aug, n + 1, n, bud); // I cap (f)
    std::vector<Poly> out;
    for (const auto& g : inter) {
        DivisionResult dr = divide(g, {f}, MonomialOrder::grevlex(), bud);
        if (!dr.remainder.is_zero())
            fail_internal("inexact division in colon computation");
        out.push_back(dr.quotients[0]);
    }
    if (out.empty()) out.push_back(Poly::zero(n));
    return IdealPresentation(n, std::move(out));
}

// (I : f^infinity) via the Rabinowitsch trick, with the stabilization
// certificate (sat : f) = sat checked before returning.
inline IdealPresentation saturate(const IdealPresentation& I, const Poly& f,
                                  const Budgets& bud = {}) {
    const std::size_t n = I.nvars();
    std::vector<Poly> aug;
    for (const auto& g : I.generators()) aug.push_back(g.extend_vars(n + 1));
    Poly t = Poly::variable(n + 1, n);
    aug.push_back(Poly::one(n + 1) - t * f.extend_vars(n + 1));
    std::vector<Poly> sat = elimination_basis(aug, n + 1, n, bud);
    if (sat.empty()) sat.push_back(Poly::zero(n));
    IdealPresentation result(n, std::move(sat));
    if (!f.is_zero()) {
        IdealPresentation quo = colon(result, f, bud);
        if (!ideal_equal(quo, result, bud))
            fail_internal("saturation chain did not stabilize");
    }
    return result;
}

// Krull dimension of F_p[vars]/I: the largest variable subset S such
// that no leading term of the reduced basis is supported inside S.
inline int krull_dim(const IdealPresentation& I, const Budgets& bud = {}) {
    const std::size_t n = I.nvars();
    if (n > 20) fail_budget("too many variables for subset dimension scan");
    std::vector<Monomial> lts;
    for (const auto& g : I.basis(bud)) {
        if (g.is_zero()) continue;
        const Term& lt = g.leading(I.order());
        if (total_degree(lt.m) == 0) return -1; // unit ideal
        lts.push_back(lt.m);
    }
    int best = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        bool independent = true;
        for (const auto& m : lts) {
            bool inside = true;
            for (std::size_t i = 0; i < n && inside; ++i)
                if (m[i] > 0 && !(mask & (1u << i))) inside = false;
            if (inside) { independent = false; break; }
        }
        if (independent) best = std::max(best, static_cast<int>(std::popcount(mask)));
    }
    return best;
}

// True iff F_p[vars]/I is a finite-dimensional vector space: every
// variable shows up as a pure power among the leading terms.
inline bool finite_colength(const IdealPresentation& I, const Budgets& bud = {}) {
    const std::size_t n = I.nvars();
    std::vector<bool> covered(n, false);
    for (const auto& g : I.basis(bud)) {
        if (g.is_zero()) continue;
        const Term& lt = g.leading(I.order());
        int nz = -1;
        bool pure = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (lt.m[i] == 0) continue;
            if (nz >= 0) { pure = false; break; }
            nz = static_cast<int>(i);
        }
        if (pure && nz >= 0) covered[nz] = true;
        if (pure && nz < 0) return true; // unit ideal
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!covered[i]) return false;
    return true;
}

} // namespace charp
