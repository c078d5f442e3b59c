#pragma once

#include <map>
#include <vector>

#include "charp/ideal.hpp"
#include "charp/linalg.hpp"

namespace charp {

// All exponent vectors of total degree t, sorted descending grevlex.
inline std::vector<Monomial> monomials_of_degree(std::size_t nvars, long t) {
    std::vector<Monomial> out;
    if (t < 0) return out;
    if (nvars == 0) {
        if (t == 0) out.push_back({});
        return out;
    }
    Monomial cur(nvars, 0);
    auto rec = [&](auto&& self, std::size_t i, long rest) -> void {
        if (i + 1 == nvars) {
            cur[i] = static_cast<int>(rest);
            out.push_back(cur);
            return;
        }
        for (long e = rest; e >= 0; --e) {
            cur[i] = static_cast<int>(e);
            self(self, i + 1, rest - e);
        }
    };
    rec(rec, 0, t);
    MonomialOrder g = MonomialOrder::grevlex();
    std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) {
        return g.cmp(a, b) > 0;
    });
    return out;
}

inline void require_standard_graded(const IdealPresentation& I) {
    for (const auto& g : I.generators())
        if (!g.is_homogeneous())
            fail_pre("presentation is not standard graded (inhomogeneous generator)");
}

// Monomials of degree t whose normal forms are linearly independent and
// span R_t: normal-form every degree-t monomial, then greedy exact rank
// selection in enumeration order.
inline std::vector<Monomial> graded_basis(const IdealPresentation& I, long t,
                                          const Budgets& bud = {}) {
    require_standard_graded(I);
    std::vector<Monomial> candidates = monomials_of_degree(I.nvars(), t);
    std::vector<Monomial> chosen;
    // rows kept in echelon form: (pivot coordinate index, reduced row)
    std::map<Monomial, std::size_t> coordIndex;
    std::vector<std::vector<FpScalar>> rows;
    std::vector<std::size_t> rowPivot;
    auto coord_of = [&](const Monomial& m) {
        auto it = coordIndex.find(m);
        if (it != coordIndex.end()) return it->second;
        std::size_t idx = coordIndex.size();
        coordIndex.emplace(m, idx);
        for (auto& r : rows) r.resize(idx + 1, FpScalar::zero());
        return idx;
    };
    for (const auto& m : candidates) {
        Poly nf = normal_form(Poly::monomial(I.nvars(), FpScalar::one(), m), I, bud);
        if (nf.is_zero()) continue;
        std::vector<FpScalar> v(coordIndex.size(), FpScalar::zero());
        for (const auto& term : nf.terms()) {
            std::size_t ci = coord_of(term.m);
            if (ci >= v.size()) v.resize(ci + 1, FpScalar::zero());
            v[ci] = term.c;
        }
        v.resize(coordIndex.size(), FpScalar::zero());
        // eliminate against kept rows
        for (std::size_t r = 0; r < rows.size(); ++r) {
            FpScalar f = v[rowPivot[r]];
            if (f.is_zero()) continue;
            for (std::size_t j = 0; j < v.size(); ++j) v[j] -= f * rows[r][j];
        }
        std::size_t piv = v.size();
        for (std::size_t j = 0; j < v.size(); ++j)
            if (!v[j].is_zero()) { piv = j; break; }
        if (piv == v.size()) continue; // dependent
        FpScalar inv = v[piv].inv();
        for (auto& x : v) x *= inv;
        rows.push_back(std::move(v));
        rowPivot.push_back(piv);
        chosen.push_back(m);
    }
    return chosen;
}

inline long hilbert_function(const IdealPresentation& I, long t, const Budgets& bud = {}) {
    return static_cast<long>(graded_basis(I, t, bud).size());
}

// Coordinate system on R_t from the standard monomials (those outside
// the leading-term ideal). Normal forms of degree-t elements live here.
class GradedPiece {
public:
    static GradedPiece standard(const IdealPresentation& I, long t, const Budgets& bud = {}) {
        GradedPiece gp;
        gp.nvars_ = I.nvars();
        gp.t_ = t;
        const auto& gb = I.basis(bud);
        std::vector<Monomial> lts;
        for (const auto& g : gb)
            if (!g.is_zero()) lts.push_back(g.leading(I.order()).m);
        for (const auto& m : monomials_of_degree(I.nvars(), t)) {
            bool standardMono = true;
            for (const auto& lt : lts)
                if (mono_divides(lt, m)) { standardMono = false; break; }
            if (standardMono) gp.monos_.push_back(m);
        }
        for (std::size_t i = 0; i < gp.monos_.size(); ++i)
            gp.index_.emplace(gp.monos_[i], i);
        return gp;
    }

    std::size_t dim() const { return monos_.size(); }
    long degree() const { return t_; }
    const std::vector<Monomial>& monomials() const { return monos_; }

    // f must already be a normal form, homogeneous of degree t.
    std::vector<FpScalar> coords(const Poly& f) const {
        std::vector<FpScalar> v(monos_.size(), FpScalar::zero());
        for (const auto& term : f.terms()) {
            auto it = index_.find(term.m);
            if (it == index_.end())
                fail_internal("normal form leaves the standard monomial basis");
            v[it->second] = term.c;
        }
        return v;
    }

    Poly from_coords(const std::vector<FpScalar>& v) const {
        TermVec t;
        for (std::size_t i = 0; i < monos_.size(); ++i)
            if (!v[i].is_zero()) t.push_back({v[i], monos_[i]});
        return Poly(nvars_, normalize_terms(std::move(t), MonomialOrder::grevlex()));
    }

private:
    std::size_t nvars_ = 0;
    long t_ = 0;
    std::vector<Monomial> monos_;
    std::map<Monomial, std::size_t> index_;
};

} // namespace charp
