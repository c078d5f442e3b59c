#pragma once

#include <map>
#include <string>
#include <vector>

#include "charp/ideal.hpp"

namespace charp {

// Base ring F_p[vars]/ideal with a designated sequence for the Cech
// complex (indices into vars; in the pipeline it generates an ideal
// primary to the irrelevant maximal ideal).
struct RingPresentation {
    std::vector<std::string> vars;
    std::vector<Poly> ideal;
    std::vector<std::size_t> cech;

    std::size_t nvars() const { return vars.size(); }

    friend bool operator==(const RingPresentation& a, const RingPresentation& b) {
        return a.vars == b.vars && a.ideal == b.ideal && a.cech == b.cech;
    }
};

// Element of a localization: numerator over the tower's variables,
// denominator a monomial in the designated sequence only, recorded as
// one exponent per sequence entry.
struct Fraction {
    Poly numerator;
    std::vector<int> denomExponents;
};

struct TowerLevel {
    std::string var;
    Poly relation; // monic in `var`, over all variables up to and including it
};

struct InjectivityReport {
    bool ok = false;
    std::vector<Poly> elimBasis; // certificate: contraction to the base variables
};

// Module-finite extension of the base, presented by a stack of monic
// adjunctions plus auxiliary relations (fraction identities and
// imposed collapses). The stand-in for a subring of the algebraic
// closure of Frac(R); not required to be reduced.
class RingTower {
public:
    RingTower() = default;
    explicit RingTower(RingPresentation base, const Budgets& bud = {})
        : base_(std::move(base)), bud_(bud) {
        rebuild();
    }

    const RingPresentation& base() const { return base_; }
    const std::vector<TowerLevel>& levels() const { return levels_; }
    const std::vector<Poly>& aux_relations() const { return aux_; }
    const std::vector<std::string>& all_vars() const { return allVars_; }
    std::size_t nvars() const { return allVars_.size(); }
    long rank_bound() const { return rankBound_; }
    const IdealPresentation& combined() const { return combined_; }
    bool is_trivial() const { return levels_.empty() && aux_.empty(); }

    std::string fresh_var(const std::string& prefix) const {
        for (int k = 1;; ++k) {
            std::string name = prefix + std::to_string(k);
            bool used = false;
            for (const auto& v : allVars_)
                if (v == name) { used = true; break; }
            if (!used) return name;
        }
    }

    // Adjoin a root of h, monic in a fresh variable appended after the
    // existing ones. Aborts if the extension stops containing the base.
    RingTower adjoin_root(const std::string& var, const Poly& h) const {
        if (h.nvars() != nvars() + 1) fail_pre("adjunction relation has wrong arity");
        int d = monic_degree(h, nvars());
        RingTower t = *this;
        t.levels_.push_back({var, h});
        t.rankBound_ = checked_mul(rankBound_, d);
        t.rebuild();
        t.require_injective("after adjoining " + var);
        return t;
    }

    // Add a relation among existing variables (a fraction identity or a
    // justified collapse). recheck=false builds the object without the
    // base-injectivity gate, for inspecting bad presentations.
    RingTower impose_relation(const Poly& g, bool recheck = true) const {
        if (g.nvars() != nvars()) fail_pre("imposed relation has wrong arity");
        RingTower t = *this;
        t.aux_.push_back(g);
        t.rebuild();
        if (recheck) t.require_injective("after imposing a relation");
        return t;
    }

    bool zero_test(const Poly& u) const {
        if (u.nvars() != nvars()) fail_pre("element has wrong arity for this tower");
        return normal_form(u, combined_, bud_).is_zero();
    }

    // Zero in the localization inverting the given base variables:
    // numerator lies in the saturation of the defining ideal.
    bool loc_zero_at(const Poly& numerator, const std::vector<std::size_t>& inverted) const {
        if (numerator.is_zero()) return true;
        const IdealPresentation& sat = localized_ideal(inverted);
        return ideal_member(numerator, sat, bud_);
    }

    // Default zero test for a bare fraction: invert its denominator support.
    bool loc_zero_test(const Fraction& fr) const {
        std::vector<std::size_t> inv;
        for (std::size_t k = 0; k < fr.denomExponents.size(); ++k)
            if (fr.denomExponents[k] > 0) inv.push_back(base_.cech[k]);
        return loc_zero_at(fr.numerator, inv);
    }

    InjectivityReport injectivity_check() const {
        InjectivityReport rep;
        rep.elimBasis = elimination_basis(combined_.generators(), nvars(),
                                          base_.nvars(), bud_);
        IdealPresentation contracted(base_.nvars(), rep.elimBasis.empty()
                                         ? std::vector<Poly>{Poly::zero(base_.nvars())}
                                         : rep.elimBasis);
        IdealPresentation baseIdeal(base_.nvars(), base_.ideal);
        rep.ok = ideal_equal(contracted, baseIdeal, bud_);
        return rep;
    }

    // Free join over the identical base: both level stacks, second
    // stack's variables renamed apart; no identifications attempted.
    friend RingTower compositum(const RingTower& a, const RingTower& b) {
        if (!(a.base_ == b.base_)) fail_pre("compositum over different bases");
        RingTower t = a;
        const std::size_t nb = a.base_.nvars();
        for (std::size_t k = 0; k < b.levels_.size(); ++k) {
            // remap a poly over base + b-levels[0..k] to t's variables + 1
            std::vector<std::size_t> map(nb + k + 1);
            for (std::size_t i = 0; i < nb; ++i) map[i] = i;
            for (std::size_t i = 0; i < k; ++i) map[nb + i] = t.base_.nvars() + a.levels_.size() + i;
            map[nb + k] = t.nvars();
            std::string name = b.levels_[k].var;
            for (int suffix = 2; t.has_var(name); ++suffix)
                name = b.levels_[k].var + "_" + std::to_string(suffix);
            Poly rel = b.levels_[k].relation.remap_vars(map, t.nvars() + 1);
            t = t.adjoin_root(name, rel);
        }
        for (const auto& g : b.aux_) {
            // aux relations keep the arity they were imposed at
            if (g.nvars() < nb || g.nvars() > nb + b.levels_.size())
                fail_internal("auxiliary relation arity out of range");
            std::vector<std::size_t> map(g.nvars());
            for (std::size_t i = 0; i < nb; ++i) map[i] = i;
            for (std::size_t i = 0; nb + i < g.nvars(); ++i)
                map[nb + i] = nb + a.levels_.size() + i;
            t = t.impose_relation(g.remap_vars(map, t.nvars()));
        }
        return t;
    }

    const Budgets& budgets() const { return bud_; }
    void set_budgets(const Budgets& b) { bud_ = b; }

    // Cached saturation of the presented ideal at a product of variables:
    // the ideal of elements that die in the localization.
    const IdealPresentation& localized_ideal(std::vector<std::size_t> inverted) const {
        std::sort(inverted.begin(), inverted.end());
        inverted.erase(std::unique(inverted.begin(), inverted.end()), inverted.end());
        auto it = satCache_.find(inverted);
        if (it != satCache_.end()) return it->second;
        Poly prod = Poly::one(nvars());
        for (auto i : inverted) prod *= Poly::variable(nvars(), i);
        IdealPresentation sat = saturate(combined_, prod, bud_);
        return satCache_.emplace(std::move(inverted), std::move(sat)).first->second;
    }

    // Degree of h in variable `pos`, after checking the top coefficient
    // is the bare constant 1.
    static int monic_degree(const Poly& h, std::size_t pos) {
        int d = 0;
        for (const auto& t : h.terms()) d = std::max(d, t.m[pos]);
        if (d == 0) fail_pre("adjunction relation does not involve its variable");
        const Term* top = nullptr;
        for (const auto& t : h.terms()) {
            if (t.m[pos] != d) continue;
            if (top) fail_pre("adjunction relation is not monic");
            top = &t;
        }
        if (top->c != FpScalar::one() || total_degree(top->m) != d)
            fail_pre("adjunction relation is not monic");
        return d;
    }

private:
    void rebuild() {
        allVars_ = base_.vars;
        for (const auto& l : levels_) allVars_.push_back(l.var);
        std::vector<Poly> gens;
        for (const auto& g : base_.ideal) gens.push_back(g.extend_vars(allVars_.size()));
        for (const auto& l : levels_) gens.push_back(l.relation.extend_vars(allVars_.size()));
        for (const auto& g : aux_) gens.push_back(g.extend_vars(allVars_.size()));
        if (gens.empty()) gens.push_back(Poly::zero(allVars_.size()));
        combined_ = IdealPresentation(allVars_.size(), std::move(gens));
        satCache_.clear();
    }

    void require_injective(const std::string& when) const {
        if (!injectivity_check().ok)
            fail_internal("tower stopped containing its base " + when);
    }

    bool has_var(const std::string& name) const {
        for (const auto& v : allVars_)
            if (v == name) return true;
        return false;
    }

    static long checked_mul(long a, int b) {
        if (a > (1L << 40) / b) fail_budget("tower rank bound overflow");
        return a * b;
    }

    RingPresentation base_;
    std::vector<TowerLevel> levels_;
    std::vector<Poly> aux_;
    Budgets bud_;

    std::vector<std::string> allVars_;
    IdealPresentation combined_;
    long rankBound_ = 1;
    mutable std::map<std::vector<std::size_t>, IdealPresentation> satCache_;
};

} // namespace charp
