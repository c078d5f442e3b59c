#pragma once

#include <map>
#include <vector>

#include "charp/tower.hpp"

namespace charp {

// Strictly increasing positions into the designated sequence.
using Subset = std::vector<std::size_t>;

// All size-k subsets of {0..d-1}, lexicographic.
inline std::vector<Subset> index_subsets(std::size_t d, std::size_t k) {
    std::vector<Subset> out;
    if (k > d) return out;
    Subset cur;
    auto rec = [&](auto&& self, std::size_t next) -> void {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t j = next; j + (k - cur.size()) <= d; ++j) {
            cur.push_back(j);
            self(self, j + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

// Cochain of the complex 0 -> R -> (+) R_{x_j} -> (+) R_{x_j x_k} -> ...
// Only components with nonzero numerator polynomials are stored.
struct Cochain {
    int level = 0;
    std::map<Subset, Fraction> comps;

    bool empty() const { return comps.empty(); }
};

inline long fraction_degree(const Fraction& fr) {
    auto d = fr.numerator.homogeneous_degree();
    if (!d) fail_pre("inhomogeneous numerator has no internal degree");
    long e = 0;
    for (int x : fr.denomExponents) e += x;
    return *d - e;
}

class CechComplex {
public:
    explicit CechComplex(RingTower ring) : ring_(std::move(ring)) {
        seq_ = ring_.base().cech;
        if (seq_.empty()) fail_pre("empty designated sequence");
        for (auto j : seq_)
            if (j >= ring_.base().nvars()) fail_pre("sequence entry outside base variables");
    }

    const RingTower& ring() const { return ring_; }
    std::size_t d() const { return seq_.size(); }
    const std::vector<std::size_t>& sequence() const { return seq_; }

    // the sequence must cut the base down to a finite-dimensional space
    bool sequence_is_m_primary() const {
        std::vector<Poly> gens = ring_.base().ideal;
        for (auto j : seq_) gens.push_back(Poly::variable(ring_.base().nvars(), j));
        return finite_colength(IdealPresentation(ring_.base().nvars(), gens),
                               ring_.budgets());
    }

    void validate(const Cochain& c) const {
        if (c.level < 0 || c.level > static_cast<int>(d()))
            fail_pre("cochain level out of range");
        for (const auto& [J, fr] : c.comps) {
            if (J.size() != static_cast<std::size_t>(c.level))
                fail_pre("component subset size does not match level");
            for (std::size_t k = 0; k + 1 < J.size(); ++k)
                if (J[k] >= J[k + 1]) fail_pre("component subset not increasing");
            if (!J.empty() && J.back() >= d()) fail_pre("component subset out of range");
            if (fr.denomExponents.size() != d())
                fail_pre("denominator vector has wrong length");
            for (std::size_t k = 0; k < d(); ++k) {
                if (fr.denomExponents[k] < 0) fail_pre("negative denominator exponent");
                bool inJ = std::find(J.begin(), J.end(), k) != J.end();
                if (fr.denomExponents[k] > 0 && !inJ)
                    fail_pre("denominator uses a variable outside the component's subset");
            }
            if (fr.numerator.nvars() != ring_.nvars())
                fail_pre("numerator arity does not match the ring");
        }
    }

    Fraction component(const Cochain& c, const Subset& J) const {
        auto it = c.comps.find(J);
        if (it != c.comps.end()) return it->second;
        return {Poly::zero(ring_.nvars()), std::vector<int>(d(), 0)};
    }

    std::vector<std::size_t> subset_vars(const Subset& J) const {
        std::vector<std::size_t> v;
        for (auto j : J) v.push_back(seq_[j]);
        return v;
    }

    // alternating sum of the components with one index dropped, pushed
    // into the larger localization over a common denominator
    Cochain differential(const Cochain& c) const {
        validate(c);
        if (c.level >= static_cast<int>(d()))
            fail_pre("differential above the top of the complex");
        Cochain out;
        out.level = c.level + 1;
        for (const auto& J : index_subsets(d(), c.level + 1)) {
            std::vector<std::pair<bool, Fraction>> parts; // (negated, fraction)
            std::vector<int> e(d(), 0);
            for (std::size_t k = 0; k < J.size(); ++k) {
                Subset sub = J;
                sub.erase(sub.begin() + k);
                auto it = c.comps.find(sub);
                if (it == c.comps.end() || it->second.numerator.is_zero()) continue;
                parts.emplace_back(k % 2 == 1, it->second);
                for (std::size_t m = 0; m < d(); ++m)
                    e[m] = std::max(e[m], it->second.denomExponents[m]);
            }
            if (parts.empty()) continue;
            Poly num = Poly::zero(ring_.nvars());
            for (const auto& [negated, fr] : parts) {
                Poly scaled = fr.numerator;
                for (std::size_t m = 0; m < d(); ++m) {
                    int diff = e[m] - fr.denomExponents[m];
                    if (diff > 0)
                        scaled *= Poly::variable(ring_.nvars(), seq_[m]).pow(diff);
                }
                num = negated ? num - scaled : num + scaled;
            }
            if (!num.is_zero()) out.comps[J] = {std::move(num), e};
        }
        return out;
    }

    // zero in every component's localization (inverting that component's
    // whole subset, not just its denominator support)
    bool loc_zero(const Cochain& c) const {
        validate(c);
        for (const auto& [J, fr] : c.comps)
            if (!ring_.loc_zero_at(fr.numerator, subset_vars(J))) return false;
        return true;
    }

    bool is_cocycle(const Cochain& c) const {
        if (c.level == static_cast<int>(d())) return true;
        return loc_zero(differential(c));
    }

    Cochain add(const Cochain& a, const Cochain& b) const {
        if (a.level != b.level) fail_pre("cochain level mismatch");
        Cochain out;
        out.level = a.level;
        for (const auto& J : index_subsets(d(), a.level)) {
            Fraction fa = component(a, J), fb = component(b, J);
            std::vector<int> e(d(), 0);
            for (std::size_t m = 0; m < d(); ++m)
                e[m] = std::max(fa.denomExponents[m], fb.denomExponents[m]);
            auto lift = [&](const Fraction& fr) {
                Poly s = fr.numerator;
                for (std::size_t m = 0; m < d(); ++m) {
                    int diff = e[m] - fr.denomExponents[m];
                    if (diff > 0) s *= Poly::variable(ring_.nvars(), seq_[m]).pow(diff);
                }
                return s;
            };
            Poly num = lift(fa) + lift(fb);
            if (!num.is_zero()) out.comps[J] = {std::move(num), e};
        }
        return out;
    }

    Cochain negate_cochain(const Cochain& a) const {
        Cochain out;
        out.level = a.level;
        for (const auto& [J, fr] : a.comps)
            out.comps[J] = {-fr.numerator, fr.denomExponents};
        return out;
    }

    Cochain sub(const Cochain& a, const Cochain& b) const {
        return add(a, negate_cochain(b));
    }

    Cochain scale(const Cochain& a, const Poly& r) const {
        Cochain out;
        out.level = a.level;
        for (const auto& [J, fr] : a.comps) {
            Poly num = fr.numerator * r;
            if (!num.is_zero()) out.comps[J] = {std::move(num), fr.denomExponents};
        }
        return out;
    }

    bool is_constant(const Cochain& c) const {
        for (const auto& [J, fr] : c.comps)
            for (int e : fr.denomExponents)
                if (e != 0) return false;
        return true;
    }

    // Contracting homotopy of the complex with respect to the unit
    // ideal: eta_K = c_{{0} u K} when 0 is not in K, else 0. For a
    // denominator-free cocycle of the constant subcomplex this gives
    // differential(eta) = c on the nose, which is re-verified.
    Cochain unit_homotopy(const Cochain& c) const {
        validate(c);
        if (c.level < 1 || c.level > static_cast<int>(d()))
            fail_pre("homotopy defined for levels 1..d");
        if (!is_constant(c))
            fail_pre("homotopy needs denominator-free components");
        if (c.level < static_cast<int>(d())) {
            Cochain dc = differential(c);
            for (const auto& [J, fr] : dc.comps)
                if (!ring_.zero_test(fr.numerator))
                    fail_pre("not a cocycle of the constant subcomplex");
        }
        Cochain eta;
        eta.level = c.level - 1;
        for (const auto& K : index_subsets(d(), c.level - 1)) {
            if (!K.empty() && K[0] == 0) continue;
            Subset zk;
            zk.push_back(0);
            zk.insert(zk.end(), K.begin(), K.end());
            auto it = c.comps.find(zk);
            if (it == c.comps.end() || it->second.numerator.is_zero()) continue;
            eta.comps[K] = {it->second.numerator, std::vector<int>(d(), 0)};
        }
        Cochain back = differential(eta);
        for (const auto& J : index_subsets(d(), c.level)) {
            Poly diff = component(back, J).numerator - component(c, J).numerator;
            if (!ring_.zero_test(diff))
                fail_internal("contracting homotopy failed to bound its input");
        }
        return eta;
    }

private:
    RingTower ring_;
    std::vector<std::size_t> seq_;
};

} // namespace charp
