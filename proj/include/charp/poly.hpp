#pragma once

#include <optional>
#include <vector>

#include "charp/fp.hpp"
#include "charp/monomial.hpp"

namespace charp {

struct Term {
    FpScalar c;
    Monomial m;
};

// Terms sorted strictly descending under `ord`, zero coefficients dropped.
using TermVec = std::vector<Term>;

inline TermVec merge_add(const TermVec& a, const TermVec& b, const MonomialOrder& ord) {
    TermVec r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        int c = ord.cmp(a[i].m, b[j].m);
        if (c > 0) r.push_back(a[i++]);
        else if (c < 0) r.push_back(b[j++]);
        else {
            FpScalar s = a[i].c + b[j].c;
            if (!s.is_zero()) r.push_back({s, a[i].m});
            ++i; ++j;
        }
    }
    while (i < a.size()) r.push_back(a[i++]);
    while (j < b.size()) r.push_back(b[j++]);
    return r;
}

// Multiplying every monomial by a fixed one preserves descending order
// in any monomial order, so no re-sort is needed.
inline TermVec term_mul(const TermVec& a, const Term& t) {
    TermVec r;
    if (t.c.is_zero()) return r;
    r.reserve(a.size());
    for (const auto& at : a) r.push_back({at.c * t.c, mono_mul(at.m, t.m)});
    return r;
}

inline TermVec scale(const TermVec& a, FpScalar s) {
    TermVec r;
    if (s.is_zero()) return r;
    r.reserve(a.size());
    for (const auto& at : a) r.push_back({at.c * s, at.m});
    return r;
}

inline TermVec negate(const TermVec& a) {
    TermVec r;
    r.reserve(a.size());
    for (const auto& at : a) r.push_back({-at.c, at.m});
    return r;
}

// Sort under `ord` and combine duplicate monomials.
inline TermVec normalize_terms(TermVec v, const MonomialOrder& ord) {
    std::sort(v.begin(), v.end(), [&](const Term& x, const Term& y) {
        return ord.cmp(x.m, y.m) > 0;
    });
    TermVec r;
    for (auto& t : v) {
        if (!r.empty() && r.back().m == t.m) r.back().c += t.c;
        else r.push_back(t);
    }
    std::erase_if(r, [](const Term& t) { return t.c.is_zero(); });
    return r;
}

// Multivariate polynomial over F_p in canonical form: terms sorted
// strictly descending under grevlex.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::size_t nvars) : nvars_(nvars) {}
    Poly(std::size_t nvars, TermVec t) : nvars_(nvars), t_(std::move(t)) {}

    static Poly zero(std::size_t nvars) { return Poly(nvars); }
    static Poly constant(std::size_t nvars, FpScalar c) {
        Poly p(nvars);
        if (!c.is_zero()) p.t_.push_back({c, Monomial(nvars, 0)});
        return p;
    }
    static Poly one(std::size_t nvars) { return constant(nvars, FpScalar::one()); }
    static Poly variable(std::size_t nvars, std::size_t i) {
        Poly p(nvars);
        Monomial m(nvars, 0);
        m[i] = 1;
        p.t_.push_back({FpScalar::one(), m});
        return p;
    }
    static Poly monomial(std::size_t nvars, FpScalar c, Monomial m) {
        Poly p(nvars);
        if (!c.is_zero()) p.t_.push_back({c, std::move(m)});
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    const TermVec& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    std::size_t term_count() const { return t_.size(); }

    const Term& leading() const {
        if (t_.empty()) fail_pre("leading term of zero polynomial");
        return t_[0];
    }

    // Leading term under an arbitrary order (scan; grevlex shortcuts to [0]).
    const Term& leading(const MonomialOrder& ord) const {
        if (t_.empty()) fail_pre("leading term of zero polynomial");
        if (ord.kind == MonomialOrder::Kind::Grevlex) return t_[0];
        std::size_t best = 0;
        for (std::size_t i = 1; i < t_.size(); ++i)
            if (ord.cmp(t_[i].m, t_[best].m) > 0) best = i;
        return t_[best];
    }

    long degree() const {
        long d = -1;
        for (const auto& t : t_) d = std::max(d, total_degree(t.m));
        return d;
    }

    // Total degree if every term has the same one.
    std::optional<long> homogeneous_degree() const {
        if (t_.empty()) return std::nullopt; // zero is homogeneous of any degree
        long d = total_degree(t_[0].m);
        for (const auto& t : t_)
            if (total_degree(t.m) != d) return std::nullopt;
        return d;
    }
    bool is_homogeneous() const { return t_.empty() || homogeneous_degree().has_value(); }

    FpScalar coeff_of(const Monomial& m) const {
        for (const auto& t : t_)
            if (t.m == m) return t.c;
        return FpScalar::zero();
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        a.check_arity(b);
        return Poly(a.nvars_, merge_add(a.t_, b.t_, MonomialOrder::grevlex()));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        a.check_arity(b);
        return Poly(a.nvars_, merge_add(a.t_, negate(b.t_), MonomialOrder::grevlex()));
    }
    Poly operator-() const { return Poly(nvars_, negate(t_)); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check_arity(b);
        const MonomialOrder g = MonomialOrder::grevlex();
        // accumulate term-by-term merges; fine at this scale
        TermVec acc;
        for (const auto& t : b.t_)
            acc = merge_add(acc, term_mul(a.t_, t), g);
        return Poly(a.nvars_, std::move(acc));
    }
    friend Poly operator*(const Poly& a, FpScalar s) { return Poly(a.nvars_, scale(a.t_, s)); }
    friend Poly operator*(FpScalar s, const Poly& a) { return a * s; }

    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.nvars_ != b.nvars_ || a.t_.size() != b.t_.size()) return false;
        for (std::size_t i = 0; i < a.t_.size(); ++i)
            if (a.t_[i].c != b.t_[i].c || a.t_[i].m != b.t_[i].m) return false;
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly pow(int k) const {
        if (k < 0) fail_pre("negative power");
        Poly acc = one(nvars_), base = *this;
        while (k) {
            if (k & 1) acc *= base;
            if (k >>= 1) base *= base;
        }
        return acc;
    }

    // f^{p^k} in characteristic p: coefficients are fixed by Frobenius,
    // exponents scale by p^k. Order is preserved (grevlex respects the
    // scaling of all exponents by a common factor).
    Poly pow_p(int k) const {
        if (k < 0) fail_pre("negative Frobenius power");
        long long q = 1, p = FpContext::modulus();
        for (int i = 0; i < k; ++i) {
            q *= p;
            if (q > (1LL << 30)) fail_budget("Frobenius exponent overflow");
        }
        Poly r(nvars_);
        r.t_.reserve(t_.size());
        for (const auto& t : t_)
            r.t_.push_back({t.c, mono_pow(t.m, static_cast<int>(q))});
        return r;
    }

    // Same polynomial over a wider variable list (new variables appended).
    Poly extend_vars(std::size_t newArity) const {
        if (newArity < nvars_) fail_internal("extend_vars shrinks arity");
        Poly r(newArity);
        r.t_.reserve(t_.size());
        for (const auto& t : t_) {
            Monomial m = t.m;
            m.resize(newArity, 0);
            r.t_.push_back({t.c, std::move(m)});
        }
        return r;
    }

    // Re-index variables: old position i becomes newPos[i].
    Poly remap_vars(const std::vector<std::size_t>& newPos, std::size_t newArity) const {
        if (newPos.size() != nvars_) fail_internal("remap table arity mismatch");
        TermVec v;
        v.reserve(t_.size());
        for (const auto& t : t_) {
            Monomial m(newArity, 0);
            for (std::size_t i = 0; i < nvars_; ++i) {
                if (t.m[i] != 0) m[newPos[i]] += t.m[i];
            }
            v.push_back({t.c, std::move(m)});
        }
        return Poly(newArity, normalize_terms(std::move(v), MonomialOrder::grevlex()));
    }

    // Evaluate at polynomial images (variable i -> images[i]).
    Poly subst(const std::vector<Poly>& images) const {
        if (images.size() != nvars_) fail_internal("subst arity mismatch");
        std::size_t outArity = images.empty() ? 0 : images[0].nvars();
        Poly acc = Poly::zero(outArity);
        for (const auto& t : t_) {
            Poly prod = Poly::constant(outArity, t.c);
            for (std::size_t i = 0; i < nvars_; ++i)
                for (int e = 0; e < t.m[i]; ++e) prod *= images[i];
            acc += prod;
        }
        return acc;
    }

    Poly monic() const {
        if (t_.empty()) return *this;
        return *this * t_[0].c.inv();
    }

private:
    void check_arity(const Poly& o) const {
        if (nvars_ != o.nvars_) fail_internal("polynomial arity mismatch");
    }

    std::size_t nvars_ = 0;
    TermVec t_;
};

} // namespace charp
