#pragma once

#include <algorithm>
#include <optional>

#include "charp/cech.hpp"
#include "charp/graded.hpp"
#include "charp/linalg.hpp"

namespace charp {

// Graded piece of local cohomology, as a cocycle basis at the Koszul
// exponent where the colimit was accepted as stable.
struct CohomologyPiece {
    int i = 0;
    long t = 0;
    std::size_t dimension = 0;
    std::vector<Cochain> basis;
    int koszulLevel = 0;
};

namespace detail {

// coordinates of (+)_J (numerator space at one cohomological level),
// each summand a graded piece of the ring modulo an optional per-subset
// torsion saturation
struct VSpace {
    std::vector<Subset> subsets;
    std::vector<GradedPiece> pieces;
    std::vector<const IdealPresentation*> pres;
    std::vector<std::size_t> offset;
    std::size_t dim = 0;
};

inline VSpace make_vspace(const CechComplex& C, std::size_t k, long deg, bool modTorsion) {
    VSpace v;
    v.subsets = index_subsets(C.d(), k);
    for (const auto& J : v.subsets) {
        const IdealPresentation& P =
            modTorsion ? C.ring().localized_ideal(C.subset_vars(J)) : C.ring().combined();
        v.offset.push_back(v.dim);
        v.pieces.push_back(GradedPiece::standard(P, deg, C.ring().budgets()));
        v.pres.push_back(&P);
        v.dim += v.pieces.back().dim();
    }
    return v;
}

// multiplication-by-x_j^e alternating map between adjacent levels
inline FpMat differential_matrix(const CechComplex& C, const VSpace& from,
                                 const VSpace& to, int e) {
    FpMat M(to.dim, from.dim);
    const std::size_t n = C.ring().nvars();
    for (std::size_t s = 0; s < from.subsets.size(); ++s) {
        const Subset& K = from.subsets[s];
        for (std::size_t m = 0; m < from.pieces[s].dim(); ++m) {
            std::size_t col = from.offset[s] + m;
            Poly mono = Poly::monomial(n, FpScalar::one(), from.pieces[s].monomials()[m]);
            for (std::size_t tgt = 0; tgt < to.subsets.size(); ++tgt) {
                const Subset& J = to.subsets[tgt];
                // J must be K plus one extra index
                std::size_t extra = 0, pos = 0;
                {
                    bool found = false, super = true;
                    std::size_t a = 0;
                    for (std::size_t b = 0; b < J.size(); ++b) {
                        if (a < K.size() && K[a] == J[b]) ++a;
                        else if (!found) { extra = J[b]; pos = b; found = true; }
                        else { super = false; break; }
                    }
                    if (!super || a != K.size() || !found) continue;
                }
                Poly img = mono * Poly::variable(n, C.sequence()[extra]).pow(e);
                Poly nf = normal_form(img, *to.pres[tgt], C.ring().budgets());
                auto coords = to.pieces[tgt].coords(nf);
                for (std::size_t r = 0; r < coords.size(); ++r) {
                    if (coords[r].is_zero()) continue;
                    FpScalar val = pos % 2 ? -coords[r] : coords[r];
                    M.at(to.offset[tgt] + r, col) += val;
                }
            }
        }
    }
    return M;
}

// lift every component to the uniform denominator exponent e and read
// coordinates off the target space
inline std::vector<FpScalar> cochain_coords(const CechComplex& C, const VSpace& v,
                                            const Cochain& c, int e) {
    std::vector<FpScalar> out(v.dim, FpScalar::zero());
    const std::size_t n = C.ring().nvars();
    for (std::size_t s = 0; s < v.subsets.size(); ++s) {
        const Subset& J = v.subsets[s];
        auto it = c.comps.find(J);
        if (it == c.comps.end() || it->second.numerator.is_zero()) continue;
        Poly num = it->second.numerator;
        for (std::size_t m = 0; m < C.d(); ++m) {
            int diff = (std::find(J.begin(), J.end(), m) != J.end() ? e : 0) -
                       it->second.denomExponents[m];
            if (diff < 0) fail_internal("component exponent above the uniform level");
            if (diff > 0) num *= Poly::variable(n, C.sequence()[m]).pow(diff);
        }
        Poly nf = normal_form(num, *v.pres[s], C.ring().budgets());
        auto coords = v.pieces[s].coords(nf);
        for (std::size_t r = 0; r < coords.size(); ++r) out[v.offset[s] + r] = coords[r];
    }
    return out;
}

inline Cochain cochain_from_coords(const CechComplex& C, const VSpace& v,
                                   const std::vector<FpScalar>& x, int level, int e) {
    Cochain c;
    c.level = level;
    for (std::size_t s = 0; s < v.subsets.size(); ++s) {
        std::vector<FpScalar> part(x.begin() + v.offset[s],
                                   x.begin() + v.offset[s] + v.pieces[s].dim());
        Poly num = v.pieces[s].from_coords(part);
        if (num.is_zero()) continue;
        std::vector<int> denom(C.d(), 0);
        for (auto j : v.subsets[s]) denom[j] = e;
        c.comps[v.subsets[s]] = {std::move(num), std::move(denom)};
    }
    return c;
}

inline int max_denom_exponent(const Cochain& c) {
    int e = 0;
    for (const auto& [J, fr] : c.comps)
        for (int x : fr.denomExponents) e = std::max(e, x);
    return e;
}

} // namespace detail

// multiply every component by the subset's product of sequence
// variables, delta times: the colimit transition map
inline Cochain shift_exponent(const CechComplex& C, const Cochain& c, int delta) {
    Cochain out;
    out.level = c.level;
    const std::size_t n = C.ring().nvars();
    for (const auto& [J, fr] : c.comps) {
        Poly num = fr.numerator;
        std::vector<int> e = fr.denomExponents;
        for (auto j : J) {
            num *= Poly::variable(n, C.sequence()[j]).pow(delta);
            e[j] += delta;
        }
        out.comps[J] = {std::move(num), std::move(e)};
    }
    return out;
}

// H^i at one Koszul exponent: kernel representatives independent
// modulo boundaries
namespace detail {
struct LevelCohomology {
    VSpace Vi;
    std::vector<std::vector<FpScalar>> boundaryCols; // image of d_{i-1}
    std::vector<std::vector<FpScalar>> basisVecs;    // selected kernel vectors
};

inline LevelCohomology level_cohomology(const CechComplex& C, int i, long t, int e) {
    LevelCohomology out;
    out.Vi = make_vspace(C, i, t + static_cast<long>(e) * i, false);
    std::vector<std::vector<FpScalar>> kernel;
    if (i < static_cast<int>(C.d())) {
        VSpace Vnext = make_vspace(C, i + 1, t + static_cast<long>(e) * (i + 1), false);
        FpMat M = differential_matrix(C, out.Vi, Vnext, e);
        kernel = kernel_basis(M);
    } else {
        for (std::size_t k = 0; k < out.Vi.dim; ++k) {
            std::vector<FpScalar> v(out.Vi.dim, FpScalar::zero());
            v[k] = FpScalar::one();
            kernel.push_back(std::move(v));
        }
    }
    if (i > 0) {
        VSpace Vprev = make_vspace(C, i - 1, t + static_cast<long>(e) * (i - 1), false);
        FpMat M = differential_matrix(C, Vprev, out.Vi, e);
        for (std::size_t c2 = 0; c2 < M.cols(); ++c2) {
            std::vector<FpScalar> col(M.rows());
            for (std::size_t r = 0; r < M.rows(); ++r) col[r] = M.at(r, c2);
            out.boundaryCols.push_back(std::move(col));
        }
    }
    // pick kernel vectors independent modulo the boundary columns
    std::size_t nb = out.boundaryCols.size();
    FpMat sel(out.Vi.dim, nb + kernel.size());
    for (std::size_t c2 = 0; c2 < nb; ++c2)
        for (std::size_t r = 0; r < out.Vi.dim; ++r) sel.at(r, c2) = out.boundaryCols[c2][r];
    for (std::size_t k = 0; k < kernel.size(); ++k)
        for (std::size_t r = 0; r < out.Vi.dim; ++r) sel.at(r, nb + k) = kernel[k][r];
    auto pivots = sel.rref();
    for (auto p : pivots)
        if (p >= nb) out.basisVecs.push_back(kernel[p - nb]);
    return out;
}

// do the given cochains stay independent modulo boundaries at level e?
inline bool independent_mod_boundaries(const CechComplex& C, int i, long t, int e,
                                       const std::vector<Cochain>& reps) {
    LevelCohomology L = level_cohomology(C, i, t, e);
    std::size_t nb = L.boundaryCols.size();
    FpMat M(L.Vi.dim, nb + reps.size());
    for (std::size_t c2 = 0; c2 < nb; ++c2)
        for (std::size_t r = 0; r < L.Vi.dim; ++r) M.at(r, c2) = L.boundaryCols[c2][r];
    for (std::size_t k = 0; k < reps.size(); ++k) {
        auto v = cochain_coords(C, L.Vi, reps[k], e);
        for (std::size_t r = 0; r < L.Vi.dim; ++r) M.at(r, nb + k) = v[r];
    }
    std::size_t rankAll = M.rank();
    FpMat B(L.Vi.dim, nb);
    for (std::size_t c2 = 0; c2 < nb; ++c2)
        for (std::size_t r = 0; r < L.Vi.dim; ++r) B.at(r, c2) = L.boundaryCols[c2][r];
    return rankAll == B.rank() + reps.size();
}
} // namespace detail

// H^i_I(R)_t by the Koszul colimit: accept the answer once three
// consecutive exponents agree in dimension and the transition maps stay
// injective on the computed representatives.
inline CohomologyPiece lc_graded_piece(const CechComplex& C, int i, long t) {
    if (!C.ring().is_trivial())
        fail_pre("graded cohomology requires the bare base ring");
    require_standard_graded(C.ring().combined());
    const Budgets& bud = C.ring().budgets();
    if (i < 0 || i > static_cast<int>(C.d())) {
        return {i, t, 0, {}, 0};
    }
    // For negative degrees the first few exponents see empty numerator
    // spaces; an all-zero window there is vacuous, not stable. Windows of
    // zeros only count once every participating level has nonneg degree.
    int eFloor = 1;
    if (t < 0) {
        int kLo = std::max(1, i - 1);
        int kHi = std::min(i + 1, static_cast<int>(C.d()));
        for (int k = kLo; k <= kHi; ++k)
            eFloor = std::max(eFloor, static_cast<int>((-t + k - 1) / k));
    }
    std::vector<std::size_t> dims;
    std::vector<std::vector<Cochain>> bases;
    for (int e = 1; e <= bud.koszul_cap; ++e) {
        bud.check_deadline();
        detail::LevelCohomology L = detail::level_cohomology(C, i, t, e);
        std::vector<Cochain> reps;
        for (const auto& v : L.basisVecs)
            reps.push_back(detail::cochain_from_coords(C, L.Vi, v, i, e));
        dims.push_back(L.basisVecs.size());
        bases.push_back(std::move(reps));
        std::size_t k = dims.size();
        if (k >= 3 && dims[k - 1] == dims[k - 2] && dims[k - 2] == dims[k - 3] &&
            (dims[k - 3] > 0 || e - 2 >= eFloor)) {
            int e0 = e - 2;
            const auto& base0 = bases[k - 3];
            bool iso01 = detail::independent_mod_boundaries(
                C, i, t, e0 + 1, [&] {
                    std::vector<Cochain> shifted;
                    for (const auto& c : base0) shifted.push_back(shift_exponent(C, c, 1));
                    return shifted;
                }());
            bool iso02 = detail::independent_mod_boundaries(
                C, i, t, e0 + 2, [&] {
                    std::vector<Cochain> shifted;
                    for (const auto& c : base0) shifted.push_back(shift_exponent(C, c, 2));
                    return shifted;
                }());
            if (iso01 && iso02) {
                CohomologyPiece out;
                out.i = i;
                out.t = t;
                out.dimension = dims[k - 3];
                out.basis = bases[k - 3];
                out.koszulLevel = e0;
                return out;
            }
        }
    }
    std::string lastTwo = dims.size() >= 2
        ? std::to_string(dims[dims.size() - 2]) + ", " + std::to_string(dims.back())
        : "n/a";
    fail_budget("cohomology colimit did not stabilize below the exponent cap"
                " (last dimensions: " + lastTwo + ")");
}

// Combined linear question at one uniform denominator exponent:
//   target = sum_k c_k * gens_k + d(beta)
// in every component's localization, with c_k homogeneous ring elements
// of the complementary degree and beta one level down. Iterative
// deepening on the exponent. Plain boundary solving is the special case
// with no gens.
struct MembershipResult {
    std::vector<Poly> coeffs; // one per gen, over the tower's variables
    Cochain beta;
    int exponent = 0;
};

inline std::optional<MembershipResult> membership_solve(
    const CechComplex& C, const Cochain& target, long tTarget,
    const std::vector<std::pair<const Cochain*, long>>& gens, int expCap) {
    C.validate(target);
    const int i = target.level;
    if (i < 1 || i > static_cast<int>(C.d()))
        fail_pre("membership target level out of range");
    const Budgets& bud = C.ring().budgets();
    const std::size_t n = C.ring().nvars();

    int eMin = detail::max_denom_exponent(target);
    for (const auto& [g, tg] : gens) {
        C.validate(*g);
        if (g->level != i) fail_pre("membership generator level mismatch");
        eMin = std::max(eMin, detail::max_denom_exponent(*g));
    }

    // coefficient spaces: standard monomials of the complementary degree
    std::vector<GradedPiece> coeffSpace;
    for (const auto& [g, tg] : gens)
        coeffSpace.push_back(GradedPiece::standard(C.ring().combined(), tTarget - tg, bud));

    for (int e = eMin; e <= expCap; ++e) {
        bud.check_deadline();
        detail::VSpace Vto = detail::make_vspace(C, i, tTarget + static_cast<long>(e) * i, true);
        detail::VSpace Vfrom = detail::make_vspace(C, i - 1, tTarget + static_cast<long>(e) * (i - 1), false);
        FpMat D = detail::differential_matrix(C, Vfrom, Vto, e);

        // beta columns first: a pure boundary solution is preferred, so
        // coefficient unknowns stay zero whenever they can
        std::size_t coeffCols = 0;
        for (const auto& cs : coeffSpace) coeffCols += cs.dim();
        FpMat M(Vto.dim, Vfrom.dim + coeffCols);
        for (std::size_t c2 = 0; c2 < Vfrom.dim; ++c2)
            for (std::size_t r = 0; r < Vto.dim; ++r) M.at(r, c2) = D.at(r, c2);
        std::size_t col = Vfrom.dim;
        for (std::size_t k = 0; k < gens.size(); ++k) {
            for (std::size_t m = 0; m < coeffSpace[k].dim(); ++m, ++col) {
                Poly mono = Poly::monomial(n, FpScalar::one(), coeffSpace[k].monomials()[m]);
                Cochain scaled = C.scale(*gens[k].first, mono);
                auto v = detail::cochain_coords(C, Vto, scaled, e);
                for (std::size_t r = 0; r < Vto.dim; ++r) M.at(r, col) = v[r];
            }
        }

        auto rhs = detail::cochain_coords(C, Vto, target, e);
        auto x = solve(M, rhs);
        if (!x) continue;

        MembershipResult out;
        out.exponent = e;
        std::vector<FpScalar> betaPart(x->begin(), x->begin() + Vfrom.dim);
        out.beta = detail::cochain_from_coords(C, Vfrom, betaPart, i - 1, e);
        std::size_t pos = Vfrom.dim;
        for (std::size_t k = 0; k < gens.size(); ++k) {
            std::vector<FpScalar> part(x->begin() + pos, x->begin() + pos + coeffSpace[k].dim());
            out.coeffs.push_back(coeffSpace[k].from_coords(part));
            pos += coeffSpace[k].dim();
        }
        return out;
    }
    return std::nullopt;
}

// beta with differential(beta) = target in every localization, with all
// denominator exponents at most expCap; NONE means not found below the
// cap, never a nonexistence claim.
inline std::optional<Cochain> boundary_solve(const CechComplex& C, const Cochain& target,
                                             int expCap, long t) {
    auto r = membership_solve(C, target, t, {}, expCap);
    if (!r) return std::nullopt;
    return r->beta;
}

} // namespace charp
