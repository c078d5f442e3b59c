#pragma once

#include <cstdlib>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "charp/certificate.hpp"
#include "charp/frobenius.hpp"
#include "charp/koszul.hpp"
#include "charp/ringfile.hpp"

namespace charp {

struct VerifyOutcome {
    bool ok = true;
    std::string detail; // first identity that broke, when !ok
};

struct KillResult {
    KillCertificate cert;
    RingTower tower;
};

namespace detail {

inline CochainRecord record_cochain(const Cochain& c, const std::vector<std::string>& vars) {
    CochainRecord out;
    out.level = c.level;
    for (const auto& [J, fr] : c.comps) {
        if (fr.numerator.is_zero()) continue;
        out.comps.push_back({J, poly_to_string(fr.numerator, vars), fr.denomExponents});
    }
    return out;
}

// Strict inverse of record_cochain: canonical numerator strings only,
// subsets increasing and distinct, exponent vectors of the right length.
inline Cochain cochain_from_record(const CochainRecord& r, const std::vector<std::string>& vars,
                                   std::size_t d, const std::string& where) {
    Cochain out;
    out.level = r.level;
    for (const auto& comp : r.comps) {
        for (std::size_t k = 0; k < comp.subset.size(); ++k) {
            if (comp.subset[k] >= d || (k + 1 < comp.subset.size() && comp.subset[k] >= comp.subset[k + 1]))
                fail_verify("malformed certificate: bad subset in " + where);
        }
        if (comp.exponents.size() != d)
            fail_verify("malformed certificate: exponent vector length in " + where);
        Poly num = parse_poly(comp.numerator, vars);
        if (num.is_zero())
            fail_verify("malformed certificate: zero component stored in " + where);
        if (poly_to_string(num, vars) != comp.numerator)
            fail_verify("malformed certificate: non-canonical numerator in " + where);
        if (out.comps.count(comp.subset))
            fail_verify("malformed certificate: repeated subset in " + where);
        out.comps[comp.subset] = {std::move(num), comp.exponents};
    }
    return out;
}

inline bool cochain_equal(const Cochain& a, const Cochain& b) {
    if (a.level != b.level || a.comps.size() != b.comps.size()) return false;
    for (const auto& [J, fr] : a.comps) {
        auto it = b.comps.find(J);
        if (it == b.comps.end()) return false;
        if (!(it->second.numerator == fr.numerator)) return false;
        if (it->second.denomExponents != fr.denomExponents) return false;
    }
    return true;
}

inline Cochain extend_cochain(const Cochain& c, std::size_t arity) {
    Cochain out;
    out.level = c.level;
    for (const auto& [J, fr] : c.comps)
        out.comps[J] = {fr.numerator.extend_vars(arity), fr.denomExponents};
    return out;
}

inline long small_pow(long b, int e) {
    long r = 1;
    for (int k = 0; k < e; ++k) {
        if (r > (1L << 24) / b) fail_budget("adjunction degree overflow");
        r *= b;
    }
    return r;
}

inline Poly denom_poly(const CechComplex& C, const std::vector<int>& exps, std::size_t arity) {
    Poly w = Poly::one(arity);
    for (std::size_t m = 0; m < exps.size(); ++m)
        if (exps[m] > 0) w *= Poly::variable(arity, C.sequence()[m]).pow(exps[m]);
    return w;
}

// Cleared defining relation for a root of g(Z/w) = r/w: the last
// variable is the root, everything over arity nv+1. With s = 0 this
// degenerates to the collapse Z - r.
inline Poly adjunction_poly(int s, const std::vector<Poly>& lowerExt, const Poly& wExt,
                            const Poly& rExt, std::size_t nv) {
    long p = FpContext::modulus();
    long ps = small_pow(p, s);
    Poly Z = Poly::variable(nv + 1, nv);
    Poly h = Z.pow(static_cast<int>(ps));
    for (int j = 0; j < s; ++j) {
        long pj = small_pow(p, j);
        h = h - lowerExt[j] * wExt.pow(static_cast<int>(ps - pj)) * Z.pow(static_cast<int>(pj));
    }
    return h - rExt * wExt.pow(static_cast<int>(ps - 1));
}

inline void require_fresh_name(const RingTower& T, const std::string& name) {
    if (!charp::detail::valid_identifier(name))
        fail_verify("malformed certificate: bad variable name `" + name + "`");
    for (const auto& v : T.all_vars())
        if (v == name) fail_verify("malformed certificate: variable name `" + name + "` reused");
}

} // namespace detail

// Re-run every check a kill certificate encodes, from its serialized
// form alone: rebuild the tower stage by stage, compare each stored
// relation against the one its defining data forces, and re-verify all
// the identities. Returns the first failure instead of throwing.
inline VerifyOutcome verify_certificate(const json& j, const RingPresentation& pres,
                                        const Budgets& bud = {}) {
    try {
        KillCertificate c = kill_certificate_from_json(j);
        long p = FpContext::modulus();
        if (c.p != p) fail_verify("certificate modulus does not match the session");
        if (c.ringHash != ring_hash(p, pres))
            fail_verify("certificate was issued for a different ring");
        if (c.orderTag != kOrderTag) fail_verify("unsupported monomial order tag");
        if (c.signTag != kSignTag) fail_verify("unsupported sign convention tag");
        if (c.s < 0 || c.s > 30) fail_verify("relation exponent out of range");
        if (static_cast<int>(c.lower.size()) != c.s)
            fail_verify("relation coefficient count does not match its exponent");

        RingTower R(pres, bud);
        CechComplex C(R);
        const std::size_t d = C.d();
        const int i = c.cls.level;
        if (i < 1 || i > static_cast<int>(d)) fail_verify("class level out of range");

        Cochain alpha = detail::cochain_from_record(c.cls, pres.vars, d, "class");
        C.validate(alpha);
        for (const auto& [J, fr] : alpha.comps)
            if (fraction_degree(fr) != c.degree) fail_verify("class component degree mismatch");
        if (!C.is_cocycle(alpha)) fail_verify("stored class is not a cocycle");

        FrobeniusPoly g;
        g.s = c.s;
        for (const auto& l : c.lower) {
            Poly cf = parse_poly(l, pres.vars);
            if (poly_to_string(cf, pres.vars) != l)
                fail_verify("malformed certificate: non-canonical relation coefficient");
            g.lowerCoeffs.push_back(std::move(cf));
        }

        Cochain beta = detail::cochain_from_record(c.beta, pres.vars, d, "beta");
        if (beta.level != i - 1) fail_verify("beta level mismatch");
        C.validate(beta);
        Cochain gAlpha = apply_frobenius_poly(C, g, alpha);
        if (!C.loc_zero(C.sub(gAlpha, C.differential(beta))))
            fail_verify("Frobenius relation identity fails on the base");

        // collapse stage: one monic adjunction per beta component
        RingTower T = R;
        if (c.zStage.size() != beta.comps.size())
            fail_verify("z-stage entry count does not match beta");
        Cochain alphaTT;
        alphaTT.level = i - 1;
        std::vector<std::tuple<Subset, std::size_t, std::vector<int>>> zInfo;
        std::size_t zk = 0;
        for (const auto& [K, frK] : beta.comps) {
            const ZRecord& z = c.zStage[zk++];
            if (z.subset != K) fail_verify("z-stage subsets do not follow beta components");
            detail::require_fresh_name(T, z.var);
            std::size_t nv = T.nvars();
            Poly w = detail::denom_poly(C, frK.denomExponents, nv + 1);
            std::vector<Poly> lowerExt;
            for (const auto& cf : g.lowerCoeffs) lowerExt.push_back(cf.extend_vars(nv + 1));
            Poly h = detail::adjunction_poly(c.s, lowerExt, w, frK.numerator.extend_vars(nv + 1), nv);
            std::vector<std::string> newVars = T.all_vars();
            newVars.push_back(z.var);
            if (poly_to_string(h, newVars) != z.relation)
                fail_verify("z-stage relation does not match its defining data");
            T = T.adjoin_root(z.var, h);
            zInfo.emplace_back(K, nv, frK.denomExponents);
        }
        for (const auto& [K, pos, exps] : zInfo)
            alphaTT.comps[K] = {Poly::variable(T.nvars(), pos), exps};

        CechComplex CT(T);
        Cochain alphaBar = CT.sub(detail::extend_cochain(alpha, T.nvars()), CT.differential(alphaTT));
        Cochain corrected = detail::cochain_from_record(c.corrected, T.all_vars(), d, "corrected");
        if (!detail::cochain_equal(corrected, alphaBar))
            fail_verify("corrected cocycle does not match its defining data");

        if (c.s == 0) {
            if (!c.rhoStage.empty() || !c.constancy.empty() || !c.eta.comps.empty())
                fail_verify("collapse certificate carries unexpected stages");
            if (c.eta.level != i - 1) fail_verify("eta level mismatch");
            if (!CT.loc_zero(alphaBar))
                fail_verify("final identity fails: corrected cocycle is not locally zero");
            return {};
        }

        // root stage: a monic relation and a fraction identity per
        // nonzero corrected component
        if (c.rhoStage.size() != alphaBar.comps.size())
            fail_verify("rho-stage entry count does not match the corrected cocycle");
        std::vector<std::pair<Subset, std::size_t>> rhoInfo;
        std::size_t rk = 0;
        for (const auto& [J, frJ] : alphaBar.comps) {
            const RhoRecord& r = c.rhoStage[rk++];
            if (r.subset != J) fail_verify("rho-stage subsets do not follow the corrected cocycle");
            detail::require_fresh_name(T, r.var);
            std::size_t nv = T.nvars();
            Poly v = detail::denom_poly(C, frJ.denomExponents, nv + 1);
            std::vector<Poly> lowerExt;
            for (const auto& cf : g.lowerCoeffs) lowerExt.push_back(cf.extend_vars(nv + 1));
            Poly G = detail::adjunction_poly(c.s, lowerExt, v, Poly::zero(nv + 1), nv);
            std::vector<std::string> newVars = T.all_vars();
            newVars.push_back(r.var);
            if (poly_to_string(G, newVars) != r.relation)
                fail_verify("rho-stage relation does not match its defining data");
            T = T.adjoin_root(r.var, G);
            Poly ident = v * Poly::variable(T.nvars(), nv) - frJ.numerator.extend_vars(T.nvars());
            if (poly_to_string(ident, T.all_vars()) != r.identity)
                fail_verify("fraction identity does not match its defining data");
            T = T.impose_relation(ident);
            rhoInfo.emplace_back(J, nv);
        }

        Cochain alphaConst;
        alphaConst.level = i;
        for (const auto& [J, pos] : rhoInfo)
            alphaConst.comps[J] = {Poly::variable(T.nvars(), pos), std::vector<int>(d, 0)};

        CechComplex CT2(T);
        Cochain dConst;
        dConst.level = i + 1;
        if (i < static_cast<int>(d)) dConst = CT2.differential(alphaConst);
        std::size_t ck = 0;
        for (const auto& [L, frL] : dConst.comps) {
            if (T.zero_test(frL.numerator)) continue;
            if (ck >= c.constancy.size()) fail_verify("constancy entries missing");
            const ConstancyRecord& k = c.constancy[ck++];
            if (k.subset != L) fail_verify("constancy subsets out of order");
            if (poly_to_string(frL.numerator, T.all_vars()) != k.relation)
                fail_verify("constancy relation does not match its defining data");
            if (!T.loc_zero_at(frL.numerator, CT2.subset_vars(L)))
                fail_verify("constancy relation is not locally zero before imposition");
            T = T.impose_relation(frL.numerator);
        }
        if (ck != c.constancy.size()) fail_verify("extra constancy entries");

        CechComplex CF(T);
        Cochain eta = detail::cochain_from_record(c.eta, T.all_vars(), d, "eta");
        if (eta.level != i - 1) fail_verify("eta level mismatch");
        CF.validate(eta);
        if (!CF.is_constant(eta)) fail_verify("eta has denominators");
        Cochain etaDiff = CF.sub(CF.differential(eta), alphaConst);
        for (const auto& [J, fr] : etaDiff.comps)
            if (!T.zero_test(fr.numerator))
                fail_verify("eta does not bound the corrected cocycle at ring level");

        Cochain full = CF.sub(
            CF.sub(detail::extend_cochain(alpha, T.nvars()), CF.differential(eta)),
            CF.differential(detail::extend_cochain(alphaTT, T.nvars())));
        if (!CF.loc_zero(full))
            fail_verify("final identity fails: class is not a boundary over the extension");
        return {};
    } catch (const error& e) {
        return {false, e.what()};
    }
}

// Constructively kill one cohomology class: find a Frobenius relation,
// adjoin a root of it for each boundary-witness component, correct the
// class to one with componentwise-root shape, force the roots into the
// ring as new constants, and contract. The returned tower makes the
// class a Cech boundary; the certificate records enough to recheck
// every step from scratch.
inline KillResult kill_class(const CechComplex& C, const ClassHandle& alpha) {
    const RingTower& R = C.ring();
    if (!R.is_trivial()) fail_pre("killing starts from the bare base ring");
    const Budgets& bud = R.budgets();
    const long p = FpContext::modulus();
    const int i = alpha.cocycle.level;
    const int dim = krull_dim(R.combined(), bud);
    if (i < 1) fail_pre("killing is defined for cohomological levels 1 and above");
    if (i >= dim)
        fail_pre("no module-finite extension kills level " + std::to_string(i) +
                 ": it is not below the ring dimension " + std::to_string(dim));
    detail::validate_class(C, alpha);

    KillCertificate cert;
    cert.p = p;
    cert.ringHash = ring_hash(p, R.base());
    cert.orderTag = kOrderTag;
    cert.signTag = kSignTag;
    cert.degree = alpha.internalDegree;
    cert.cls = detail::record_cochain(alpha.cocycle, R.base().vars);
    cert.cls.level = i;

    auto finish = [&](const RingTower& T) {
        VerifyOutcome rep = verify_certificate(to_json(cert), R.base(), bud);
        if (!rep.ok)
            fail_internal("freshly built certificate failed verification: " + rep.detail);
        return KillResult{cert, T};
    };

    if (alpha.cocycle.empty()) {
        cert.s = 0;
        cert.beta.level = i - 1;
        cert.corrected.level = i;
        cert.eta.level = i - 1;
        return finish(R);
    }

    FrobeniusRelation rel = find_relation(C, alpha);
    const int s = rel.g.s;
    cert.s = s;
    for (const auto& cf : rel.g.lowerCoeffs)
        cert.lower.push_back(poly_to_string(cf, R.base().vars));
    cert.beta = detail::record_cochain(rel.beta, R.base().vars);
    cert.beta.level = i - 1;

    RingTower T = R;
    Cochain alphaTT;
    alphaTT.level = i - 1;
    std::vector<std::tuple<Subset, std::size_t, std::vector<int>>> zInfo;
    for (const auto& [K, frK] : rel.beta.comps) {
        std::string name = T.fresh_var("Z");
        std::size_t nv = T.nvars();
        Poly w = detail::denom_poly(C, frK.denomExponents, nv + 1);
        std::vector<Poly> lowerExt;
        for (const auto& cf : rel.g.lowerCoeffs) lowerExt.push_back(cf.extend_vars(nv + 1));
        Poly h = detail::adjunction_poly(s, lowerExt, w, frK.numerator.extend_vars(nv + 1), nv);
        T = T.adjoin_root(name, h);
        cert.zStage.push_back({name, K, poly_to_string(h, T.all_vars())});
        zInfo.emplace_back(K, nv, frK.denomExponents);
    }
    for (const auto& [K, pos, exps] : zInfo)
        alphaTT.comps[K] = {Poly::variable(T.nvars(), pos), exps};

    CechComplex CT(T);
    Cochain alphaBar = CT.sub(detail::extend_cochain(alpha.cocycle, T.nvars()),
                              CT.differential(alphaTT));
    cert.corrected = detail::record_cochain(alphaBar, T.all_vars());
    cert.corrected.level = i;

    if (s == 0) {
        // the relation was linear, so the collapse stage already bounds
        // the class and no root stage is needed
        cert.eta.level = i - 1;
        if (!CT.loc_zero(alphaBar))
            fail_internal("corrected cocycle is not locally zero after the collapse stage");
        return finish(T);
    }

    std::vector<std::pair<Subset, std::size_t>> rhoInfo;
    for (const auto& [J, frJ] : alphaBar.comps) {
        std::string name = T.fresh_var("P");
        std::size_t nv = T.nvars();
        Poly v = detail::denom_poly(C, frJ.denomExponents, nv + 1);
        std::vector<Poly> lowerExt;
        for (const auto& cf : rel.g.lowerCoeffs) lowerExt.push_back(cf.extend_vars(nv + 1));
        Poly G = detail::adjunction_poly(s, lowerExt, v, Poly::zero(nv + 1), nv);
        T = T.adjoin_root(name, G);
        Poly ident = v * Poly::variable(T.nvars(), nv) - frJ.numerator.extend_vars(T.nvars());
        cert.rhoStage.push_back({name, J, poly_to_string(G, T.all_vars()),
                                 poly_to_string(ident, T.all_vars())});
        T = T.impose_relation(ident);
        rhoInfo.emplace_back(J, nv);
    }

    Cochain alphaConst;
    alphaConst.level = i;
    for (const auto& [J, pos] : rhoInfo)
        alphaConst.comps[J] = {Poly::variable(T.nvars(), pos), std::vector<int>(C.d(), 0)};

    CechComplex CT2(T);
    Cochain dConst;
    dConst.level = i + 1;
    if (i < static_cast<int>(C.d())) dConst = CT2.differential(alphaConst);
    for (const auto& [L, frL] : dConst.comps) {
        if (T.zero_test(frL.numerator)) continue;
        if (!T.loc_zero_at(frL.numerator, CT2.subset_vars(L)))
            fail_internal("constancy defect is not locally zero");
        cert.constancy.push_back({L, poly_to_string(frL.numerator, T.all_vars())});
        T = T.impose_relation(frL.numerator);
    }

    CechComplex CF(T);
    Cochain eta = CF.unit_homotopy(alphaConst);
    cert.eta = detail::record_cochain(eta, T.all_vars());
    cert.eta.level = i - 1;

    Cochain full = CF.sub(
        CF.sub(detail::extend_cochain(alpha.cocycle, T.nvars()), CF.differential(eta)),
        CF.differential(detail::extend_cochain(alphaTT, T.nvars())));
    if (!CF.loc_zero(full)) fail_internal("killed class failed its final boundary identity");

    return finish(T);
}

struct KillAllResult {
    RingTower tower;
    std::vector<KillCertificate> certs;
    std::vector<long> killedDegrees; // one entry per certificate
};

// Kill every class of the graded local cohomology at one level: scan
// degrees outward from zero until a guard-sized run of zero pieces on
// each side (a stopping heuristic, not a proof of vanishing -- the
// certificates carry the actual content), kill each basis class over
// the bare base, and fold the resulting towers into one extension, in
// which every final identity is rechecked.
inline KillAllResult kill_all(const RingPresentation& pres, int i, const Budgets& bud = {}) {
    RingTower R(pres, bud);
    CechComplex C(R);
    if (i < 0 || i > static_cast<int>(C.d())) fail_pre("cohomological level out of range");
    if (!C.sequence_is_m_primary())
        fail_pre("designated sequence is not primary to the irrelevant ideal");
    const int dim = krull_dim(R.combined(), bud);
    if (i >= dim)
        fail_pre("no module-finite extension kills level " + std::to_string(i) +
                 ": it is not below the ring dimension " + std::to_string(dim));

    const int G = std::max(1, bud.guard);
    const long scanCap = 64;
    std::vector<std::pair<long, Cochain>> classes;
    auto scan = [&](long start, long step) {
        int zeros = 0;
        for (long t = start;; t += step) {
            if (std::labs(t) > scanCap)
                fail_budget("graded support scan left its range without a zero run");
            CohomologyPiece piece = lc_graded_piece(C, i, t);
            if (piece.dimension == 0) {
                if (++zeros >= G) return;
                continue;
            }
            zeros = 0;
            for (const auto& b : piece.basis) classes.emplace_back(t, b);
        }
    };
    scan(0, 1);
    scan(-1, -1);

    KillAllResult out{R, {}, {}};
    std::vector<RingTower> towers;
    for (const auto& [t, b] : classes) {
        KillResult kr = kill_class(C, ClassHandle{b, t, {}});
        out.certs.push_back(kr.cert);
        out.killedDegrees.push_back(t);
        towers.push_back(kr.tower);
    }

    RingTower T = R;
    std::vector<std::size_t> offsets;
    for (const auto& tk : towers) {
        offsets.push_back(T.levels().size());
        T = compositum(T, tk);
    }

    // each class must still die in the joined extension
    const std::size_t nb = pres.nvars();
    CechComplex CF(T);
    for (std::size_t k = 0; k < out.certs.size(); ++k) {
        const KillCertificate& cert = out.certs[k];
        const RingTower& tk = towers[k];
        std::vector<std::size_t> map(tk.nvars());
        for (std::size_t v = 0; v < nb; ++v) map[v] = v;
        for (std::size_t m = 0; m < tk.levels().size(); ++m)
            map[nb + m] = nb + offsets[k] + m;

        Cochain alpha = detail::cochain_from_record(cert.cls, pres.vars, C.d(), "class");
        Cochain alphaTT;
        alphaTT.level = alpha.level - 1;
        Cochain betaC = detail::cochain_from_record(cert.beta, pres.vars, C.d(), "beta");
        std::size_t zIdx = 0;
        for (const auto& [K, frK] : betaC.comps) {
            std::size_t pos = map[nb + zIdx++];
            alphaTT.comps[K] = {Poly::variable(T.nvars(), pos), frK.denomExponents};
        }
        Cochain etaK = detail::cochain_from_record(cert.eta, tk.all_vars(), C.d(), "eta");
        Cochain eta;
        eta.level = etaK.level;
        for (const auto& [K, fr] : etaK.comps)
            eta.comps[K] = {fr.numerator.remap_vars(map, T.nvars()), fr.denomExponents};

        Cochain full = CF.sub(
            CF.sub(detail::extend_cochain(alpha, T.nvars()), CF.differential(eta)),
            CF.differential(alphaTT));
        if (!CF.loc_zero(full)) fail_internal("compositum lost a killing identity");
    }
    out.tower = T;
    return out;
}

struct TrivializeResult {
    TrivializationCertificate cert;
    RingTower tower;
    std::vector<Poly> cofactors; // over the tower's variables, one per prefix parameter
};

namespace detail {

// linear solve for w = sum_l x_l c_l in the tower, with the c_l drawn
// from the span of all tower monomials of total degree <= D
inline std::optional<std::vector<Poly>> cofactor_solve(const RingTower& T,
                                                       const std::vector<std::size_t>& prefix,
                                                       const Poly& w, int D) {
    const std::size_t nv = T.nvars();
    std::vector<Poly> columns;
    std::vector<std::pair<std::size_t, Poly>> shape; // (parameter slot, monomial)
    for (std::size_t l = 0; l < prefix.size(); ++l) {
        Poly x = Poly::variable(nv, prefix[l]);
        for (long e = 0; e <= D; ++e) {
            for (const auto& m : monomials_of_degree(nv, e)) {
                Poly mono = Poly::monomial(nv, FpScalar::one(), m);
                columns.push_back(normal_form(x * mono, T.combined(), T.budgets()));
                shape.emplace_back(l, mono);
            }
        }
    }
    Poly target = normal_form(w, T.combined(), T.budgets());

    std::map<Monomial, std::size_t> rows;
    auto note = [&](const Poly& q) {
        for (const auto& t : q.terms())
            if (!rows.count(t.m)) rows.emplace(t.m, rows.size());
    };
    note(target);
    for (const auto& q : columns) note(q);

    FpMat A(rows.size(), columns.size());
    std::vector<FpScalar> b(rows.size(), FpScalar::zero());
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (const auto& t : columns[c].terms()) A.at(rows[t.m], c) = t.c;
    for (const auto& t : target.terms()) b[rows[t.m]] = t.c;

    auto sol = solve(A, b);
    if (!sol) return std::nullopt;
    std::vector<Poly> out(prefix.size(), Poly::zero(nv));
    for (std::size_t c = 0; c < columns.size(); ++c)
        out[shape[c].first] = out[shape[c].first] + shape[c].second * (*sol)[c];
    return out;
}

inline void require_sop_prefix(const RingPresentation& pres, const std::vector<std::size_t>& idx,
                               int dim, const Budgets& bud) {
    std::vector<Poly> gens = pres.ideal;
    for (std::size_t l = 0; l < idx.size(); ++l) {
        gens.push_back(Poly::variable(pres.nvars(), idx[l]));
        int drop = krull_dim(IdealPresentation(pres.nvars(), gens), bud);
        if (drop != dim - static_cast<int>(l) - 1)
            fail_pre("parameters are not a system-of-parameters prefix: dimension is " +
                     std::to_string(drop) + " after " + std::to_string(l + 1) + " of them");
    }
}

} // namespace detail

// Constructive ideal-membership transfer: given parameters x_1..x_j
// whose prefix absorbs x_j * w, build a module-finite extension where w
// itself falls into the prefix ideal, with explicit cofactors.
inline TrivializeResult trivialize_relation(const RingPresentation& basePres,
                                            const std::vector<std::string>& params,
                                            const Poly& witness, const Budgets& bud = {}) {
    if (params.empty()) fail_pre("empty parameter list");
    std::vector<std::size_t> idx;
    for (const auto& name : params) {
        std::size_t k = basePres.vars.size();
        for (std::size_t v = 0; v < basePres.vars.size(); ++v)
            if (basePres.vars[v] == name) k = v;
        if (k == basePres.vars.size()) fail_pre("parameter `" + name + "` is not a variable");
        for (auto seen : idx)
            if (seen == k) fail_pre("parameter `" + name + "` repeated");
        idx.push_back(k);
    }
    if (witness.nvars() != basePres.nvars()) fail_pre("witness has wrong arity");
    if (!witness.homogeneous_degree()) fail_pre("witness must be homogeneous");

    std::vector<Poly> baseGens = basePres.ideal;
    if (baseGens.empty()) baseGens.push_back(Poly::zero(basePres.nvars()));
    const int dim = krull_dim(IdealPresentation(basePres.nvars(), baseGens), bud);
    detail::require_sop_prefix(basePres, idx, dim, bud);

    std::vector<Poly> prefixGens = baseGens;
    for (std::size_t l = 0; l + 1 < idx.size(); ++l)
        prefixGens.push_back(Poly::variable(basePres.nvars(), idx[l]));
    IdealPresentation prefix(basePres.nvars(), prefixGens);
    if (ideal_member(witness, prefix, bud))
        fail_pre("witness already lies in the parameter prefix over the base ring");
    Poly xw = Poly::variable(basePres.nvars(), idx.back()) * witness;
    if (!ideal_member(xw, prefix, bud))
        fail_pre("multiplier identity fails: last parameter times witness is not in the prefix");

    RingPresentation pres = basePres;
    pres.cech = idx;
    KillAllResult ka = kill_all(pres, static_cast<int>(idx.size()) - 1, bud);
    const RingTower& T = ka.tower;

    std::vector<std::size_t> prefixIdx(idx.begin(), idx.end() - 1);
    Poly target = witness.extend_vars(T.nvars());
    for (int D = 0; D <= bud.cofactor_deg_cap; ++D) {
        auto cof = detail::cofactor_solve(T, prefixIdx, target, D);
        if (!cof) continue;
        Poly residue = target;
        for (std::size_t l = 0; l < prefixIdx.size(); ++l)
            residue = residue - Poly::variable(T.nvars(), prefixIdx[l]) * (*cof)[l];
        if (!T.zero_test(residue)) fail_internal("cofactor solution failed its own residue check");

        TrivializationCertificate cert;
        cert.p = FpContext::modulus();
        cert.ringHash = ring_hash(cert.p, basePres);
        cert.parameters = params;
        cert.witness = poly_to_string(witness, basePres.vars);
        for (const auto& lvl : T.levels())
            cert.towerLevels.emplace_back(lvl.var, poly_to_string(lvl.relation, T.all_vars()));
        for (const auto& a : T.aux_relations())
            cert.towerAux.push_back(poly_to_string(a, T.all_vars()));
        for (const auto& cfp : *cof) cert.cofactors.push_back(poly_to_string(cfp, T.all_vars()));
        return {cert, T, *cof};
    }
    fail_budget("no cofactor expression within the degree cap; the tower stands, the witness "
                "is reported unresolved, and this is not a disproof");
}

// Trivialization certificates replay the same way: preconditions on
// the base, tower rebuilt relation by relation, cofactors rechecked.
inline VerifyOutcome verify_trivialization(const json& j, const RingPresentation& pres,
                                           const Budgets& bud = {}) {
    try {
        TrivializationCertificate c = trivialization_from_json(j);
        long p = FpContext::modulus();
        if (c.p != p) fail_verify("certificate modulus does not match the session");
        if (c.ringHash != ring_hash(p, pres))
            fail_verify("certificate was issued for a different ring");
        if (c.parameters.empty()) fail_verify("empty parameter list");
        if (c.cofactors.size() + 1 != c.parameters.size())
            fail_verify("cofactor count does not match the parameters");

        std::vector<std::size_t> idx;
        for (const auto& name : c.parameters) {
            std::size_t k = pres.vars.size();
            for (std::size_t v = 0; v < pres.vars.size(); ++v)
                if (pres.vars[v] == name) k = v;
            if (k == pres.vars.size()) fail_verify("parameter `" + name + "` is not a variable");
            for (auto seen : idx)
                if (seen == k) fail_verify("parameter `" + name + "` repeated");
            idx.push_back(k);
        }
        Poly witness = parse_poly(c.witness, pres.vars);
        if (poly_to_string(witness, pres.vars) != c.witness)
            fail_verify("malformed certificate: non-canonical witness");
        if (!witness.homogeneous_degree()) fail_verify("witness must be homogeneous");

        std::vector<Poly> baseGens = pres.ideal;
        if (baseGens.empty()) baseGens.push_back(Poly::zero(pres.nvars()));
        const int dim = krull_dim(IdealPresentation(pres.nvars(), baseGens), bud);
        detail::require_sop_prefix(pres, idx, dim, bud);
        std::vector<Poly> prefixGens = baseGens;
        for (std::size_t l = 0; l + 1 < idx.size(); ++l)
            prefixGens.push_back(Poly::variable(pres.nvars(), idx[l]));
        IdealPresentation prefix(pres.nvars(), prefixGens);
        if (ideal_member(witness, prefix, bud))
            fail_verify("witness already lies in the parameter prefix over the base ring");
        if (!ideal_member(Poly::variable(pres.nvars(), idx.back()) * witness, prefix, bud))
            fail_verify("multiplier identity fails on the base");

        RingTower T(pres, bud);
        for (const auto& [var, relText] : c.towerLevels) {
            detail::require_fresh_name(T, var);
            std::vector<std::string> newVars = T.all_vars();
            newVars.push_back(var);
            Poly rel = parse_poly(relText, newVars);
            if (poly_to_string(rel, newVars) != relText)
                fail_verify("malformed certificate: non-canonical adjunction relation");
            T = T.adjoin_root(var, rel);
        }
        for (const auto& auxText : c.towerAux) {
            Poly a = parse_poly(auxText, T.all_vars());
            if (poly_to_string(a, T.all_vars()) != auxText)
                fail_verify("malformed certificate: non-canonical auxiliary relation");
            T = T.impose_relation(a);
        }

        Poly residue = witness.extend_vars(T.nvars());
        for (std::size_t l = 0; l + 1 < idx.size(); ++l) {
            Poly cf = parse_poly(c.cofactors[l], T.all_vars());
            if (poly_to_string(cf, T.all_vars()) != c.cofactors[l])
                fail_verify("malformed certificate: non-canonical cofactor");
            residue = residue - Poly::variable(T.nvars(), idx[l]) * cf;
        }
        if (!T.zero_test(residue)) fail_verify("cofactors do not reduce the witness to zero");
        return {};
    } catch (const error& e) {
        return {false, e.what()};
    }
}

} // namespace charp
