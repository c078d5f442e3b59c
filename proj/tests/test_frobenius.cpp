#include <catch2/catch_amalgamated.hpp>

#include "charp/frobenius.hpp"
#include "charp/polytext.hpp"
#include "gen.hpp"

using namespace charp;

namespace {

const std::vector<std::string> XY = {"x", "y"};
const std::vector<std::string> XYZ = {"x", "y", "z"};
const std::vector<std::string> ABCD = {"a", "b", "c", "d"};

RingPresentation cone(int p) {
    FpContext::set(p);
    std::vector<Poly> gens;
    for (const char* s : {"a*d-b*c", "b^3-a^2*c", "c^3-b*d^2", "b^2*d-a*c^2"})
        gens.push_back(parse_poly(s, ABCD));
    return {ABCD, gens, {0, 3}};
}

RingPresentation fermat(int p) {
    FpContext::set(p);
    return {XYZ, {parse_poly("x^3+y^3+z^3", XYZ)}, {0, 1}};
}

ClassHandle gap_class() {
    Cochain c;
    c.level = 1;
    c.comps[{0}] = {parse_poly("b^2", ABCD), {1, 0}};
    c.comps[{1}] = {parse_poly("c^2", ABCD), {0, 1}};
    return {c, 1, {}};
}

// independent Hasse oracle: brute-force expansion of the defining cubic
FpScalar hasse_coefficient(int p) {
    FpContext::set(p);
    Poly F = parse_poly("x^3+y^3+z^3", XYZ);
    Poly Fp = F.pow(p - 1);
    return Fp.coeff_of({p - 1, p - 1, p - 1});
}

} // namespace

TEST_CASE("componentwise p-th power") {
    for (int p : {2, 3, 5}) {
        FpContext::set(p);
        CechComplex C(RingTower({XY, {Poly::zero(2)}, {0, 1}}));
        Cochain c;
        c.level = 2;
        c.comps[{0, 1}] = {Poly::one(2), {1, 1}};
        Cochain f = frob_cochain(C, c);
        CHECK(f.comps.at(Subset{0, 1}).numerator == Poly::one(2));
        CHECK(f.comps.at(Subset{0, 1}).denomExponents == std::vector<int>{p, p});
    }
    CechComplex C(RingTower(cone(3)));
    Cochain a = gap_class().cocycle;
    Cochain f = frob_cochain(C, a);
    CHECK(f.comps.at(Subset{0}).numerator == parse_poly("b^6", ABCD));
    CHECK(f.comps.at(Subset{0}).denomExponents == std::vector<int>{3, 0});
    CHECK(f.comps.at(Subset{1}).numerator == parse_poly("c^6", ABCD));
}

TEST_CASE("Frobenius respects scaling by p-th powers") {
    std::mt19937 rng(5);
    for (int p : {2, 3, 5}) {
        CechComplex C(RingTower(cone(p)));
        for (int trial = 0; trial < 8; ++trial) {
            Poly r = gen::random_poly(rng, 4, 2, 4);
            Cochain c;
            c.level = 1;
            c.comps[{0}] = {gen::random_poly(rng, 4, 3, 4), {2, 0}};
            c.comps[{1}] = {gen::random_poly(rng, 4, 2, 3), {0, 1}};
            Cochain lhs = frob_cochain(C, C.scale(c, r));
            Cochain rhs = C.scale(frob_cochain(C, c), r.pow_p(1));
            CHECK(C.loc_zero(C.sub(lhs, rhs)));
        }
    }
}

TEST_CASE("Frobenius commutes with the differential") {
    std::mt19937 rng(6);
    for (int p : {2, 3, 5}) {
        CechComplex C(RingTower(cone(p)));
        for (int trial = 0; trial < 6; ++trial) {
            Cochain c;
            c.level = 1;
            c.comps[{0}] = {gen::random_poly(rng, 4, 3, 5), {1, 0}};
            c.comps[{1}] = {gen::random_poly(rng, 4, 3, 5), {0, 2}};
            Cochain lhs = C.differential(frob_cochain(C, c));
            Cochain rhs = frob_cochain(C, C.differential(c));
            CHECK(C.loc_zero(C.sub(lhs, rhs)));
        }
    }
}

TEST_CASE("cocycles stay cocycles and degree scales by p") {
    for (int p : {2, 3}) {
        CechComplex C(RingTower(cone(p)));
        Cochain f = frob_cochain(C, gap_class().cocycle);
        CHECK(C.is_cocycle(f));
        for (const auto& [J, fr] : f.comps) CHECK(fraction_degree(fr) == p);
    }
}

TEST_CASE("orbit of the gap class falls to zero in one step") {
    for (int p : {2, 3, 5}) {
        CechComplex C(RingTower(cone(p)));
        auto orbit = frob_orbit(C, gap_class(), 8);
        INFO("p=" << p);
        REQUIRE(orbit.size() == 2);
        CHECK(!orbit[0].cocycle.empty());
        CHECK(orbit[1].cocycle.empty());
        CHECK(orbit[1].internalDegree == p);
    }
}

TEST_CASE("orbit of the zero class") {
    CechComplex C(RingTower(cone(2)));
    Cochain z;
    z.level = 1;
    auto orbit = frob_orbit(C, {z, 1, {}}, 8);
    REQUIRE(orbit.size() == 1);
    CHECK(orbit[0].cocycle.empty());
}

TEST_CASE("degree-zero Fermat orbit is closed at length one") {
    CechComplex C(RingTower(fermat(7)));
    auto piece = lc_graded_piece(C, 2, 0);
    REQUIRE(piece.dimension == 1);
    auto orbit = frob_orbit(C, {piece.basis[0], 0, {}}, 8);
    CHECK(orbit.size() == 1);
}

TEST_CASE("gap class relation is bare nilpotence") {
    for (int p : {2, 3, 5}) {
        CechComplex C(RingTower(cone(p)));
        auto rel = find_relation(C, gap_class());
        INFO("p=" << p);
        CHECK(rel.g.s == 1);
        REQUIRE(rel.g.lowerCoeffs.size() == 1);
        CHECK(rel.g.lowerCoeffs[0].is_zero());
        Cochain img = apply_frobenius_poly(C, rel.g, gap_class().cocycle);
        CHECK(C.loc_zero(C.sub(C.differential(rel.beta), img)));
        if (p == 2) {
            const Poly& num = rel.beta.comps.at(Subset{}).numerator;
            CHECK(normal_form(num - parse_poly("b*c", ABCD),
                              C.ring().combined(), C.ring().budgets())
                      .is_zero());
        }
    }
}

TEST_CASE("Hasse dichotomy on the Fermat cubic") {
    struct Case { int p; bool ordinary; };
    for (auto [p, ordinary] : {Case{5, false}, Case{7, true}, Case{13, true}}) {
        CechComplex C(RingTower(fermat(p)));
        auto piece = lc_graded_piece(C, 2, 0);
        REQUIRE(piece.dimension == 1);
        auto rel = find_relation(C, {piece.basis[0], 0, {}});
        INFO("p=" << p);
        REQUIRE(rel.g.s == 1);
        REQUIRE(rel.g.lowerCoeffs.size() == 1);
        FpScalar lambda = hasse_coefficient(p);
        CHECK((lambda == FpScalar::zero()) == !ordinary);
        if (ordinary) {
            CHECK(rel.g.lowerCoeffs[0] == Poly::constant(3, lambda));
        } else {
            CHECK(rel.g.lowerCoeffs[0].is_zero());
        }
        Cochain img = apply_frobenius_poly(C, rel.g, piece.basis[0]);
        CHECK(C.loc_zero(C.sub(C.differential(rel.beta), img)));
    }
}

TEST_CASE("degenerate relations for zero classes") {
    CechComplex C(RingTower(cone(3)));
    Cochain z;
    z.level = 1;
    auto rel = find_relation(C, {z, 1, {}});
    CHECK(rel.g.s == 0);
    CHECK(rel.g.lowerCoeffs.empty());
    CHECK(rel.beta.empty());

    // nonzero cochain, zero class: g(T) = T with the bounding preimage
    Cochain gamma;
    gamma.level = 0;
    gamma.comps[{}] = {parse_poly("a^2+b*d", ABCD), {0, 0}};
    Cochain bd = C.differential(gamma);
    auto rel2 = find_relation(C, {bd, 2, {}});
    CHECK(rel2.g.s == 0);
    CHECK(C.loc_zero(C.sub(C.differential(rel2.beta), bd)));
}

TEST_CASE("the returned p-polynomial is additive") {
    std::mt19937 rng(9);
    for (int p : {2, 3, 5}) {
        CechComplex C(RingTower(cone(p)));
        auto rel = find_relation(C, gap_class());
        RingTower T = RingTower(cone(p)).adjoin_root(
            "Z", parse_poly("Z^2-b*c", {"a", "b", "c", "d", "Z"}));
        for (int trial = 0; trial < 6; ++trial) {
            Poly u = gen::random_poly(rng, 5, 2, 4);
            Poly v = gen::random_poly(rng, 5, 2, 4);
            Poly lhs = apply_frobenius_poly(rel.g, u + v);
            Poly rhs = apply_frobenius_poly(rel.g, u) + apply_frobenius_poly(rel.g, v);
            CHECK(T.zero_test(lhs - rhs));
        }
    }
    // additivity with nonzero lower coefficients, in the plain ring
    FpContext::set(5);
    FrobeniusPoly g{2, {parse_poly("x+y", XY), parse_poly("x*y", XY)}};
    for (int trial = 0; trial < 6; ++trial) {
        Poly u = gen::random_poly(rng, 2, 3, 5);
        Poly v = gen::random_poly(rng, 2, 3, 5);
        CHECK(apply_frobenius_poly(g, u + v) ==
              apply_frobenius_poly(g, u) + apply_frobenius_poly(g, v));
    }
}

TEST_CASE("guard band rejects classes whose window never closes") {
    // top cohomology of the plane: every negative degree is nonzero, so a
    // positive-degree escape is fine but a negative-degree one is blocked
    FpContext::set(3);
    CechComplex C(RingTower({XY, {Poly::zero(2)}, {0, 1}}));
    auto piece = lc_graded_piece(C, 2, -2);
    REQUIRE(piece.dimension == 1);
    try {
        find_relation(C, {piece.basis[0], -2, {}});
        FAIL("expected a precondition error");
    } catch (const error& e) {
        CHECK(e.category() == errc::precondition);
        CHECK(std::string(e.what()).find("guard band") != std::string::npos);
    }
}
