#include <catch2/catch_amalgamated.hpp>

#include "charp/cech.hpp"
#include "charp/polytext.hpp"
#include "gen.hpp"

using namespace charp;

static const std::vector<std::string> XY = {"x", "y"};
static const std::vector<std::string> XYZ = {"x", "y", "z"};
static const std::vector<std::string> ABCD = {"a", "b", "c", "d"};

static RingPresentation cone() {
    std::vector<Poly> g;
    for (const char* s : {"a*d - b*c", "b^3 - a^2*c", "c^3 - b*d^2", "b^2*d - a*c^2"})
        g.push_back(parse_poly(s, ABCD));
    return {ABCD, std::move(g), {0, 3}}; // sequence (a, d)
}

// the distinguished degree-1 cocycle (b^2/a, c^2/d)
static Cochain cone_alpha() {
    Cochain c;
    c.level = 1;
    c.comps[{0}] = {parse_poly("b^2", ABCD), {1, 0}};
    c.comps[{1}] = {parse_poly("c^2", ABCD), {0, 1}};
    return c;
}

TEST_CASE("subset enumeration is lexicographic") {
    auto s = index_subsets(3, 2);
    REQUIRE(s.size() == 3);
    CHECK(s[0] == Subset{0, 1});
    CHECK(s[1] == Subset{0, 2});
    CHECK(s[2] == Subset{1, 2});
    CHECK(index_subsets(4, 0).size() == 1);
    CHECK(index_subsets(2, 3).empty());
}

TEST_CASE("differential of a ring element is the tuple of restrictions") {
    FpContext::set(5);
    CechComplex C{RingTower(cone())};
    Cochain r;
    r.level = 0;
    r.comps[{}] = {parse_poly("b*c", ABCD), {0, 0}};
    Cochain dr = C.differential(r);
    CHECK(dr.level == 1);
    CHECK(C.component(dr, {0}).numerator == parse_poly("b*c", ABCD));
    CHECK(C.component(dr, {1}).numerator == parse_poly("b*c", ABCD));
}

TEST_CASE("level-one differential is the alternating difference over a common denominator") {
    FpContext::set(5);
    CechComplex C{RingTower(cone())};
    Cochain c;
    c.level = 1;
    c.comps[{0}] = {parse_poly("b^2", ABCD), {1, 0}}; // u = b^2/a
    c.comps[{1}] = {parse_poly("c^2", ABCD), {0, 1}}; // v = c^2/d
    Cochain dc = C.differential(c);
    Fraction top = C.component(dc, {0, 1});
    // v - u lifted to denominator a*d
    CHECK(top.denomExponents == std::vector<int>{1, 1});
    CHECK(top.numerator == parse_poly("a*c^2 - b^2*d", ABCD));
}

TEST_CASE("d after d dies in every localization") {
    for (std::uint32_t p : {2u, 3u, 5u}) {
        FpContext::set(p);
        RingPresentation free3{XYZ, {Poly::zero(3)}, {0, 1, 2}};
        CechComplex C{RingTower(free3)};
        std::mt19937 rng(300 + p);
        for (int it = 0; it < 10; ++it) {
            Cochain c;
            c.level = 1;
            for (std::size_t j = 0; j < 3; ++j) {
                std::vector<int> e(3, 0);
                e[j] = 1 + static_cast<int>(rng() % 2);
                c.comps[{j}] = {gen::random_poly(rng, 3, 3, 3), e};
            }
            CHECK(C.loc_zero(C.differential(C.differential(c))));
        }
    }
}

TEST_CASE("cocycle detection on the cone") {
    FpContext::set(2);
    CechComplex C{RingTower(cone())};
    CHECK(C.is_cocycle(cone_alpha()));

    Cochain bad;
    bad.level = 1;
    bad.comps[{0}] = {Poly::one(4), {1, 0}}; // (1/a, 0)
    CHECK(!C.is_cocycle(bad));

    Cochain top;
    top.level = 2;
    top.comps[{0, 1}] = {parse_poly("b", ABCD), {3, 2}};
    CHECK(C.is_cocycle(top)); // top of the complex
}

TEST_CASE("the designated sequence must cut out a finite quotient") {
    FpContext::set(2);
    CHECK(CechComplex{RingTower(cone())}.sequence_is_m_primary());
    RingPresentation half{XY, {Poly::zero(2)}, {0}}; // only x inverted
    CHECK(!CechComplex{RingTower(half)}.sequence_is_m_primary());
    RingPresentation full{XY, {Poly::zero(2)}, {0, 1}};
    CHECK(CechComplex{RingTower(full)}.sequence_is_m_primary());
}

TEST_CASE("differential is linear over ring elements") {
    FpContext::set(3);
    CechComplex C{RingTower(cone())};
    std::mt19937 rng(31);
    for (int it = 0; it < 10; ++it) {
        Cochain c;
        c.level = 1;
        c.comps[{0}] = {gen::random_poly(rng, 4, 2, 3), {1 + static_cast<int>(rng() % 2), 0}};
        c.comps[{1}] = {gen::random_poly(rng, 4, 2, 3), {0, 1}};
        Poly r = gen::random_poly(rng, 4, 2, 3);
        Cochain lhs = C.differential(C.scale(c, r));
        Cochain rhs = C.scale(C.differential(c), r);
        CHECK(C.loc_zero(C.sub(lhs, rhs)));
    }
}

TEST_CASE("homotopy bounds constant cocycles") {
    FpContext::set(5);
    CechComplex C{RingTower(cone())};
    Cochain c;
    c.level = 1;
    Poly w = parse_poly("b*c + a*d", ABCD);
    c.comps[{0}] = {w, {0, 0}};
    c.comps[{1}] = {w, {0, 0}};
    Cochain eta = C.unit_homotopy(c);
    CHECK(eta.level == 0);
    CHECK(C.component(eta, {}).numerator == w);

    Cochain zero;
    zero.level = 1;
    CHECK(C.unit_homotopy(zero).empty());
}

TEST_CASE("homotopy in three variables via re-applied differential") {
    FpContext::set(3);
    RingPresentation free3{XYZ, {Poly::zero(3)}, {0, 1, 2}};
    CechComplex C{RingTower(free3)};
    std::mt19937 rng(77);
    for (int it = 0; it < 8; ++it) {
        // boundaries of constant cochains are constant cocycles
        Cochain gamma;
        gamma.level = 1;
        for (std::size_t j = 0; j < 3; ++j)
            gamma.comps[{j}] = {gen::random_poly(rng, 3, 2, 3), {0, 0, 0}};
        Cochain c = C.differential(gamma);
        Cochain eta = C.unit_homotopy(c);
        Cochain back = C.differential(eta);
        for (const auto& J : index_subsets(3, 2))
            CHECK(C.ring().zero_test(C.component(back, J).numerator -
                                     C.component(c, J).numerator));
    }
}

TEST_CASE("homotopy rejects bad inputs") {
    FpContext::set(5);
    CechComplex C{RingTower(cone())};
    Cochain frac;
    frac.level = 1;
    frac.comps[{0}] = {parse_poly("b^2", ABCD), {1, 0}};
    CHECK_THROWS_AS(C.unit_homotopy(frac), error);
    Cochain notCocycle;
    notCocycle.level = 1;
    notCocycle.comps[{0}] = {parse_poly("a", ABCD), {0, 0}};
    notCocycle.comps[{1}] = {parse_poly("d", ABCD), {0, 0}};
    CHECK_THROWS_AS(C.unit_homotopy(notCocycle), error);
}

TEST_CASE("component validation catches malformed cochains") {
    FpContext::set(5);
    CechComplex C{RingTower(cone())};
    Cochain wrongSize;
    wrongSize.level = 1;
    wrongSize.comps[{0, 1}] = {parse_poly("b", ABCD), {0, 0}};
    CHECK_THROWS_AS(C.differential(wrongSize), error);
    Cochain outside;
    outside.level = 1;
    outside.comps[{0}] = {parse_poly("b", ABCD), {0, 2}}; // denominator d, subset {a}
    CHECK_THROWS_AS(C.differential(outside), error);
}
