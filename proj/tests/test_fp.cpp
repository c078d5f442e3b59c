#include <catch2/catch_amalgamated.hpp>

#include "charp/fp.hpp"

using namespace charp;

TEST_CASE("modulus must be prime") {
    CHECK_THROWS_AS(FpContext::set(4), error);
    CHECK_THROWS_AS(FpContext::set(1), error);
    CHECK_THROWS_AS(FpContext::set(0), error);
    try {
        FpContext::set(91); // 7 * 13
        FAIL("accepted composite modulus");
    } catch (const error& e) {
        CHECK(e.category() == errc::parse);
    }
    FpContext::set(7);
    CHECK(FpContext::modulus() == 7);
}

TEST_CASE("arithmetic wraps mod p") {
    FpContext::set(7);
    CHECK((FpScalar::of(5) + FpScalar::of(4)).v == 2);
    CHECK((FpScalar::of(3) - FpScalar::of(5)).v == 5);
    CHECK((FpScalar::of(6) * FpScalar::of(6)).v == 1);
    CHECK((-FpScalar::of(3)).v == 4);
    CHECK((-FpScalar::zero()).v == 0);
    CHECK(FpScalar::of(-1).v == 6);
    CHECK(FpScalar::of(-15).v == 6);
}

TEST_CASE("every nonzero element is invertible") {
    for (std::uint32_t p : {2u, 3u, 5u, 31u}) {
        FpContext::set(p);
        for (std::uint32_t a = 1; a < p; ++a) {
            FpScalar x(a);
            CHECK((x * x.inv()).v == 1);
        }
    }
    FpContext::set(7);
    CHECK_THROWS_AS(FpScalar::zero().inv(), error);
}

TEST_CASE("pow matches repeated multiplication and Fermat") {
    FpContext::set(13);
    FpScalar x = FpScalar::of(6);
    FpScalar acc = FpScalar::one();
    for (int e = 0; e < 20; ++e) {
        CHECK(x.pow(e) == acc);
        acc *= x;
    }
    for (std::uint32_t a = 0; a < 13; ++a)
        CHECK(FpScalar(a).pow(13) == FpScalar(a));
}

TEST_CASE("no overflow near the 31-bit modulus ceiling") {
    FpContext::set(2147483647); // Mersenne prime 2^31 - 1
    FpScalar big = FpScalar::of(2147483646); // = -1
    CHECK((big * big).v == 1);
    CHECK((big + big).v == 2147483645);
    CHECK((big.inv() * big).v == 1);
}
