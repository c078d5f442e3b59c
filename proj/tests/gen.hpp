#pragma once

// Shared random generators for property tests. Seeded per test case so
// failures reproduce.

#include <random>

#include "charp/poly.hpp"

namespace gen {

using charp::FpScalar;
using charp::Monomial;
using charp::Poly;

inline Poly random_poly(std::mt19937& rng, std::size_t nvars, int maxDeg, int maxTerms) {
    std::uniform_int_distribution<int> termCount(0, maxTerms);
    std::uniform_int_distribution<int> expDist(0, maxDeg);
    std::uniform_int_distribution<long> coefDist(0, charp::FpContext::modulus() - 1);
    Poly p(nvars);
    int k = termCount(rng);
    for (int i = 0; i < k; ++i) {
        Monomial m(nvars, 0);
        int budget = maxDeg;
        for (std::size_t j = 0; j < nvars; ++j) {
            int e = expDist(rng) % (budget + 1);
            m[j] = e;
            budget -= e;
        }
        p += Poly::monomial(nvars, FpScalar::of(coefDist(rng)), std::move(m));
    }
    return p;
}

// Homogeneous of exact degree d (possibly zero if coefficients cancel).
inline Poly random_homog(std::mt19937& rng, std::size_t nvars, int d, int maxTerms) {
    std::uniform_int_distribution<int> termCount(1, maxTerms);
    std::uniform_int_distribution<long> coefDist(0, charp::FpContext::modulus() - 1);
    Poly p(nvars);
    int k = termCount(rng);
    for (int i = 0; i < k; ++i) {
        Monomial m(nvars, 0);
        int rest = d;
        for (std::size_t j = 0; j + 1 < nvars; ++j) {
            std::uniform_int_distribution<int> e(0, rest);
            m[j] = e(rng);
            rest -= m[j];
        }
        if (nvars > 0) m[nvars - 1] = rest;
        p += Poly::monomial(nvars, FpScalar::of(coefDist(rng)), std::move(m));
    }
    return p;
}

} // namespace gen
