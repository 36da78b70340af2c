#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "puccilab/pucci.hpp"

using namespace puccilab;

namespace {

Sym2 random_sym(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("eigenvalues closed form") {
    const auto [e1, e2] = eigenvalues({2.0, 0.0, -2.0});
    CHECK(e1 == doctest::Approx(-2.0));
    CHECK(e2 == doctest::Approx(2.0));
    const auto [f1, f2] = eigenvalues({0.0, 1.0, 0.0});
    CHECK(f1 == doctest::Approx(-1.0));
    CHECK(f2 == doctest::Approx(1.0));
}

TEST_CASE("saddle example") {
    const EllipticityPair ell(1.0, 2.0);
    const Sym2 m = Sym2::diag(2.0, -2.0);
    CHECK(pucci_plus(m, ell) == doctest::Approx(2.0));
    CHECK(pucci_minus(m, ell) == doctest::Approx(-2.0));
}

TEST_CASE("duality") {
    std::mt19937_64 rng(11);
    const EllipticityPair ell(1.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const Sym2 m = random_sym(rng);
        const Sym2 neg{-m.a11, -m.a12, -m.a22};
        CHECK(pucci_minus(m, ell) == doctest::Approx(-pucci_plus(neg, ell)));
        CHECK(pucci_minus(m, ell) <= pucci_plus(m, ell) + 1e-14);
    }
}

TEST_CASE("positive homogeneity") {
    std::mt19937_64 rng(12);
    const EllipticityPair ell(1.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const Sym2 m = random_sym(rng);
        for (double t : {0.0, 0.5, 3.0}) {
            const Sym2 tm{t * m.a11, t * m.a12, t * m.a22};
            CHECK(pucci_plus(tm, ell) == doctest::Approx(t * pucci_plus(m, ell)));
            CHECK(pucci_minus(tm, ell) == doctest::Approx(t * pucci_minus(m, ell)));
        }
    }
}

TEST_CASE("monotone in the matrix order") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const EllipticityPair ell(1.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const Sym2 m = random_sym(rng);
        // m + p with p = v v^T psd
        const double v1 = u(rng), v2 = u(rng);
        const Sym2 n{m.a11 + v1 * v1, m.a12 + v1 * v2, m.a22 + v2 * v2};
        CHECK(pucci_plus(m, ell) <= pucci_plus(n, ell) + 1e-12);
        CHECK(pucci_minus(m, ell) <= pucci_minus(n, ell) + 1e-12);
    }
}

TEST_CASE("degenerate ellipticity reduces to trace") {
    std::mt19937_64 rng(14);
    const EllipticityPair ell(2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const Sym2 m = random_sym(rng);
        CHECK(pucci_plus(m, ell) == doctest::Approx(2.0 * m.trace()));
        CHECK(pucci_minus(m, ell) == doctest::Approx(2.0 * m.trace()));
    }
}

TEST_CASE("invalid ellipticity throws") {
    CHECK_THROWS_AS(EllipticityPair(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(EllipticityPair(2.0, 1.0), std::invalid_argument);
}

TEST_CASE("bruteforce oracle agreement") {
    std::mt19937_64 rng(15);
    for (const EllipticityPair& ell : {EllipticityPair(1.0, 2.0), EllipticityPair(1.0, 10.0)}) {
        for (int i = 0; i < 25; ++i) {
            const Sym2 m = random_sym(rng);
            const auto [sup, inf] = pucci_bruteforce(m, ell, 10000);
            const double tol = 2e-2 * m.norm() + 1e-12;
            CHECK(std::abs(pucci_plus(m, ell) - sup) <= tol);
            CHECK(std::abs(pucci_minus(m, ell) - inf) <= tol);
            // bruteforce never exceeds the closed form
            CHECK(sup <= pucci_plus(m, ell) + 1e-12);
            CHECK(inf >= pucci_minus(m, ell) - 1e-12);
        }
    }
}
