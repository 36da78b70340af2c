#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "puccilab/certify.hpp"

using namespace puccilab;

TEST_CASE("geometric case, omega = zero") {
    IterationParams p;
    p.c0 = 0.25;
    p.eta = 0.25;
    p.alpha0 = 0.5;
    p.K = 40;
    const CertificationReport rep = ak_sequence(Modulus::zero(), p);
    // A_k = c0 * 2^-k, sum = 1/2
    CHECK(rep.A[0] == 0.25);
    CHECK(rep.A[3] == doctest::Approx(0.25 / 8.0));
    CHECK(rep.partial_sum == doctest::Approx(0.5));
    CHECK(rep.bound_3c0_ok);
    CHECK(rep.tail_bound <= 1e-6);
}

TEST_CASE("rescaled linear modulus, fixture") {
    // omega(s) = s/4, eta = 1/2, alpha0 = 1/4: the decay branch dominates and
    // the sum is geometric with ratio 2^-1/4, well above 3 c0. The smallness
    // inequality fails for these parameters, so no bound is contradicted.
    IterationParams p;
    p.c0 = 0.25;
    p.eta = 0.5;
    p.alpha0 = 0.25;
    p.K = 200;
    const CertificationReport rep =
        ak_sequence(Modulus::power(1.0, 1.0).with_radius_scale(0.25), p);
    CHECK(rep.partial_sum == doctest::Approx(1.5713033769708098).epsilon(1e-12));
    CHECK_FALSE(rep.bound_3c0_ok);
    CHECK_FALSE(p.smallness_ok());
    REQUIRE(rep.conditions.count("e-w"));
    CHECK_FALSE(rep.conditions.at("e-w").ok);
}

TEST_CASE("3c0 bound holds under the smallness condition") {
    IterationParams p;
    p.c0 = 0.25;
    p.eta = 1.0 / 16.0;
    p.alpha0 = 0.5;
    p.K = 200;
    REQUIRE(p.smallness_ok());
    for (const Modulus& w : {Modulus::zero(), Modulus::power(1.0, 1.0).with_radius_scale(0.25),
                             Modulus::power(0.5, 1.0).with_radius_scale(std::ldexp(1.0, -6))}) {
        const CertificationReport rep = ak_sequence(w, p);
        CHECK(rep.partial_sum <= 3.0 * p.c0 + 1e-15);
        CHECK(rep.bound_3c0_ok);
        CHECK(rep.tail_bound < 1e-12);
    }
}

TEST_CASE("A_k sandwich") {
    IterationParams p;
    p.c0 = 0.25;
    p.eta = 1.0 / 16.0;
    p.alpha0 = 0.5;
    p.K = 50;
    const Modulus w = Modulus::power(0.5, 1.0).with_radius_scale(std::ldexp(1.0, -6));
    const CertificationReport rep = ak_sequence(w, p);
    const double decay = std::pow(p.eta, p.alpha0);
    for (int k = 1; k <= p.K; ++k) {
        CHECK(rep.A[k] >= w.eval(std::pow(p.eta, k)) - 1e-15);
        CHECK(rep.A[k] >= decay * rep.A[k - 1] - 1e-15);
        CHECK(rep.A[k] <= std::max(0.25, w.eval(1.0)) + 1e-15);
    }
}

TEST_CASE("growth product fixtures") {
    const Modulus w = Modulus::log_inverse(1.0, 1.0);
    const auto plus = growth_product(w, 0.125, 0.5, 60, +1);
    const auto minus = growth_product(w, 0.125, 0.5, 60, -1);
    REQUIRE(plus.size() == 61);
    CHECK(plus[60] == doctest::Approx(1.8491749574488616).epsilon(1e-14));
    CHECK(minus[60] == doctest::Approx(0.532253378982866).epsilon(1e-14));
    for (std::size_t k = 1; k < plus.size(); ++k) {
        CHECK(plus[k] > plus[k - 1]);
        CHECK(minus[k] < minus[k - 1]);
        CHECK(minus[k] > 0.0);
    }
}

TEST_CASE("growth product trivial and scaled") {
    const auto a = growth_product(Modulus::zero(), 0.125, 0.5, 10, +1, 2.0);
    for (double v : a) CHECK(v == 2.0);
    const auto b = growth_product(Modulus::power(1.0, 1.0), 0.25, 0.5, 10, +1);
    CHECK(b[1] == doctest::Approx(1.0 + 0.25 * 0.5));
}

TEST_CASE("dini dichotomy of the products") {
    // Dini modulus: both products converge to finite nonzero limits
    const Modulus dini = Modulus::power(0.5, 1.0);
    const auto p1 = growth_product(dini, 0.125, 0.5, 400, +1);
    const auto m1 = growth_product(dini, 0.125, 0.5, 400, -1);
    CHECK(p1[400] / p1[200] < 1.0001);
    CHECK(m1[400] > 0.5 * m1[200]);
    CHECK(m1[400] / m1[200] > 0.9999);
    // non-Dini: + diverges, - vanishes
    const Modulus bad = Modulus::log_inverse(1.0, 1.0);
    const auto p2 = growth_product(bad, 0.125, 0.5, 2000, +1);
    const auto m2 = growth_product(bad, 0.125, 0.5, 2000, -1);
    // divergence is only logarithmic, so compare growth factors, not levels
    CHECK(p2[2000] > 1.2 * p2[200]);
    CHECK(m2[2000] < 0.8 * m2[200]);
}

TEST_CASE("condition arithmetic") {
    IterationParams p;
    p.eta = 0.25;
    p.alpha0 = 0.5;
    CHECK(p.smallness_slack() == doctest::Approx(3.0 / 8.0 - 0.5));
    CHECK_FALSE(p.smallness_ok());
    p.eta = 1.0 / 16.0;
    CHECK(p.smallness_slack() == doctest::Approx(45.0 / 64.0 - 0.5));
    CHECK(p.smallness_ok());

    p.c0 = 0.25;
    const auto conds = check_conditions(p, {{"C_hat", 8.0}});
    REQUIRE(conds.count("e-w"));
    CHECK(conds.at("e-w").ok);
    REQUIRE(conds.count("e.21"));
    CHECK(conds.at("e.21").ok);
    CHECK(conds.at("e.21").slack == doctest::Approx(1.0));
}

TEST_CASE("report serialization") {
    IterationParams p;
    p.K = 5;
    CertificationReport rep = ak_sequence(Modulus::zero(), p);
    rep.a = growth_product(Modulus::zero(), p.c0, p.eta, p.K, +1);
    const std::string j = rep.to_json();
    CHECK(j.find("partial_sum") != std::string::npos);
    rep.write_csv("/tmp/puccilab_cert_test.csv");
}
