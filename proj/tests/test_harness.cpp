#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "puccilab/harness.hpp"

using namespace puccilab;

namespace {

std::vector<double> sample(const GridMask& mask, const std::function<double(Point)>& f) {
    std::vector<double> data(mask.n_interior());
    for (std::size_t ci = 0; ci < mask.n_interior(); ++ci)
        data[ci] = f(mask.node_point(mask.interior_nodes[ci]));
    return data;
}

}  // namespace

TEST_CASE("scenario names round trip") {
    for (Scenario s : {Scenario::Lipschitz, Scenario::AntiLipschitz, Scenario::Hopf,
                       Scenario::AntiHopf, Scenario::FlatC1Alpha, Scenario::FlatHopf,
                       Scenario::NotchHopf})
        CHECK(scenario_from_name(scenario_name(s)) == s);
    CHECK_THROWS(scenario_from_name("nope"));
}

TEST_CASE("validate rejects mismatched domains") {
    ProblemSpec spec;
    spec.scenario = Scenario::AntiLipschitz;
    spec.domain = DomainSpec::graph_exterior_minus(Modulus::power(0.5, 1.0), 1.0);
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);  // Dini where non-Dini needed
    spec.domain = DomainSpec::graph_exterior_minus(Modulus::log_inverse(1.0, 1.0), 1.0);
    CHECK_NOTHROW(spec.validate());
    spec.scenario = Scenario::Hopf;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);  // wrong side
    spec.scenario = Scenario::NotchHopf;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.domain = DomainSpec::notch(0.2, 1.0);
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("pointwise norms on model functions") {
    const GridMask mask = rasterize(DomainSpec::half_ball(1.0), 1.0 / 32.0, StencilSet::make(3));
    {
        const auto r = check_pointwise_norms(mask, sample(mask, [](Point) { return 0.0; }),
                                             NormKind::C01, Modulus::zero());
        CHECK(r.pass);
        CHECK(r.C == 0.0);
    }
    {
        const auto r = check_pointwise_norms(
            mask, sample(mask, [](Point x) { return std::hypot(x.x1, x.x2); }), NormKind::C01,
            Modulus::zero());
        CHECK(r.pass);
        CHECK(r.C == doctest::Approx(1.0));
    }
    {
        const auto r = check_pointwise_norms(
            mask, sample(mask, [](Point x) { return std::pow(std::hypot(x.x1, x.x2), 1.5); }),
            NormKind::C1Dini, Modulus::power(0.5, 1.0));
        CHECK(r.pass);
        // continuum values are C = 1, l = 0; the grid minimax sits within
        // O(sqrt(h)) of them
        CHECK(r.C == doctest::Approx(1.0).epsilon(0.05));
        CHECK(std::abs(r.l1) <= 1e-6);
        CHECK(std::abs(r.l2) <= 2.5 * std::sqrt(1.0 / 32.0));
    }
    {
        // |x|^{1/2} is not Lipschitz at 0
        const auto r = check_pointwise_norms(
            mask, sample(mask, [](Point x) { return std::sqrt(std::hypot(x.x1, x.x2)); }),
            NormKind::C01, Modulus::zero());
        CHECK(r.C > 3.0);
    }
    {
        const auto r = check_pointwise_norms(
            mask, sample(mask, [](Point x) { return std::sqrt(std::hypot(x.x1, x.x2)); }),
            NormKind::Cm1Dini, Modulus::power(0.5, 1.0));
        CHECK(r.pass);
        CHECK(r.C > 0.0);
    }
}

TEST_CASE("hopf on the half ball") {
    ProblemSpec spec;
    spec.scenario = Scenario::Hopf;
    spec.domain = DomainSpec::half_ball(1.0);
    spec.h = 1.0 / 32.0;
    const auto [field, report] = run_scenario(spec);
    REQUIRE(!report.q.empty());
    for (double qv : report.q) {
        CHECK(qv > 0.0);
        CHECK(qv >= report.q[0] / 2.0);
        CHECK(qv <= report.q[0] * 2.0);
    }
    CHECK(report.all_pass());
    CHECK(field.value_at({0.0, 0.5}) == doctest::Approx(1.0));  // normalized
}

TEST_CASE("lipschitz growth bounded") {
    ProblemSpec spec;
    spec.scenario = Scenario::Lipschitz;
    spec.domain = DomainSpec::graph_exterior_minus(Modulus::power(0.5, 1.0), 1.0);
    spec.h = 1.0 / 32.0;
    const auto [field, report] = run_scenario(spec);
    REQUIRE(report.Q.size() >= 3);
    for (std::size_t i = 0; i < report.Q.size(); ++i) CHECK(report.Q[i] <= 4.0 * report.Q[0]);
    CHECK(report.all_pass());
}

TEST_CASE("symmetric data give symmetric growth") {
    // half ball, symmetric boundary data: q along (l1, l2) equals q along (-l1, l2)
    ProblemSpec spec;
    spec.scenario = Scenario::Hopf;
    spec.domain = DomainSpec::half_ball(1.0);
    spec.h = 1.0 / 32.0;
    spec.probe_l = {0.6, 0.8};
    const auto [f1, r1] = run_scenario(spec);
    spec.probe_l = {-0.6, 0.8};
    const auto [f2, r2] = run_scenario(spec);
    REQUIRE(r1.q.size() == r2.q.size());
    for (std::size_t i = 0; i < r1.q.size(); ++i)
        CHECK(r1.q[i] == doctest::Approx(r2.q[i]).epsilon(1e-9));
}

TEST_CASE("flat checks at coarse resolution") {
    const EllipticityPair ell(1.0, 2.0);
    const auto r = flat_c1alpha_check(1.0 / 64.0, OperatorTag::PucciPlus, ell);
    CHECK(r.alpha > 0.0);
    CHECK(r.a > 0.0);
    CHECK(r.C > 0.0);
    const double c = flat_hopf_check(1.0 / 64.0, ell);
    CHECK(c > 0.0);
    const auto laplace = flat_c1alpha_check(1.0 / 64.0, OperatorTag::Laplace,
                                            EllipticityPair(1.0, 1.0));
    CHECK(laplace.alpha >= 0.5 - 0.1);
}

TEST_CASE("linear boundary data is recovered exactly") {
    ProblemSpec spec;
    spec.scenario = Scenario::FlatC1Alpha;
    spec.domain = DomainSpec::half_ball(1.0);
    // solve directly: g = 0.7 x2 solves both extremal equations
    auto mask = std::make_shared<GridMask>(
        rasterize(spec.domain, 1.0 / 32.0, StencilSet::make(3)));
    auto lin = [](Point x) { return 0.7 * x.x2; };
    BoundaryData g{lin, lin};
    const SolutionField u = solve_dirichlet(mask, OperatorTag::PucciPlus, spec.ell,
                                            [](Point) { return 0.0; }, g);
    double err = 0.0;
    for (std::size_t ci = 0; ci < mask->n_interior(); ++ci) {
        const Point x = mask->node_point(mask->interior_nodes[ci]);
        err = std::max(err, std::abs(u.values[ci] - 0.7 * x.x2));
    }
    CHECK(err <= 1e-7);
}

TEST_CASE("notch floor shrinks with the offset") {
    const EllipticityPair ell(1.0, 2.0);
    const auto table = notch_hopf_check({0.0, 0.3}, 1.0 / 32.0, ell);
    REQUIRE(table.size() == 2);
    CHECK(table.at(0.0) > 0.0);
    CHECK(table.at(0.3) > 0.0);
    CHECK(table.at(0.3) <= table.at(0.0) + 1e-12);
}
