#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "puccilab/certify.hpp"
#include "puccilab/geometry.hpp"
#include "puccilab/solver.hpp"

namespace puccilab {

enum class Scenario : std::uint8_t {
    Lipschitz,      // boundary Lipschitz growth on an exterior-side graph domain
    AntiLipschitz,  // super-linear growth when the graph modulus is not Dini
    Hopf,           // linear floor on an interior-side graph domain
    AntiHopf,       // sub-linear decay when the graph modulus is not Dini
    FlatC1Alpha,
    FlatHopf,
    NotchHopf,
};

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

struct ProblemSpec {
    Scenario scenario = Scenario::Hopf;
    DomainSpec domain = DomainSpec::half_ball(1.0);
    EllipticityPair ell{1.0, 2.0};
    Modulus omega_g = Modulus::zero();
    Modulus omega_f = Modulus::zero();
    // Boundary/source descriptors; scenario defaults are used when empty.
    std::function<double(Point)> g_wall;
    std::function<double(Point)> g_sphere;
    std::function<double(Point)> f;
    std::string f_handle = "zero";

    double h = 1.0 / 64.0;
    int W = 3;
    double tol = 1e-8;
    long max_iter = 5'000'000;
    int workers = 4;
    SolveMethod method = SolveMethod::Auto;

    Point probe_l{0.0, 1.0};  // requires l2 > 0
    int K = 6;                // dyadic radii 2^-k, k = 2 .. K+1
    // omega-tilde certification inputs for the anti scenarios
    double certify_c0 = 0.125;

    // Scenario/domain compatibility; throws std::invalid_argument.
    void validate() const;
};

struct GrowthReport {
    std::vector<int> k;
    std::vector<double> radii;
    std::vector<double> Q;              // sup_{Omega cap B_r} |u - u(0)| / r
    std::vector<double> q;              // u(r l) / (r l2)
    std::vector<int> annulus_nodes;     // nodes in B_{r_k} \ B_{r_{k+1}}
    std::vector<double> omega_tilde_predicted;
    double fitted_exponent = 0.0;       // slope of log sup_{B_r} |u| vs log r
    double normalization = 1.0;         // u(e_n/2) before normalizing
    std::map<std::string, bool> verdicts;

    bool all_pass() const;
    void write_csv(const std::string& path) const;
};

std::pair<SolutionField, GrowthReport> run_scenario(const ProblemSpec& spec);

enum class NormKind : std::uint8_t { C01, C1Dini, Cm1Dini };

struct NormCheck {
    double C = 0.0;
    bool pass = false;        // false when the ratio is unbounded
    double l1 = 0.0, l2 = 0.0;  // fitted linear part (C1Dini only)
};

// Pointwise-norm conditions at the origin for grid-sampled data
// (indexed by the mask's compact interior ids).
NormCheck check_pointwise_norms(const GridMask& mask, const std::vector<double>& data,
                                NormKind kind, const Modulus& omega,
                                double value_at_origin = 0.0);

struct FlatC1AlphaResult {
    double a = 0.0;           // fitted slope of u against x2 near 0
    double alpha = 0.0;       // fitted Hoelder exponent of the remainder
    double C = 0.0;           // |a| / sup|u|
    double max_remainder = 0.0;
    bool degenerate_linear = false;  // remainder at solver-noise level
};

// Half-ball flat-boundary check for one operator; g = 0 on the wall,
// 1 on the sphere.
FlatC1AlphaResult flat_c1alpha_check(double h, OperatorTag op, const EllipticityPair& ell,
                                     int W = 3, double tol = 1e-8, int workers = 4);

// Returns c = min over B_{1/8}^+ nodes of u(x)/x2 after u(e_n/2) = 1
// normalization; half-ball, M- = 0, g = 0 on the wall.
double flat_hopf_check(double h, const EllipticityPair& ell, int W = 3, double tol = 1e-8,
                       int workers = 4);

// Notch sweep: per-offset floor constants c(a), g = 1 on the ledge.
std::map<double, double> notch_hopf_check(const std::vector<double>& a_values, double h,
                                          const EllipticityPair& ell, int W = 3,
                                          double tol = 1e-8, int workers = 4);

}  // namespace puccilab
