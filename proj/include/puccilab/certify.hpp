#pragma once

#include <map>
#include <string>
#include <vector>

#include "puccilab/modulus.hpp"

namespace puccilab {

struct IterationParams {
    double c0 = 0.25;    // in (0, 1/4]
    double eta = 1.0 / 16.0;
    double alpha0 = 0.5;
    int K = 200;

    // (1 - eta^alpha0)(1 - eta) >= 1/2
    double smallness_slack() const;
    bool smallness_ok() const { return smallness_slack() >= 0.0; }
};

struct ConditionStatus {
    bool ok = false;
    double slack = 0.0;
};

struct CertificationReport {
    std::vector<double> A;            // A_0 .. A_K
    double partial_sum = 0.0;         // compensated
    double tail_bound = 0.0;          // c0 eta^{alpha0 K} / (1 - eta^{alpha0})
    bool bound_3c0_ok = false;
    std::vector<double> a;            // growth/decay product a_0 .. a_K
    std::vector<double> omega_tilde;  // alias of the product sequence
    std::map<std::string, ConditionStatus> conditions;

    std::string to_json() const;
    void write_csv(const std::string& path) const;
};

// A_0 = c0, A_k = max(omega(eta^k), eta^{alpha0} A_{k-1}); reports the
// partial sum against the 3 c0 bound. Precondition violations are reported
// in the conditions map, not thrown.
CertificationReport ak_sequence(const Modulus& omega, const IterationParams& p);

// a_k = a0 prod_{i=1..k} (1 +/- c0 omega(eta^i)).
std::vector<double> growth_product(const Modulus& omega, double c0, double eta, int K, int sign,
                                   double a0 = 1.0);

// Named smallness inequalities with computed slack. Recognized constants:
// "C_hat" (C_hat c0 >= 1), "C_bar" and "a_tilde" (3 c0 C_bar <= a_tilde/2).
std::map<std::string, ConditionStatus> check_conditions(
    const IterationParams& p, const std::map<std::string, double>& constants = {});

}  // namespace puccilab
