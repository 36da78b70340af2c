#include "puccilab/certify.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace puccilab {

namespace {

// Kahan compensated accumulator.
struct Accum {
    double sum = 0.0;
    double c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

double IterationParams::smallness_slack() const {
    return (1.0 - std::pow(eta, alpha0)) * (1.0 - eta) - 0.5;
}

CertificationReport ak_sequence(const Modulus& omega, const IterationParams& p) {
    if (!(p.c0 > 0.0 && p.c0 <= 0.25))
        throw std::invalid_argument("ak_sequence: c0 must be in (0, 1/4]");
    if (!(p.eta > 0.0 && p.eta < 1.0 && p.alpha0 > 0.0 && p.alpha0 < 1.0 && p.K >= 1))
        throw std::invalid_argument("ak_sequence: bad iteration parameters");

    CertificationReport rep;
    rep.conditions = check_conditions(p);
    {
        // Rescaling preconditions omega(1) <= c0 and int_0^1 omega/r <= c0.
        const double w1 = omega.eval(1.0);
        rep.conditions["omega_1_small"] = {w1 <= p.c0, p.c0 - w1};
        try {
            const DiniVerdict v = dini_integral(omega, 1.0);
            const double I = v.is_dini ? *v.integral_value : 1e300;
            rep.conditions["dini_integral_small"] = {v.is_dini && I <= p.c0, p.c0 - I};
        } catch (const InconclusiveError&) {
            rep.conditions["dini_integral_small"] = {false, -1e300};
        }
    }

    const double decay = std::pow(p.eta, p.alpha0);
    rep.A.reserve(p.K + 1);
    rep.A.push_back(p.c0);
    Accum sum;
    sum.add(p.c0);
    for (int k = 1; k <= p.K; ++k) {
        const double Ak = std::max(omega.eval(std::pow(p.eta, k)), decay * rep.A.back());
        rep.A.push_back(Ak);
        sum.add(Ak);
    }
    rep.partial_sum = sum.sum;
    rep.tail_bound = p.c0 * std::pow(p.eta, p.alpha0 * p.K) / (1.0 - decay);
    rep.bound_3c0_ok = rep.partial_sum <= 3.0 * p.c0;
    rep.conditions["sum_le_3c0"] = {rep.bound_3c0_ok, 3.0 * p.c0 - rep.partial_sum};
    return rep;
}

std::vector<double> growth_product(const Modulus& omega, double c0, double eta, int K, int sign,
                                   double a0) {
    if (!(eta > 0.0 && eta < 1.0 && K >= 0))
        throw std::invalid_argument("growth_product: bad parameters");
    if (sign < 0 && !(c0 * omega.eval(eta) < 1.0))
        throw std::invalid_argument("growth_product: need c0 * omega(eta) < 1 for the - sign");
    std::vector<double> a;
    a.reserve(K + 1);
    a.push_back(a0);
    for (int i = 1; i <= K; ++i) {
        const double factor = 1.0 + (sign >= 0 ? 1.0 : -1.0) * c0 * omega.eval(std::pow(eta, i));
        a.push_back(a.back() * factor);
    }
    return a;
}

std::map<std::string, ConditionStatus> check_conditions(
    const IterationParams& p, const std::map<std::string, double>& constants) {
    std::map<std::string, ConditionStatus> out;
    const double slack = p.smallness_slack();
    out["e-w"] = {slack >= 0.0, slack};
    if (auto it = constants.find("C_hat"); it != constants.end()) {
        const double s = it->second * p.c0 - 1.0;
        out["e.21"] = {s >= 0.0, s};
    }
    if (auto cbar = constants.find("C_bar"); cbar != constants.end()) {
        if (auto at = constants.find("a_tilde"); at != constants.end()) {
            const double s = at->second / 2.0 - 3.0 * p.c0 * cbar->second;
            out["3c0Cbar_le_atilde_half"] = {s >= 0.0, s};
        }
    }
    return out;
}

std::string CertificationReport::to_json() const {
    nlohmann::json j;
    j["A"] = A;
    j["partial_sum"] = partial_sum;
    j["tail_bound"] = tail_bound;
    j["bound_3c0_ok"] = bound_3c0_ok;
    if (!a.empty()) j["a"] = a;
    if (!omega_tilde.empty()) j["omega_tilde"] = omega_tilde;
    nlohmann::json conds;
    for (const auto& [name, st] : conditions) conds[name] = {{"ok", st.ok}, {"slack", st.slack}};
    j["conditions"] = conds;
    return j.dump(2);
}

void CertificationReport::write_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("CertificationReport::write_csv: cannot open " + path);
    std::fprintf(f, "k,A_k,a_k_plus,a_k_minus\n");
    const std::size_t n = std::max(A.size(), a.size());
    for (std::size_t k = 0; k < n; ++k) {
        std::fprintf(f, "%zu,", k);
        if (k < A.size()) std::fprintf(f, "%.17g", A[k]);
        std::fprintf(f, ",");
        if (k < a.size()) std::fprintf(f, "%.17g", a[k]);
        std::fprintf(f, ",");
        if (k < omega_tilde.size()) std::fprintf(f, "%.17g", omega_tilde[k]);
        std::fprintf(f, "\n");
    }
    std::fclose(f);
}

}  // namespace puccilab
