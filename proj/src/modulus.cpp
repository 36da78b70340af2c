#include "puccilab/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <json.hpp>

namespace puccilab {

namespace {

constexpr double kDivergenceThreshold = 1e3;
constexpr int kMinDyadicRadiusLog2 = 40;  // stop refining panels below 2^-40

}  // namespace

Modulus Modulus::zero() { return Modulus{}; }

Modulus Modulus::constant(double k) {
    if (k < 0.0) throw std::invalid_argument("Modulus::constant: k must be >= 0");
    Modulus m;
    m.family_ = Family::Constant;
    m.k_ = k;
    return m;
}

Modulus Modulus::power(double alpha, double c) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("Modulus::power: alpha must be in (0,1]");
    if (c < 0.0) throw std::invalid_argument("Modulus::power: c must be >= 0");
    Modulus m;
    m.family_ = Family::Power;
    m.alpha_ = alpha;
    m.c_ = c;
    return m;
}

Modulus Modulus::log_inverse(double p, double c) {
    if (!(p > 0.0)) throw std::invalid_argument("Modulus::log_inverse: p must be > 0");
    if (c < 0.0) throw std::invalid_argument("Modulus::log_inverse: c must be >= 0");
    Modulus m;
    m.family_ = Family::LogInverse;
    m.p_ = p;
    m.c_ = c;
    return m;
}

Modulus Modulus::tabulated(std::vector<Knot> knots) {
    if (knots.empty()) throw std::invalid_argument("Modulus::tabulated: no knots");
    if (!std::is_sorted(knots.begin(), knots.end(),
                        [](const Knot& a, const Knot& b) { return a.r < b.r; }))
        throw std::invalid_argument("Modulus::tabulated: knots must be sorted by r");
    if (knots.front().r < 0.0 || knots.back().r > 1.0)
        throw std::invalid_argument("Modulus::tabulated: knots must lie in [0,1]");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (knots[i].omega < 0.0)
            throw std::invalid_argument("Modulus::tabulated: omega must be >= 0");
        if (i > 0 && knots[i].omega < knots[i - 1].omega)
            throw std::invalid_argument("Modulus::tabulated: omega must be nondecreasing");
    }
    if (knots.front().r > 0.0) knots.insert(knots.begin(), Knot{0.0, 0.0});
    Modulus m;
    m.family_ = Family::Tabulated;
    m.knots_ = std::move(knots);
    return m;
}

double Modulus::eval_base(double r) const {
    switch (family_) {
        case Family::Zero:
            return 0.0;
        case Family::Constant:
            return k_;
        case Family::Power:
            return c_ * std::pow(r, alpha_);
        case Family::LogInverse:
            if (r <= 0.0) return 0.0;
            return c_ / std::pow(std::log(std::exp(1.0) / r), p_);
        case Family::Tabulated: {
            if (r <= knots_.front().r) return knots_.front().omega;
            if (r >= knots_.back().r) return knots_.back().omega;
            auto it = std::lower_bound(knots_.begin(), knots_.end(), r,
                                       [](const Knot& k, double v) { return k.r < v; });
            const Knot& hi = *it;
            const Knot& lo = *(it - 1);
            const double t = (r - lo.r) / (hi.r - lo.r);
            return lo.omega + t * (hi.omega - lo.omega);
        }
    }
    return 0.0;
}

double Modulus::eval(double r) const {
    if (r < 0.0 || r > domain_radius_ * (1.0 + 1e-12))
        throw std::out_of_range("Modulus::eval: r outside [0, domain_radius]");
    return eval_base(radius_scale_ * r);
}

Modulus Modulus::with_radius_scale(double scale) const {
    if (!(scale > 0.0)) throw std::invalid_argument("with_radius_scale: scale must be > 0");
    Modulus m = *this;
    m.radius_scale_ *= scale;
    return m;
}

std::string Modulus::family_name() const {
    switch (family_) {
        case Family::Zero: return "zero";
        case Family::Constant: return "constant";
        case Family::Power: return "power";
        case Family::LogInverse: return "log_inverse";
        case Family::Tabulated: return "tabulated";
    }
    return "?";
}

std::string Modulus::to_json() const {
    nlohmann::json j;
    j["family"] = family_name();
    switch (family_) {
        case Family::Zero: break;
        case Family::Constant: j["k"] = k_; break;
        case Family::Power: j["alpha"] = alpha_; j["c"] = c_; break;
        case Family::LogInverse: j["p"] = p_; j["c"] = c_; break;
        case Family::Tabulated: {
            nlohmann::json arr = nlohmann::json::array();
            for (const Knot& k : knots_) arr.push_back({k.r, k.omega});
            j["knots"] = arr;
            break;
        }
    }
    if (radius_scale_ != 1.0) j["radius_scale"] = radius_scale_;
    return j.dump();
}

Modulus Modulus::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    const std::string fam = j.at("family").get<std::string>();
    Modulus m;
    if (fam == "zero") {
        m = Modulus::zero();
    } else if (fam == "constant") {
        m = Modulus::constant(j.at("k").get<double>());
    } else if (fam == "power") {
        m = Modulus::power(j.at("alpha").get<double>(), j.at("c").get<double>());
    } else if (fam == "log_inverse") {
        m = Modulus::log_inverse(j.at("p").get<double>(), j.at("c").get<double>());
    } else if (fam == "tabulated") {
        std::vector<Knot> knots;
        for (const auto& kv : j.at("knots")) knots.push_back({kv.at(0).get<double>(), kv.at(1).get<double>()});
        m = Modulus::tabulated(std::move(knots));
    } else {
        throw std::invalid_argument("Modulus::from_json: unknown family " + fam);
    }
    if (j.contains("radius_scale")) m = m.with_radius_scale(j.at("radius_scale").get<double>());
    return m;
}

namespace {

// Adaptive Simpson of g on [a,b].
double adaptive_simpson(const std::function<double(double)>& g, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = g(lm);
    const double frm = g(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = left + right - whole;
    if (depth <= 0 || std::fabs(err) <= 15.0 * tol) return left + right + err / 15.0;
    return adaptive_simpson(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& g, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = g(a), fm = g(m), fb = g(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(g, a, b, fa, fm, fb, whole, tol, 40);
}

DiniVerdict quadrature_verdict(const Modulus& omega, double r0, double tol) {
    // Dyadic panels [r0 2^-(j+1), r0 2^-j]; omega(r)/r integrable iff the
    // panel sums converge.
    const auto integrand = [&omega](double r) { return omega.eval(r) / r; };
    double total = 0.0;
    double lo = r0;
    double last_panel = 0.0;
    for (int j = 0; j < kMinDyadicRadiusLog2 + 20; ++j) {
        const double hi = lo;
        lo = 0.5 * hi;
        last_panel = integrate(integrand, lo, hi, tol / 64.0);
        total += last_panel;
        if (total > kDivergenceThreshold)
            return DiniVerdict{false, std::nullopt, total, DiniVerdict::Method::Quadrature};
        if (lo < std::ldexp(1.0, -kMinDyadicRadiusLog2) || (last_panel < tol * 1e-3 && j > 4)) break;
    }
    // Below lo the tabulated modulus is linear to zero, so the tail integral
    // is at most omega(lo).
    const double tail = omega.eval(lo);
    if (tail > 100.0 * std::max(tol, 1e-12) && tail > 1e-3 * std::fabs(total))
        throw InconclusiveError("dini_integral: tabulated knots do not reach a resolvable radius");
    return DiniVerdict{true, total + tail, std::nullopt, DiniVerdict::Method::Quadrature};
}

}  // namespace

DiniVerdict dini_integral(const Modulus& omega, double r0, double tol) {
    if (!(r0 > 0.0 && r0 <= omega.domain_radius()))
        throw std::out_of_range("dini_integral: r0 outside (0, domain_radius]");
    if (!(tol > 0.0)) throw std::invalid_argument("dini_integral: tol must be > 0");
    // The radius pre-scale only shifts the upper limit: int_0^{r0} w(s r)/r dr
    // equals int_0^{s r0} w(t)/t dt.
    const double R = omega.radius_scale() * r0;
    switch (omega.family()) {
        case Modulus::Family::Zero:
            return DiniVerdict{true, 0.0, std::nullopt, DiniVerdict::Method::Analytic};
        case Modulus::Family::Constant: {
            if (omega.param_k() == 0.0)
                return DiniVerdict{true, 0.0, std::nullopt, DiniVerdict::Method::Analytic};
            return DiniVerdict{false, std::nullopt, kDivergenceThreshold,
                               DiniVerdict::Method::Analytic};
        }
        case Modulus::Family::Power: {
            const double v = omega.param_c() * std::pow(R, omega.param_alpha()) / omega.param_alpha();
            return DiniVerdict{true, v, std::nullopt, DiniVerdict::Method::Analytic};
        }
        case Modulus::Family::LogInverse: {
            const double p = omega.param_p();
            const double c = omega.param_c();
            if (c == 0.0)
                return DiniVerdict{true, 0.0, std::nullopt, DiniVerdict::Method::Analytic};
            if (p <= 1.0)
                return DiniVerdict{false, std::nullopt, kDivergenceThreshold,
                                   DiniVerdict::Method::Analytic};
            const double v = c / ((p - 1.0) * std::pow(std::log(std::exp(1.0) / R), p - 1.0));
            return DiniVerdict{true, v, std::nullopt, DiniVerdict::Method::Analytic};
        }
        case Modulus::Family::Tabulated:
            return quadrature_verdict(omega, r0, tol);
    }
    throw std::logic_error("dini_integral: unreachable");
}

std::pair<double, Modulus> rescale_to_small(const Modulus& omega, double c0) {
    if (!(c0 > 0.0 && c0 <= 0.25))
        throw std::invalid_argument("rescale_to_small: c0 must be in (0, 1/4]");
    const DiniVerdict v = dini_integral(omega, omega.domain_radius());
    if (!v.is_dini) throw std::domain_error("rescale_to_small: modulus is not Dini");
    for (int m = 0; m <= 60; ++m) {
        const double r1 = std::ldexp(1.0, -m);
        if (omega.eval(r1) > c0) continue;
        const DiniVerdict vi = dini_integral(omega, r1);
        if (vi.integral_value && *vi.integral_value <= c0)
            return {r1, omega.with_radius_scale(r1)};
    }
    throw std::runtime_error("rescale_to_small: no admissible dyadic r1 above 2^-60");
}

}  // namespace puccilab
