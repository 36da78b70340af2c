#include "puccilab/pucci.hpp"

#include <algorithm>
#include <cmath>

namespace puccilab {

double Sym2::norm() const {
    return std::sqrt(a11 * a11 + 2.0 * a12 * a12 + a22 * a22);
}

std::pair<double, double> eigenvalues(const Sym2& m) {
    const double mean = 0.5 * (m.a11 + m.a22);
    const double half_diff = 0.5 * (m.a11 - m.a22);
    const double rad = std::hypot(half_diff, m.a12);
    return {mean - rad, mean + rad};
}

namespace {

inline double pos(double s) { return s > 0.0 ? s : 0.0; }
inline double neg(double s) { return s < 0.0 ? -s : 0.0; }

}  // namespace

double pucci_plus(const Sym2& m, const EllipticityPair& ell) {
    const auto [e1, e2] = eigenvalues(m);
    return ell.Lambda * (pos(e1) + pos(e2)) - ell.lambda * (neg(e1) + neg(e2));
}

double pucci_minus(const Sym2& m, const EllipticityPair& ell) {
    const auto [e1, e2] = eigenvalues(m);
    return ell.lambda * (pos(e1) + pos(e2)) - ell.Lambda * (neg(e1) + neg(e2));
}

std::pair<double, double> pucci_bruteforce(const Sym2& m, const EllipticityPair& ell,
                                           int n_samples) {
    if (n_samples < 1000)
        throw std::invalid_argument("pucci_bruteforce: need n_samples >= 1000");
    // For fixed rotation the optimum in (a, b) sits at an endpoint, so spend
    // most samples on the angle.
    const int n_ab = 5;
    const int n_theta = std::max(8, n_samples / (n_ab * n_ab));
    double sup = -1e300, inf = 1e300;
    for (int it = 0; it < n_theta; ++it) {
        const double theta = (M_PI / 2.0) * it / n_theta;
        const double ct = std::cos(theta), st = std::sin(theta);
        // R^T diag(a,b) R applied to m: trace(A m) = a*q1 + b*q2 with
        // q1 = e1^T m e1, q2 = e2^T m e2 for the rotated frame (e1, e2).
        const double q1 = ct * ct * m.a11 + 2.0 * ct * st * m.a12 + st * st * m.a22;
        const double q2 = st * st * m.a11 - 2.0 * ct * st * m.a12 + ct * ct * m.a22;
        for (int ia = 0; ia < n_ab; ++ia) {
            const double a = ell.lambda + (ell.Lambda - ell.lambda) * ia / (n_ab - 1);
            for (int ib = 0; ib < n_ab; ++ib) {
                const double b = ell.lambda + (ell.Lambda - ell.lambda) * ib / (n_ab - 1);
                const double t = a * q1 + b * q2;
                sup = std::max(sup, t);
                inf = std::min(inf, t);
            }
        }
    }
    return {sup, inf};
}

}  // namespace puccilab
