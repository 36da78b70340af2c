#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace puccilab {

// Modulus of continuity on [0, domain_radius]. Nonnegative, nondecreasing,
// and (except for the constant family) vanishing at 0.
class Modulus {
public:
    enum class Family : std::uint8_t { Zero, Constant, Power, LogInverse, Tabulated };

    struct Knot {
        double r;
        double omega;
    };

    static Modulus zero();
    static Modulus constant(double k);
    static Modulus power(double alpha, double c);
    // omega(r) = c / ln(e/r)^p
    static Modulus log_inverse(double p, double c);
    // Monotone piecewise-linear through sorted knots on [0, 1]; an implicit
    // knot (0, 0) is prepended when the first knot has r > 0.
    static Modulus tabulated(std::vector<Knot> knots);

    Family family() const { return family_; }
    double domain_radius() const { return domain_radius_; }
    double radius_scale() const { return radius_scale_; }

    double param_alpha() const { return alpha_; }
    double param_c() const { return c_; }
    double param_p() const { return p_; }
    double param_k() const { return k_; }
    const std::vector<Knot>& knots() const { return knots_; }

    // omega(r); throws std::out_of_range for r outside [0, domain_radius].
    double eval(double r) const;

    // Composes the radius pre-scale: result(s) = this(scale * s).
    Modulus with_radius_scale(double scale) const;

    std::string family_name() const;
    std::string to_json() const;
    static Modulus from_json(const std::string& text);

private:
    Modulus() = default;

    double eval_base(double r) const;  // before radius_scale_

    Family family_ = Family::Zero;
    double domain_radius_ = 1.0;
    double radius_scale_ = 1.0;
    double alpha_ = 0.0;
    double c_ = 0.0;
    double p_ = 0.0;
    double k_ = 0.0;
    std::vector<Knot> knots_;
};

struct DiniVerdict {
    bool is_dini = false;
    // Finite integral value when convergent.
    std::optional<double> integral_value;
    // Partial-sum lower bound exceeding the divergence threshold otherwise.
    std::optional<double> lower_bound_witness;
    enum class Method : std::uint8_t { Analytic, Quadrature } method = Method::Analytic;
};

class InconclusiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Classifies int_0^{r0} omega(r)/r dr. Analytic families are classified by
// closed form; tabulated moduli by adaptive quadrature plus a tail bound.
DiniVerdict dini_integral(const Modulus& omega, double r0, double tol = 1e-9);

// Largest dyadic r1 = 2^-m with omega(r1) <= c0 and int_0^{r1} omega/r <= c0,
// together with omega rescaled to [0,1] via s -> omega(r1 * s).
std::pair<double, Modulus> rescale_to_small(const Modulus& omega, double c0);

}  // namespace puccilab
