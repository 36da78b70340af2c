#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "puccilab/geometry.hpp"
#include "puccilab/pucci.hpp"
#include "puccilab/stencil.hpp"

namespace puccilab {

enum class OperatorTag : std::uint8_t { PucciPlus, PucciMinus, Laplace };

std::string operator_name(OperatorTag tag);

// Dirichlet data on the two boundary pieces.
struct BoundaryData {
    std::function<double(Point)> wall;
    std::function<double(Point)> sphere;

    double operator()(BoundaryPiece piece, Point x) const {
        return piece == BoundaryPiece::Wall ? wall(x) : sphere(x);
    }
    static BoundaryData constants(double wall_value, double sphere_value);
};

enum class SolveMethod : std::uint8_t { Auto, Jacobi, Policy };

struct SolveOptions {
    double tol = 1e-8;
    long max_iter = 5'000'000;
    SolveMethod method = SolveMethod::Auto;
    int workers = 4;
    double theta = 0.9;  // Jacobi damping safety factor
};

class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, std::vector<double> tail)
        : std::runtime_error(what), residual_tail(std::move(tail)) {}
    std::vector<double> residual_tail;
};

struct SolutionField {
    std::shared_ptr<const GridMask> mask;
    std::vector<double> values;           // per compact interior index
    std::vector<double> boundary_values;  // per arm slot; meaningful where arm.node < 0
    std::vector<double> f_values;         // source sampled at interior nodes
    OperatorTag op = OperatorTag::Laplace;
    EllipticityPair ell;
    double residual_inf = 0.0;  // row-scaled; see residual_profile for the raw values
    long iterations = 0;
    std::string f_handle;

    double at_interior(std::size_t ci) const { return values[ci]; }
    // Value at a node by grid index; throws if the node is not interior.
    double at_node(int i, int j) const;
    // Bilinear interpolation from interior nodes (nearest interior corner
    // when the cell is cut).
    double value_at(Point x) const;

    void write_csv(const std::string& path) const;
    std::string metadata_json() const;
};

// Unequal-arm three-point second difference along a unit direction; exact for
// quadratics restricted to the ray.
double second_difference(double u_center, double u_plus, double u_minus, double t_plus,
                         double t_minus);

// Frame formulation of the extremal operators at one interior node:
// sign > 0: max over frames of sum_d [Lambda (d2)^+ - lambda (d2)^-],
// sign < 0: min over frames of sum_d [lambda (d2)^+ - Lambda (d2)^-].
// `values` indexed by compact interior id; `boundary` by arm slot.
double discrete_pucci(const GridMask& mask, const std::vector<double>& values,
                      const std::vector<double>& boundary, std::size_t ci,
                      const EllipticityPair& ell, int sign);

SolutionField solve_dirichlet(std::shared_ptr<const GridMask> mask, OperatorTag op,
                              const EllipticityPair& ell,
                              const std::function<double(Point)>& f, const BoundaryData& g,
                              const SolveOptions& opts = {});

// Recomputes F_h[u] - f at every interior node.
struct ResidualProfile {
    std::vector<double> per_node;
    double inf_norm = 0.0;
};
ResidualProfile residual_profile(const SolutionField& field);

}  // namespace puccilab
