#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "puccilab/modulus.hpp"
#include "puccilab/stencil.hpp"

namespace puccilab {

struct Point {
    double x1 = 0.0;
    double x2 = 0.0;
};

// Planar domains with the boundary point of interest at the origin and
// e_n = (0, 1). The ball B_R is part of every predicate.
class DomainSpec {
public:
    enum class Kind : std::uint8_t { HalfBall, GraphExteriorMinus, GraphInteriorPlus, Notch, Wedge };

    static DomainSpec half_ball(double R = 1.0);
    // inside <=> x in B_R and x2 > -|x1| w(|x1|)
    static DomainSpec graph_exterior_minus(Modulus omega, double R = 1.0);
    // inside <=> x in B_R and x2 > |x1| w(|x1|)
    static DomainSpec graph_interior_plus(Modulus omega, double R = 1.0);
    // inside <=> x in B_R, x2 > 0 and (|x1| < R/4 or x2 > a)
    static DomainSpec notch(double a, double R = 1.0);
    // inside <=> x in B_R and x2 > k |x1|
    static DomainSpec wedge(double slope, double R = 1.0);

    Kind kind() const { return kind_; }
    double radius() const { return R_; }
    double notch_offset() const { return a_; }
    double wedge_slope() const { return k_; }
    const Modulus& omega() const { return omega_; }

    bool inside(Point x) const;
    // Distance along the boundary classification: true when x (known to be
    // outside) violates the ball constraint before the wall constraint.
    bool wall_violated(Point x) const;

    // omega_Omega of a graph/wedge domain; throws for half_ball/notch.
    Modulus modulus_of_domain() const;

    std::string kind_name() const;

    DomainSpec() = default;

private:

    Kind kind_ = Kind::HalfBall;
    double R_ = 1.0;
    double a_ = 0.0;   // notch offset
    double k_ = 0.0;   // wedge slope
    Modulus omega_ = Modulus::zero();
};

enum class NodeRole : std::uint8_t { Interior, DirichletOuter, DirichletWall, Exterior };

enum class BoundaryPiece : std::uint8_t { None, Wall, OuterSphere };

// One end of a stencil arm: either a grid node or a boundary hit.
struct ArmEnd {
    double t = 0.0;                           // arm length (absolute)
    std::int32_t node = -1;                   // linear node index, -1 for a boundary hit
    BoundaryPiece piece = BoundaryPiece::None;
    Point hit;                                // boundary hit point when node < 0
};

class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rasterized domain: node roles on a uniform grid over [-Nh, Nh]^2 plus
// per-direction arm data for every interior node.
struct GridMask {
    DomainSpec spec;
    StencilSet stencil;
    double h = 0.0;
    int N = 0;  // grid index range [-N, N]

    std::vector<NodeRole> roles;          // (2N+1)^2, row-major by (i + N) * side + (j + N)
    std::vector<std::int32_t> interior_id;  // node index -> compact interior index, -1 otherwise
    std::vector<std::int32_t> interior_nodes;  // compact interior index -> node index
    // arms[interior * n_dirs * 2 + dir * 2 + {0: +e, 1: -e}]
    std::vector<ArmEnd> arms;

    int side() const { return 2 * N + 1; }
    int node_index(int i, int j) const { return (i + N) * side() + (j + N); }
    Point node_point(int node) const {
        const int i = node / side() - N;
        const int j = node % side() - N;
        return {i * h, j * h};
    }
    std::size_t n_interior() const { return interior_nodes.size(); }

    void write_csv(const std::string& path, bool dump_arms = false) const;
};

GridMask rasterize(const DomainSpec& spec, double h, const StencilSet& stencil);

std::string role_name(NodeRole r);

}  // namespace puccilab
