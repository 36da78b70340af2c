#include "puccilab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>

namespace puccilab {

DomainSpec DomainSpec::half_ball(double R) {
    DomainSpec d;
    d.kind_ = Kind::HalfBall;
    d.R_ = R;
    return d;
}

DomainSpec DomainSpec::graph_exterior_minus(Modulus omega, double R) {
    DomainSpec d;
    d.kind_ = Kind::GraphExteriorMinus;
    d.omega_ = std::move(omega);
    d.R_ = R;
    return d;
}

DomainSpec DomainSpec::graph_interior_plus(Modulus omega, double R) {
    DomainSpec d;
    d.kind_ = Kind::GraphInteriorPlus;
    d.omega_ = std::move(omega);
    d.R_ = R;
    return d;
}

DomainSpec DomainSpec::notch(double a, double R) {
    if (!(a >= 0.0 && a < 0.5)) throw std::invalid_argument("DomainSpec::notch: a in [0, 1/2)");
    DomainSpec d;
    d.kind_ = Kind::Notch;
    d.a_ = a;
    d.R_ = R;
    return d;
}

DomainSpec DomainSpec::wedge(double slope, double R) {
    if (slope < 0.0) throw std::invalid_argument("DomainSpec::wedge: slope must be >= 0");
    DomainSpec d;
    d.kind_ = Kind::Wedge;
    d.k_ = slope;
    d.R_ = R;
    return d;
}

bool DomainSpec::inside(Point x) const {
    if (x.x1 * x.x1 + x.x2 * x.x2 >= R_ * R_) return false;
    const double ax1 = std::fabs(x.x1);
    switch (kind_) {
        case Kind::HalfBall:
            return x.x2 > 0.0;
        case Kind::GraphExteriorMinus:
            return x.x2 > -ax1 * omega_.eval(std::min(ax1, omega_.domain_radius()));
        case Kind::GraphInteriorPlus:
            return x.x2 > ax1 * omega_.eval(std::min(ax1, omega_.domain_radius()));
        case Kind::Notch:
            return x.x2 > 0.0 && (ax1 < 0.25 * R_ || x.x2 > a_);
        case Kind::Wedge:
            return x.x2 > k_ * ax1;
    }
    return false;
}

bool DomainSpec::wall_violated(Point x) const {
    const double ax1 = std::fabs(x.x1);
    switch (kind_) {
        case Kind::HalfBall:
            return x.x2 <= 0.0;
        case Kind::GraphExteriorMinus:
            return x.x2 <= -ax1 * omega_.eval(std::min(ax1, omega_.domain_radius()));
        case Kind::GraphInteriorPlus:
            return x.x2 <= ax1 * omega_.eval(std::min(ax1, omega_.domain_radius()));
        case Kind::Notch:
            return !(x.x2 > 0.0 && (ax1 < 0.25 * R_ || x.x2 > a_));
        case Kind::Wedge:
            return x.x2 <= k_ * ax1;
    }
    return false;
}

Modulus DomainSpec::modulus_of_domain() const {
    switch (kind_) {
        case Kind::GraphExteriorMinus:
        case Kind::GraphInteriorPlus:
            return omega_;
        case Kind::Wedge:
            return Modulus::constant(k_);
        default:
            throw std::domain_error("modulus_of_domain: not applicable to " + kind_name());
    }
}

std::string DomainSpec::kind_name() const {
    switch (kind_) {
        case Kind::HalfBall: return "half_ball";
        case Kind::GraphExteriorMinus: return "graph_exterior_minus";
        case Kind::GraphInteriorPlus: return "graph_interior_plus";
        case Kind::Notch: return "notch";
        case Kind::Wedge: return "wedge";
    }
    return "?";
}

std::string role_name(NodeRole r) {
    switch (r) {
        case NodeRole::Interior: return "interior";
        case NodeRole::DirichletOuter: return "dirichlet_outer";
        case NodeRole::DirichletWall: return "dirichlet_wall";
        case NodeRole::Exterior: return "exterior";
    }
    return "?";
}

namespace {

constexpr int kBisectIterations = 60;
constexpr double kSnapFraction = 1e-3;

struct RayHit {
    double t;
    BoundaryPiece piece;
    Point point;
};

// First exit of the solid region along x + t*(dx, dy), t in (0, t_nom], or
// no value when the whole arm is solid. `solid` must hold at t = 0.
template <typename Solid>
std::optional<RayHit> first_exit(const DomainSpec& spec, Point x, double dx, double dy,
                                 double t_nom, int samples, const Solid& solid) {
    double t_lo = 0.0;
    double t_hi = -1.0;
    for (int m = 1; m <= samples; ++m) {
        const double t = t_nom * m / samples;
        if (!solid({x.x1 + t * dx, x.x2 + t * dy})) {
            t_hi = t;
            break;
        }
        t_lo = t;
    }
    if (t_hi < 0.0) return std::nullopt;
    for (int it = 0; it < kBisectIterations; ++it) {
        const double t = 0.5 * (t_lo + t_hi);
        if (solid({x.x1 + t * dx, x.x2 + t * dy}))
            t_lo = t;
        else
            t_hi = t;
    }
    const Point outside{x.x1 + t_hi * dx, x.x2 + t_hi * dy};
    const Point hit{x.x1 + t_lo * dx, x.x2 + t_lo * dy};
    const BoundaryPiece piece =
        spec.wall_violated(outside) ? BoundaryPiece::Wall : BoundaryPiece::OuterSphere;
    return RayHit{t_lo, piece, hit};
}

}  // namespace

GridMask rasterize(const DomainSpec& spec, double h, const StencilSet& stencil) {
    if (!(h > 0.0) || h > spec.radius() / 16.0)
        throw std::invalid_argument("rasterize: need 0 < h <= R/16");
    GridMask mask;
    mask.spec = spec;
    mask.stencil = stencil;
    mask.h = h;
    mask.N = int(std::ceil(spec.radius() / h)) + stencil.width + 1;

    const int side = mask.side();
    mask.roles.assign(std::size_t(side) * side, NodeRole::Exterior);
    mask.interior_id.assign(std::size_t(side) * side, -1);

    std::vector<char> solid(std::size_t(side) * side, 0);
    std::vector<Point> snap_hit(std::size_t(side) * side);
    for (int i = -mask.N; i <= mask.N; ++i)
        for (int j = -mask.N; j <= mask.N; ++j) {
            const int node = mask.node_index(i, j);
            solid[node] = spec.inside({i * h, j * h}) ? 1 : 0;
        }

    const int n_dirs = int(stencil.directions.size());

    // Arm construction with snap-and-repeat: nodes whose shortest cut arm is
    // below the snap threshold become Dirichlet wall nodes and the pass runs
    // again without them.
    for (int pass = 0;; ++pass) {
        if (pass > 8) throw std::runtime_error("rasterize: snapping did not stabilize");
        mask.interior_nodes.clear();
        std::fill(mask.interior_id.begin(), mask.interior_id.end(), -1);
        for (int i = -mask.N; i <= mask.N; ++i)
            for (int j = -mask.N; j <= mask.N; ++j) {
                const int node = mask.node_index(i, j);
                if (!solid[node]) continue;
                mask.interior_id[node] = std::int32_t(mask.interior_nodes.size());
                mask.interior_nodes.push_back(node);
            }
        mask.arms.assign(mask.n_interior() * std::size_t(n_dirs) * 2, ArmEnd{});

        bool snapped_any = false;
        for (std::size_t ci = 0; ci < mask.n_interior(); ++ci) {
            const int node = mask.interior_nodes[ci];
            const Point x = mask.node_point(node);
            const int i = node / side - mask.N;
            const int j = node % side - mask.N;
            double shortest = 1e300;
            Point shortest_hit{};
            for (int d = 0; d < n_dirs; ++d) {
                const auto& dir = stencil.directions[d];
                const double t_nom = dir.lattice_length * h;
                const int samples = 2 * int(std::ceil(dir.lattice_length)) + 1;
                for (int end = 0; end < 2; ++end) {
                    const double sgn = end == 0 ? 1.0 : -1.0;
                    const int ni = i + (end == 0 ? dir.p : -dir.p);
                    const int nj = j + (end == 0 ? dir.q : -dir.q);
                    const int nnode = mask.node_index(ni, nj);
                    auto ray_solid = [&](Point p) { return spec.inside(p); };
                    ArmEnd& arm = mask.arms[(ci * n_dirs + d) * 2 + end];
                    if (!solid[nnode] && spec.inside({ni * h, nj * h})) {
                        // Snapped in an earlier pass: the arm ends on the wall
                        // value recorded for that node.
                        arm = ArmEnd{t_nom, -1, BoundaryPiece::Wall, snap_hit[nnode]};
                        continue;
                    }
                    const std::optional<RayHit> hit =
                        first_exit(spec, x, sgn * dir.ux, sgn * dir.uy, t_nom, samples, ray_solid);
                    if (!hit) {
                        arm = ArmEnd{t_nom, mask.interior_id[nnode], BoundaryPiece::None,
                                     {ni * h, nj * h}};
                    } else {
                        arm = ArmEnd{hit->t, -1, hit->piece, hit->point};
                        if (hit->t < shortest) {
                            shortest = hit->t;
                            shortest_hit = hit->point;
                        }
                    }
                }
                const ArmEnd& plus = mask.arms[(ci * n_dirs + d) * 2 + 0];
                const ArmEnd& minus = mask.arms[(ci * n_dirs + d) * 2 + 1];
                if (plus.t + minus.t < h / 4.0)
                    throw ResolutionError("rasterize: domain too thin at node (" +
                                          std::to_string(i) + ", " + std::to_string(j) + ")");
            }
            if (shortest < kSnapFraction * h) {
                solid[node] = 0;
                snap_hit[node] = shortest_hit;
                mask.roles[node] = NodeRole::DirichletWall;
                snapped_any = true;
            }
        }
        if (!snapped_any) break;
    }

    // Role annotation: interior from the final solid set, boundary-adjacent
    // exterior nodes labelled by the piece their arms hit.
    for (int node = 0; node < side * side; ++node)
        if (solid[node]) mask.roles[node] = NodeRole::Interior;
    for (std::size_t ci = 0; ci < mask.n_interior(); ++ci) {
        const int node = mask.interior_nodes[ci];
        const int i = node / side - mask.N;
        const int j = node % side - mask.N;
        for (int d = 0; d < n_dirs; ++d) {
            const auto& dir = mask.stencil.directions[d];
            for (int end = 0; end < 2; ++end) {
                const ArmEnd& arm = mask.arms[(ci * n_dirs + d) * 2 + end];
                if (arm.node >= 0) continue;
                const int ni = i + (end == 0 ? dir.p : -dir.p);
                const int nj = j + (end == 0 ? dir.q : -dir.q);
                NodeRole& role = mask.roles[mask.node_index(ni, nj)];
                if (role == NodeRole::Interior || role == NodeRole::DirichletWall) continue;
                role = arm.piece == BoundaryPiece::Wall ? NodeRole::DirichletWall
                                                        : NodeRole::DirichletOuter;
            }
        }
    }
    return mask;
}

void GridMask::write_csv(const std::string& path, bool dump_arms) const {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("GridMask::write_csv: cannot open " + path);
    std::fprintf(f, "i,j,x1,x2,role\n");
    for (int i = -N; i <= N; ++i)
        for (int j = -N; j <= N; ++j) {
            const int node = node_index(i, j);
            if (roles[node] == NodeRole::Exterior) continue;
            std::fprintf(f, "%d,%d,%.17g,%.17g,%s\n", i, j, i * h, j * h,
                         role_name(roles[node]).c_str());
        }
    if (dump_arms) {
        std::fprintf(f, "# arms: interior,dir,end,t,node,piece,hit_x1,hit_x2\n");
        const int n_dirs = int(stencil.directions.size());
        for (std::size_t ci = 0; ci < n_interior(); ++ci)
            for (int d = 0; d < n_dirs; ++d)
                for (int end = 0; end < 2; ++end) {
                    const ArmEnd& a = arms[(ci * n_dirs + d) * 2 + end];
                    std::fprintf(f, "# %zu,%d,%d,%.17g,%d,%d,%.17g,%.17g\n", ci, d, end, a.t,
                                 a.node, int(a.piece), a.hit.x1, a.hit.x2);
                }
    }
    std::fclose(f);
}

}  // namespace puccilab
