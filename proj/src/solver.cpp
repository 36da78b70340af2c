#include "puccilab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <thread>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <json.hpp>

namespace puccilab {

std::string operator_name(OperatorTag tag) {
    switch (tag) {
        case OperatorTag::PucciPlus: return "pucci_plus";
        case OperatorTag::PucciMinus: return "pucci_minus";
        case OperatorTag::Laplace: return "laplace";
    }
    return "?";
}

BoundaryData BoundaryData::constants(double wall_value, double sphere_value) {
    return BoundaryData{[wall_value](Point) { return wall_value; },
                        [sphere_value](Point) { return sphere_value; }};
}

double second_difference(double u_center, double u_plus, double u_minus, double t_plus,
                         double t_minus) {
    if (!(t_plus > 0.0 && t_minus > 0.0))
        throw std::invalid_argument("second_difference: arms must be positive");
    return 2.0 / (t_plus + t_minus) *
           ((u_plus - u_center) / t_plus + (u_minus - u_center) / t_minus);
}

namespace {

void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
    workers = std::max(1, workers);
    if (workers == 1 || n < 1024) {
        chunk_fn(0, n);
        return;
    }
    std::vector<std::thread> threads;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (int w = 1; w < workers; ++w) {
        const std::size_t lo = std::min(n, w * chunk);
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo < hi) threads.emplace_back(chunk_fn, lo, hi);
    }
    chunk_fn(0, std::min(n, chunk));
    for (auto& t : threads) t.join();
}

struct NodeEval {
    double value = 0.0;
    int frame = -1;              // -1: fixed axis pair (Laplace)
    int dirs[2] = {-1, -1};
    double coef[2] = {0.0, 0.0};
    double center_bound = 0.0;   // bound on |dF/du(x)|
};

struct ArmAccess {
    const GridMask& mask;
    const std::vector<double>& values;
    const std::vector<double>& boundary;
    int n_dirs;

    double end_value(std::size_t ci, int d, int end) const {
        const std::size_t slot = (ci * n_dirs + d) * 2 + end;
        const ArmEnd& a = mask.arms[slot];
        return a.node >= 0 ? values[a.node] : boundary[slot];
    }
    const ArmEnd& arm(std::size_t ci, int d, int end) const {
        return mask.arms[(ci * n_dirs + d) * 2 + end];
    }
};

NodeEval eval_node(const ArmAccess& acc, std::size_t ci, const EllipticityPair& ell,
                   OperatorTag tag) {
    const GridMask& mask = acc.mask;
    const int n_dirs = acc.n_dirs;
    const double uc = acc.values[ci];

    // Per-direction second differences and central weights.
    double d2[64];
    double cw[64];
    for (int d = 0; d < n_dirs; ++d) {
        const ArmEnd& ap = acc.arm(ci, d, 0);
        const ArmEnd& am = acc.arm(ci, d, 1);
        d2[d] = second_difference(uc, acc.end_value(ci, d, 0), acc.end_value(ci, d, 1), ap.t, am.t);
        cw[d] = 2.0 / (ap.t * am.t);
    }

    NodeEval out;
    if (tag == OperatorTag::Laplace) {
        int dx = -1, dy = -1;
        for (int d = 0; d < n_dirs; ++d) {
            const auto& dir = mask.stencil.directions[d];
            if (dir.p == 1 && dir.q == 0) dx = d;
            if (dir.p == 0 && dir.q == 1) dy = d;
        }
        out.value = ell.lambda * (d2[dx] + d2[dy]);
        out.dirs[0] = dx;
        out.dirs[1] = dy;
        out.coef[0] = out.coef[1] = ell.lambda;
        out.center_bound = ell.lambda * (cw[dx] + cw[dy]);
        return out;
    }

    const bool plus = tag == OperatorTag::PucciPlus;
    double best = plus ? -1e300 : 1e300;
    int best_f = -1;
    double max_cw_sum = 0.0;
    for (std::size_t fi = 0; fi < mask.stencil.frames.size(); ++fi) {
        const auto& fr = mask.stencil.frames[fi];
        double s = 0.0;
        for (int k = 0; k < 2; ++k) {
            const double v = d2[fr[k]];
            // Lambda s^+ - lambda s^- = max(lambda s, Lambda s); min for M-.
            s += plus ? std::max(ell.lambda * v, ell.Lambda * v)
                      : std::min(ell.lambda * v, ell.Lambda * v);
        }
        max_cw_sum = std::max(max_cw_sum, cw[fr[0]] + cw[fr[1]]);
        if (plus ? (s > best) : (s < best)) {
            best = s;
            best_f = int(fi);
        }
    }
    const auto& fr = mask.stencil.frames[best_f];
    out.value = best;
    out.frame = best_f;
    for (int k = 0; k < 2; ++k) {
        const int d = fr[k];
        out.dirs[k] = d;
        out.coef[k] = plus ? (d2[d] >= 0.0 ? ell.Lambda : ell.lambda)
                           : (d2[d] >= 0.0 ? ell.lambda : ell.Lambda);
    }
    out.center_bound = ell.Lambda * max_cw_sum;
    return out;
}

std::vector<double> sample_boundary(const GridMask& mask, const BoundaryData& g) {
    std::vector<double> out(mask.arms.size(), 0.0);
    for (std::size_t s = 0; s < mask.arms.size(); ++s) {
        const ArmEnd& a = mask.arms[s];
        if (a.node < 0) out[s] = g(a.piece, a.hit);
    }
    return out;
}

// Cut-cell rows carry coefficients up to 2/(t+ t-) with arms as short as
// 1e-3 h, so an unscaled residual cannot beat the factorization roundoff
// there. Residuals are measured against the row scale, normalized to 1 at a
// regular node.
double row_scale(const GridMask& mask, const NodeEval& ev, const EllipticityPair& ell) {
    return std::max(1.0, mask.h * mask.h * ev.center_bound / (4.0 * ell.Lambda));
}

double solve_jacobi(const GridMask& mask, OperatorTag op, const EllipticityPair& ell,
                    const std::vector<double>& f, const std::vector<double>& boundary,
                    const SolveOptions& opts, std::vector<double>& u, long& iterations) {
    const std::size_t n = mask.n_interior();
    const int n_dirs = int(mask.stencil.directions.size());
    std::vector<double> unew(n, 0.0);
    std::vector<double> chunk_res(std::max(1, opts.workers), 0.0);

    double best = 1e300;
    long stale = 0;
    std::deque<double> tail;
    double residual = 1e300;
    for (iterations = 0; iterations < opts.max_iter; ++iterations) {
        std::fill(chunk_res.begin(), chunk_res.end(), 0.0);
        const ArmAccess acc{mask, u, boundary, n_dirs};
        const std::size_t chunk = (n + opts.workers - 1) / std::max(1, opts.workers);
        parallel_for(n, opts.workers, [&](std::size_t lo, std::size_t hi) {
            double local = 0.0;
            for (std::size_t ci = lo; ci < hi; ++ci) {
                const NodeEval ev = eval_node(acc, ci, ell, op);
                const double r = ev.value - f[ci];
                local = std::max(local, std::fabs(r) / row_scale(mask, ev, ell));
                unew[ci] = u[ci] + opts.theta / ev.center_bound * r;
            }
            chunk_res[std::min(chunk_res.size() - 1, lo / std::max<std::size_t>(1, chunk))] =
                std::max(chunk_res[std::min(chunk_res.size() - 1, lo / std::max<std::size_t>(1, chunk))],
                         local);
        });
        residual = *std::max_element(chunk_res.begin(), chunk_res.end());
        u.swap(unew);
        tail.push_back(residual);
        if (tail.size() > 10) tail.pop_front();
        if (residual <= opts.tol) {
            ++iterations;
            return residual;
        }
        if (residual < best) {
            best = residual;
            stale = 0;
        } else if (++stale > 10000) {
            throw NonConvergenceError("solve_dirichlet: Jacobi iteration stopped improving",
                                      {tail.begin(), tail.end()});
        }
    }
    throw NonConvergenceError("solve_dirichlet: max_iter reached with residual " +
                                  std::to_string(residual),
                              {tail.begin(), tail.end()});
}

double residual_inf_norm(const GridMask& mask, OperatorTag op, const EllipticityPair& ell,
                         const std::vector<double>& f, const std::vector<double>& boundary,
                         const std::vector<double>& u, int workers,
                         std::vector<double>* per_node = nullptr) {
    const std::size_t n = mask.n_interior();
    const int n_dirs = int(mask.stencil.directions.size());
    const ArmAccess acc{mask, u, boundary, n_dirs};
    std::vector<double> chunk_res(std::max(1, workers), 0.0);
    const std::size_t chunk = (n + workers - 1) / std::max(1, workers);
    parallel_for(n, workers, [&](std::size_t lo, std::size_t hi) {
        double local = 0.0;
        for (std::size_t ci = lo; ci < hi; ++ci) {
            const double r = eval_node(acc, ci, ell, op).value - f[ci];
            if (per_node) (*per_node)[ci] = r;
            local = std::max(local, std::fabs(r));
        }
        const std::size_t slot = std::min(chunk_res.size() - 1, lo / std::max<std::size_t>(1, chunk));
        chunk_res[slot] = std::max(chunk_res[slot], local);
    });
    return *std::max_element(chunk_res.begin(), chunk_res.end());
}

double solve_policy(const GridMask& mask, OperatorTag op, const EllipticityPair& ell,
                    const std::vector<double>& f, const std::vector<double>& boundary,
                    const SolveOptions& opts, std::vector<double>& u, long& iterations) {
    const std::size_t n = mask.n_interior();
    const int n_dirs = int(mask.stencil.directions.size());
    using Policy = std::vector<std::uint32_t>;
    Policy policy(n, 0xffffffffu), prev;
    std::vector<NodeEval> evals(n);

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    double residual = 1e300;
    std::deque<double> tail;
    for (int outer = 0; outer < 200; ++outer) {
        const ArmAccess acc{mask, u, boundary, n_dirs};
        parallel_for(n, opts.workers, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t ci = lo; ci < hi; ++ci) {
                evals[ci] = eval_node(acc, ci, ell, op);
                policy[ci] = std::uint32_t(evals[ci].frame + 1) << 2 |
                             (evals[ci].coef[0] == ell.Lambda ? 1u : 0u) |
                             (evals[ci].coef[1] == ell.Lambda ? 2u : 0u) << 0;
            }
        });
        residual = 0.0;
        for (std::size_t ci = 0; ci < n; ++ci)
            residual = std::max(
                residual, std::fabs(evals[ci].value - f[ci]) / row_scale(mask, evals[ci], ell));
        tail.push_back(residual);
        if (tail.size() > 10) tail.pop_front();
        iterations = outer;
        if (residual <= opts.tol) return residual;

        const bool policy_changed = policy != prev;
        if (!policy_changed)
            throw NonConvergenceError(
                "solve_dirichlet: policy stabilized with residual " + std::to_string(residual),
                {tail.begin(), tail.end()});
        prev = policy;

        // Linear solve for the frozen policy.
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(5 * n);
        Eigen::VectorXd b(n);
        for (std::size_t ci = 0; ci < n; ++ci) {
            const NodeEval& ev = evals[ci];
            double diag = 0.0;
            double rhs = f[ci];
            for (int k = 0; k < 2; ++k) {
                const int d = ev.dirs[k];
                const double a = ev.coef[k];
                const ArmEnd& ap = mask.arms[(ci * n_dirs + d) * 2 + 0];
                const ArmEnd& am = mask.arms[(ci * n_dirs + d) * 2 + 1];
                const double cp = a * 2.0 / ((ap.t + am.t) * ap.t);
                const double cm = a * 2.0 / ((ap.t + am.t) * am.t);
                diag -= cp + cm;
                if (ap.node >= 0)
                    trips.emplace_back(int(ci), ap.node, cp);
                else
                    rhs -= cp * boundary[(ci * n_dirs + d) * 2 + 0];
                if (am.node >= 0)
                    trips.emplace_back(int(ci), am.node, cm);
                else
                    rhs -= cm * boundary[(ci * n_dirs + d) * 2 + 1];
            }
            trips.emplace_back(int(ci), int(ci), diag);
            b[int(ci)] = rhs;
        }
        Eigen::SparseMatrix<double> A{int(n), int(n)};
        A.setFromTriplets(trips.begin(), trips.end());
        A.makeCompressed();
        lu.compute(A);
        if (lu.info() != Eigen::Success)
            throw NonConvergenceError("solve_dirichlet: policy linear solve failed",
                                      {tail.begin(), tail.end()});
        Eigen::VectorXd x = lu.solve(b);
        for (int refine = 0; refine < 2; ++refine) x += lu.solve(Eigen::VectorXd(b - A * x));
        for (std::size_t ci = 0; ci < n; ++ci) u[ci] = x[int(ci)];
    }
    throw NonConvergenceError("solve_dirichlet: policy iteration exceeded outer limit",
                              {tail.begin(), tail.end()});
}

}  // namespace

double discrete_pucci(const GridMask& mask, const std::vector<double>& values,
                      const std::vector<double>& boundary, std::size_t ci,
                      const EllipticityPair& ell, int sign) {
    const ArmAccess acc{mask, values, boundary, int(mask.stencil.directions.size())};
    return eval_node(acc, ci, ell, sign >= 0 ? OperatorTag::PucciPlus : OperatorTag::PucciMinus)
        .value;
}

SolutionField solve_dirichlet(std::shared_ptr<const GridMask> mask, OperatorTag op,
                              const EllipticityPair& ell,
                              const std::function<double(Point)>& f, const BoundaryData& g,
                              const SolveOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("solve_dirichlet: tol must be > 0");
    if (mask->stencil.directions.size() > 64)
        throw std::invalid_argument("solve_dirichlet: stencil width too large");
    SolutionField field;
    field.mask = mask;
    field.op = op;
    field.ell = ell;
    field.boundary_values = sample_boundary(*mask, g);
    field.f_values.resize(mask->n_interior());
    for (std::size_t ci = 0; ci < mask->n_interior(); ++ci)
        field.f_values[ci] = f(mask->node_point(mask->interior_nodes[ci]));
    field.values.assign(mask->n_interior(), 0.0);

    const SolveMethod method =
        opts.method == SolveMethod::Auto ? SolveMethod::Policy : opts.method;
    if (method == SolveMethod::Jacobi)
        field.residual_inf = solve_jacobi(*mask, op, ell, field.f_values, field.boundary_values,
                                          opts, field.values, field.iterations);
    else
        field.residual_inf = solve_policy(*mask, op, ell, field.f_values, field.boundary_values,
                                          opts, field.values, field.iterations);
    return field;
}

ResidualProfile residual_profile(const SolutionField& field) {
    ResidualProfile out;
    out.per_node.resize(field.mask->n_interior());
    out.inf_norm = residual_inf_norm(*field.mask, field.op, field.ell, field.f_values,
                                     field.boundary_values, field.values, 1, &out.per_node);
    return out;
}

double SolutionField::at_node(int i, int j) const {
    const std::int32_t ci = mask->interior_id[mask->node_index(i, j)];
    if (ci < 0) throw std::out_of_range("SolutionField::at_node: not an interior node");
    return values[ci];
}

double SolutionField::value_at(Point x) const {
    const double h = mask->h;
    const int i0 = int(std::floor(x.x1 / h));
    const int j0 = int(std::floor(x.x2 / h));
    const double fx = x.x1 / h - i0;
    const double fy = x.x2 / h - j0;
    double wsum = 0.0, vsum = 0.0;
    double best_w = -1.0, best_v = 0.0;
    for (int di = 0; di < 2; ++di)
        for (int dj = 0; dj < 2; ++dj) {
            const int i = i0 + di, j = j0 + dj;
            if (std::abs(i) > mask->N || std::abs(j) > mask->N) continue;
            const std::int32_t ci = mask->interior_id[mask->node_index(i, j)];
            if (ci < 0) continue;
            const double w = (di ? fx : 1.0 - fx) * (dj ? fy : 1.0 - fy);
            wsum += w;
            vsum += w * values[ci];
            if (w > best_w) {
                best_w = w;
                best_v = values[ci];
            }
        }
    if (wsum <= 0.0)
        throw std::out_of_range("SolutionField::value_at: no interior nodes near point");
    if (wsum < 0.999) return best_v;  // cut cell: nearest interior corner
    return vsum / wsum;
}

void SolutionField::write_csv(const std::string& path) const {
    const ResidualProfile prof = residual_profile(*this);
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("SolutionField::write_csv: cannot open " + path);
    std::fprintf(fp, "i,j,x1,x2,role,u,residual\n");
    const int side = mask->side();
    for (std::size_t ci = 0; ci < mask->n_interior(); ++ci) {
        const int node = mask->interior_nodes[ci];
        const int i = node / side - mask->N;
        const int j = node % side - mask->N;
        std::fprintf(fp, "%d,%d,%.17g,%.17g,interior,%.17g,%.17g\n", i, j, i * mask->h,
                     j * mask->h, values[ci], prof.per_node[ci]);
    }
    std::fclose(fp);
}

std::string SolutionField::metadata_json() const {
    nlohmann::json j;
    j["operator"] = operator_name(op);
    j["lambda"] = ell.lambda;
    j["Lambda"] = ell.Lambda;
    j["h"] = mask->h;
    j["W"] = mask->stencil.width;
    j["iterations"] = iterations;
    j["residual_inf"] = residual_inf;
    j["f"] = f_handle;
    return j.dump(2);
}

}  // namespace puccilab
