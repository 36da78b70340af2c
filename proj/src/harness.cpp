#include "puccilab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

namespace puccilab {

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Lipschitz: return "lipschitz";
        case Scenario::AntiLipschitz: return "anti_lipschitz";
        case Scenario::Hopf: return "hopf";
        case Scenario::AntiHopf: return "anti_hopf";
        case Scenario::FlatC1Alpha: return "flat_c1alpha";
        case Scenario::FlatHopf: return "flat_hopf";
        case Scenario::NotchHopf: return "notch_hopf";
    }
    return "?";
}

Scenario scenario_from_name(const std::string& name) {
    for (Scenario s : {Scenario::Lipschitz, Scenario::AntiLipschitz, Scenario::Hopf,
                       Scenario::AntiHopf, Scenario::FlatC1Alpha, Scenario::FlatHopf,
                       Scenario::NotchHopf})
        if (scenario_name(s) == name) return s;
    throw std::invalid_argument("unknown scenario: " + name);
}

void ProblemSpec::validate() const {
    if (!(probe_l.x2 > 0.0)) throw std::invalid_argument("ProblemSpec: probe l needs l2 > 0");
    const auto require_graph = [this](DomainSpec::Kind kind, const char* what) {
        if (domain.kind() != kind && domain.kind() != DomainSpec::Kind::HalfBall)
            throw std::invalid_argument(std::string("ProblemSpec: ") + scenario_name(scenario) +
                                        " requires a " + what + " domain");
    };
    switch (scenario) {
        case Scenario::Lipschitz: {
            require_graph(DomainSpec::Kind::GraphExteriorMinus, "graph_exterior_minus");
            if (domain.kind() != DomainSpec::Kind::HalfBall &&
                !dini_integral(domain.modulus_of_domain(), 1.0).is_dini)
                throw std::invalid_argument("ProblemSpec: lipschitz needs a Dini omega_Omega");
            break;
        }
        case Scenario::AntiLipschitz: {
            if (domain.kind() != DomainSpec::Kind::GraphExteriorMinus)
                throw std::invalid_argument(
                    "ProblemSpec: anti_lipschitz requires graph_exterior_minus");
            if (dini_integral(domain.modulus_of_domain(), 1.0).is_dini)
                throw std::invalid_argument(
                    "ProblemSpec: anti_lipschitz needs a non-Dini omega_Omega");
            break;
        }
        case Scenario::Hopf: {
            require_graph(DomainSpec::Kind::GraphInteriorPlus, "graph_interior_plus");
            if (domain.kind() != DomainSpec::Kind::HalfBall &&
                !dini_integral(domain.modulus_of_domain(), 1.0).is_dini)
                throw std::invalid_argument("ProblemSpec: hopf needs a Dini omega_Omega");
            break;
        }
        case Scenario::AntiHopf: {
            if (domain.kind() != DomainSpec::Kind::GraphInteriorPlus)
                throw std::invalid_argument("ProblemSpec: anti_hopf requires graph_interior_plus");
            if (dini_integral(domain.modulus_of_domain(), 1.0).is_dini)
                throw std::invalid_argument("ProblemSpec: anti_hopf needs a non-Dini omega_Omega");
            break;
        }
        case Scenario::FlatC1Alpha:
        case Scenario::FlatHopf:
            if (domain.kind() != DomainSpec::Kind::HalfBall)
                throw std::invalid_argument("ProblemSpec: flat scenarios require half_ball");
            break;
        case Scenario::NotchHopf:
            if (domain.kind() != DomainSpec::Kind::Notch)
                throw std::invalid_argument("ProblemSpec: notch_hopf requires a notch domain");
            break;
    }
}

bool GrowthReport::all_pass() const {
    for (const auto& [name, ok] : verdicts)
        if (!ok) return false;
    return true;
}

void GrowthReport::write_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("GrowthReport::write_csv: cannot open " + path);
    std::fprintf(f, "k,r,Q,q,omega_tilde_predicted,verdict\n");
    const int overall = all_pass() ? 1 : 0;
    for (std::size_t i = 0; i < k.size(); ++i)
        std::fprintf(f, "%d,%.17g,%.17g,%.17g,%.17g,%d\n", k[i], radii[i], Q[i], q[i],
                     omega_tilde_predicted.empty() ? 0.0 : omega_tilde_predicted[i], overall);
    for (const auto& [name, ok] : verdicts)
        std::fprintf(f, "# verdict,%s,%d\n", name.c_str(), ok ? 1 : 0);
    std::fprintf(f, "# normalization,%.17g\n", normalization);
    std::fprintf(f, "# fitted_exponent,%.17g\n", fitted_exponent);
    std::fclose(f);
}

namespace {

struct Fit {
    double slope = 0.0;
    double intercept = 0.0;
};

Fit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return {};
    return {(n * sxy - sx * sy) / denom, (sy * sxx - sx * sxy) / denom};
}

SolutionField solve_for_spec(const ProblemSpec& spec, OperatorTag op, const BoundaryData& g) {
    auto mask = std::make_shared<GridMask>(rasterize(spec.domain, spec.h, StencilSet::make(spec.W)));
    SolveOptions opts;
    opts.tol = spec.tol;
    opts.max_iter = spec.max_iter;
    opts.method = spec.method;
    opts.workers = spec.workers;
    auto f = spec.f ? spec.f : [](Point) { return 0.0; };
    SolutionField field = solve_dirichlet(mask, op, spec.ell, f, g, opts);
    field.f_handle = spec.f_handle;
    return field;
}

void scale_field(SolutionField& field, double s) {
    for (double& v : field.values) v *= s;
    for (double& v : field.boundary_values) v *= s;
    for (double& v : field.f_values) v *= s;
    field.residual_inf *= std::fabs(s);
}

}  // namespace

std::pair<SolutionField, GrowthReport> run_scenario(const ProblemSpec& spec) {
    spec.validate();
    OperatorTag op;
    switch (spec.scenario) {
        case Scenario::Lipschitz:
        case Scenario::AntiHopf:
            op = OperatorTag::PucciPlus;
            break;
        case Scenario::AntiLipschitz:
        case Scenario::Hopf:
            op = OperatorTag::PucciMinus;
            break;
        default:
            throw std::invalid_argument("run_scenario: use the dedicated flat/notch checks for " +
                                        scenario_name(spec.scenario));
    }
    if (spec.ell.lambda == spec.ell.Lambda) op = OperatorTag::Laplace;

    BoundaryData g;
    g.wall = spec.g_wall ? spec.g_wall : [](Point) { return 0.0; };
    g.sphere = spec.g_sphere ? spec.g_sphere : [](Point) { return 1.0; };
    SolutionField field = solve_for_spec(spec, op, g);

    GrowthReport rep;
    const bool normalize = spec.scenario == Scenario::AntiLipschitz ||
                           spec.scenario == Scenario::Hopf;
    rep.normalization = field.value_at({0.0, 0.5});
    if (normalize) {
        if (!(rep.normalization > 0.0))
            throw std::runtime_error("run_scenario: u(e_n/2) is not positive");
        scale_field(field, 1.0 / rep.normalization);
    }

    const double u0 = g.wall({0.0, 0.0});
    const double ln = std::hypot(spec.probe_l.x1, spec.probe_l.x2);
    const Point l{spec.probe_l.x1 / ln, spec.probe_l.x2 / ln};

    // Dyadic radii, finest first excluded when under-resolved.
    std::vector<double> sup_abs;
    for (int k = 2; k <= spec.K + 1; ++k) {
        const double r = std::ldexp(1.0, -k);
        if (r < 2.0 * spec.h) break;
        rep.k.push_back(k);
        rep.radii.push_back(r);
        rep.q.push_back(field.value_at({r * l.x1, r * l.x2}) / (r * l.x2));
        double sup = 0.0, sup_u = 0.0;
        int annulus = 0;
        const double r_next = 0.5 * r;
        const GridMask& mask = *field.mask;
        for (std::size_t ci = 0; ci < mask.n_interior(); ++ci) {
            const Point x = mask.node_point(mask.interior_nodes[ci]);
            const double d2 = x.x1 * x.x1 + x.x2 * x.x2;
            if (d2 >= r * r) continue;
            sup = std::max(sup, std::fabs(field.values[ci] - u0));
            sup_u = std::max(sup_u, std::fabs(field.values[ci]));
            if (d2 >= r_next * r_next) ++annulus;
        }
        rep.Q.push_back(sup / r);
        rep.annulus_nodes.push_back(annulus);
        sup_abs.push_back(sup_u);
    }
    if (rep.k.empty()) throw ResolutionError("run_scenario: no resolvable dyadic radii");

    {
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < rep.radii.size(); ++i)
            if (sup_abs[i] > 0.0) {
                lx.push_back(std::log(rep.radii[i]));
                ly.push_back(std::log(sup_abs[i]));
            }
        rep.fitted_exponent = linear_fit(lx, ly).slope;
    }

    // Predicted omega-tilde along the same radii (eta = 1/2 so that
    // eta^k = r_k).
    if (spec.scenario == Scenario::AntiLipschitz || spec.scenario == Scenario::AntiHopf) {
        const int sign = spec.scenario == Scenario::AntiLipschitz ? +1 : -1;
        const auto a = growth_product(spec.domain.modulus_of_domain(), spec.certify_c0, 0.5,
                                      rep.k.back(), sign);
        for (int k : rep.k) rep.omega_tilde_predicted.push_back(a[k]);
    }

    const auto q_at = [&rep](int k) -> std::optional<double> {
        for (std::size_t i = 0; i < rep.k.size(); ++i)
            if (rep.k[i] == k) return rep.q[i];
        return std::nullopt;
    };
    const auto wt_at = [&rep](int k) -> double {
        for (std::size_t i = 0; i < rep.k.size(); ++i)
            if (rep.k[i] == k) return rep.omega_tilde_predicted[i];
        return 1.0;
    };
    const int k_hi = std::min(6, rep.k.back());

    switch (spec.scenario) {
        case Scenario::Lipschitz: {
            const double q2 = rep.Q.front();
            rep.verdicts["Q_bounded"] =
                *std::max_element(rep.Q.begin(), rep.Q.end()) <= 4.0 * q2;
            break;
        }
        case Scenario::Hopf: {
            const double floor = rep.q.front() / 4.0;
            rep.verdicts["q_floor"] =
                *std::min_element(rep.q.begin(), rep.q.end()) >= floor && floor > 0.0;
            break;
        }
        case Scenario::AntiLipschitz: {
            bool increasing = true;
            for (int k = 4; k <= k_hi; ++k)
                if (!(q_at(k) && q_at(k - 1) && *q_at(k) > *q_at(k - 1))) increasing = false;
            rep.verdicts["q_increasing"] = increasing;
            if (q_at(3) && q_at(k_hi))
                rep.verdicts["q_ratio_certified"] =
                    *q_at(k_hi) / *q_at(3) >= 0.5 * wt_at(k_hi) / wt_at(3);
            break;
        }
        case Scenario::AntiHopf: {
            bool decreasing = true;
            for (int k = 4; k <= k_hi; ++k)
                if (!(q_at(k) && q_at(k - 1) && *q_at(k) < *q_at(k - 1))) decreasing = false;
            rep.verdicts["q_decreasing"] = decreasing;
            if (q_at(3) && q_at(k_hi))
                rep.verdicts["q_ratio_certified"] =
                    *q_at(k_hi) <= *q_at(3) * (wt_at(k_hi) / wt_at(3)) * 2.0;
            break;
        }
        default:
            break;
    }
    return {std::move(field), std::move(rep)};
}

NormCheck check_pointwise_norms(const GridMask& mask, const std::vector<double>& data,
                                NormKind kind, const Modulus& omega, double value_at_origin) {
    NormCheck out;
    out.pass = true;
    switch (kind) {
        case NormKind::C01: {
            for (std::size_t ci = 0; ci < mask.n_interior(); ++ci) {
                const Point x = mask.node_point(mask.interior_nodes[ci]);
                const double r = std::hypot(x.x1, x.x2);
                if (r == 0.0) continue;
                out.C = std::max(out.C, std::fabs(data[ci] - value_at_origin) / r);
            }
            break;
        }
        case NormKind::C1Dini: {
            // The linear part must be the differential at 0 for the ratio to
            // stay bounded, so fit it by minimizing the sup ratio itself
            // (convex in l; coarse-to-fine grid descent).
            const auto sup_ratio = [&](double l1, double l2) {
                double worst = 0.0;
                for (std::size_t ci = 0; ci < mask.n_interior(); ++ci) {
                    const Point x = mask.node_point(mask.interior_nodes[ci]);
                    const double r = std::hypot(x.x1, x.x2);
                    if (r == 0.0) continue;
                    const double denom = r * omega.eval(std::min(r, omega.domain_radius()));
                    if (denom == 0.0) continue;
                    const double rem =
                        std::fabs(data[ci] - value_at_origin - l1 * x.x1 - l2 * x.x2);
                    worst = std::max(worst, rem / denom);
                }
                return worst;
            };
            double width = 1.0;
            double best = sup_ratio(out.l1, out.l2);
            for (int level = 0; level < 18; ++level) {
                double cl1 = out.l1, cl2 = out.l2;
                bool on_edge = false;
                for (int a = -10; a <= 10; ++a)
                    for (int b = -10; b <= 10; ++b) {
                        const double v = sup_ratio(cl1 + width * a / 10.0, cl2 + width * b / 10.0);
                        if (v < best) {
                            best = v;
                            out.l1 = cl1 + width * a / 10.0;
                            out.l2 = cl2 + width * b / 10.0;
                            on_edge = std::abs(a) == 10 || std::abs(b) == 10;
                        }
                    }
                if (on_edge && level == 0)
                    width *= 4.0;
                else
                    width *= 0.25;
            }
            for (std::size_t ci = 0; ci < mask.n_interior(); ++ci) {
                const Point x = mask.node_point(mask.interior_nodes[ci]);
                const double r = std::hypot(x.x1, x.x2);
                if (r == 0.0) continue;
                const double rem =
                    std::fabs(data[ci] - value_at_origin - out.l1 * x.x1 - out.l2 * x.x2);
                const double denom = r * omega.eval(std::min(r, omega.domain_radius()));
                if (denom == 0.0) {
                    if (rem > 1e-12) out.pass = false;
                    continue;
                }
                out.C = std::max(out.C, rem / denom);
            }
            break;
        }
        case NormKind::Cm1Dini: {
            for (int k = 0;; ++k) {
                const double r = std::ldexp(1.0, -k);
                if (r < 4.0 * mask.h) break;
                double sum = 0.0;
                for (std::size_t ci = 0; ci < mask.n_interior(); ++ci) {
                    const Point x = mask.node_point(mask.interior_nodes[ci]);
                    if (x.x1 * x.x1 + x.x2 * x.x2 >= r * r) continue;
                    sum += data[ci] * data[ci];
                }
                const double norm = std::sqrt(sum * mask.h * mask.h);
                const double w = omega.eval(std::min(r, omega.domain_radius()));
                if (w == 0.0) {
                    if (norm > 1e-12) out.pass = false;
                    continue;
                }
                out.C = std::max(out.C, norm / w);
            }
            break;
        }
    }
    if (!std::isfinite(out.C)) out.pass = false;
    return out;
}

namespace {

SolutionField solve_flat(double h, OperatorTag op, const EllipticityPair& ell, int W, double tol,
                         int workers, const BoundaryData& g) {
    auto mask = std::make_shared<GridMask>(
        rasterize(DomainSpec::half_ball(1.0), h, StencilSet::make(W)));
    SolveOptions opts;
    opts.tol = tol;
    opts.workers = workers;
    return solve_dirichlet(mask, op, ell, [](Point) { return 0.0; }, g, opts);
}

}  // namespace

FlatC1AlphaResult flat_c1alpha_check(double h, OperatorTag op, const EllipticityPair& ell, int W,
                                     double tol, int workers) {
    const SolutionField u = solve_flat(h, op, ell, W, tol, workers, BoundaryData::constants(0, 1));
    const GridMask& mask = *u.mask;

    FlatC1AlphaResult out;
    double num = 0.0, den = 0.0, sup_u = 0.0;
    for (std::size_t ci = 0; ci < mask.n_interior(); ++ci) {
        const Point x = mask.node_point(mask.interior_nodes[ci]);
        sup_u = std::max(sup_u, std::fabs(u.values[ci]));
        if (x.x1 * x.x1 + x.x2 * x.x2 >= 1.0 / 64.0) continue;
        num += u.values[ci] * x.x2;
        den += x.x2 * x.x2;
    }
    out.a = den > 0.0 ? num / den : 0.0;
    out.C = sup_u > 0.0 ? std::fabs(out.a) / sup_u : 0.0;

    std::vector<double> lx, ly;
    for (int k = 2; k <= 6; ++k) {
        const double r = std::ldexp(1.0, -k);
        if (r < 2.0 * h) break;
        double sup = 0.0;
        for (std::size_t ci = 0; ci < mask.n_interior(); ++ci) {
            const Point x = mask.node_point(mask.interior_nodes[ci]);
            if (x.x1 * x.x1 + x.x2 * x.x2 >= r * r) continue;
            sup = std::max(sup, std::fabs(u.values[ci] - out.a * x.x2));
        }
        out.max_remainder = std::max(out.max_remainder, sup);
        if (sup > 0.0) {
            lx.push_back(std::log(r));
            ly.push_back(std::log(sup));
        }
    }
    if (out.max_remainder <= 100.0 * tol) {
        out.degenerate_linear = true;
        return out;
    }
    out.alpha = linear_fit(lx, ly).slope - 1.0;
    return out;
}

double flat_hopf_check(double h, const EllipticityPair& ell, int W, double tol, int workers) {
    SolutionField u =
        solve_flat(h, OperatorTag::PucciMinus, ell, W, tol, workers, BoundaryData::constants(0, 1));
    const double norm = u.value_at({0.0, 0.5});
    const GridMask& mask = *u.mask;
    double c = 1e300;
    for (std::size_t ci = 0; ci < mask.n_interior(); ++ci) {
        const Point x = mask.node_point(mask.interior_nodes[ci]);
        if (x.x1 * x.x1 + x.x2 * x.x2 >= 1.0 / 64.0 || x.x2 <= 0.0) continue;
        c = std::min(c, u.values[ci] / norm / x.x2);
    }
    return c;
}

std::map<double, double> notch_hopf_check(const std::vector<double>& a_values, double h,
                                          const EllipticityPair& ell, int W, double tol,
                                          int workers) {
    std::map<double, double> out;
    for (double a : a_values) {
        const DomainSpec dom = DomainSpec::notch(a, 1.0);
        auto mask = std::make_shared<GridMask>(rasterize(dom, h, StencilSet::make(W)));
        BoundaryData g;
        // Dirichlet 1 on the ledge T = (T_1 \ T_{1/4}) + a e_n, 0 elsewhere.
        g.wall = [a](Point x) {
            return (x.x2 >= a - 1e-9 && std::fabs(x.x1) >= 0.25 - 1e-9) ? 1.0 : 0.0;
        };
        g.sphere = [](Point) { return 0.0; };
        SolveOptions opts;
        opts.tol = tol;
        opts.workers = workers;
        const SolutionField u = solve_dirichlet(mask, OperatorTag::PucciMinus, ell,
                                                [](Point) { return 0.0; }, g, opts);
        double c = 1e300;
        for (std::size_t ci = 0; ci < mask->n_interior(); ++ci) {
            const Point x = mask->node_point(mask->interior_nodes[ci]);
            if (x.x1 * x.x1 + x.x2 * x.x2 >= 1.0 / 64.0 || x.x2 <= 0.0) continue;
            c = std::min(c, u.values[ci] / x.x2);
        }
        out[a] = c;
    }
    return out;
}

}  // namespace puccilab
