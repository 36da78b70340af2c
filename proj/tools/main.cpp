#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "puccilab/config.hpp"

namespace fs = std::filesystem;
using namespace puccilab;

namespace {

fs::path resolve_output_dir(const std::string& dir) {
    fs::path p(dir);
    if (p.is_relative()) {
        if (const char* root = std::getenv("PUCCILAB_OUTPUT_ROOT")) p = fs::path(root) / p;
    }
    fs::create_directories(p);
    return p;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

int cmd_solve(const ExperimentConfig& cfg) {
    const fs::path out = resolve_output_dir(cfg.output_dir);
    auto mask = std::make_shared<GridMask>(
        rasterize(cfg.problem.domain, cfg.problem.h, StencilSet::make(cfg.problem.W)));
    OperatorTag op = OperatorTag::PucciPlus;
    if (cfg.problem.ell.lambda == cfg.problem.ell.Lambda) op = OperatorTag::Laplace;
    if (cfg.scenario_raw == "anti_lipschitz" || cfg.scenario_raw == "hopf")
        op = OperatorTag::PucciMinus;
    SolveOptions opts;
    opts.tol = cfg.problem.tol;
    opts.max_iter = cfg.problem.max_iter;
    opts.method = cfg.problem.method;
    opts.workers = cfg.problem.workers;
    BoundaryData g{cfg.problem.g_wall, cfg.problem.g_sphere};
    SolutionField field = solve_dirichlet(mask, op, cfg.problem.ell, cfg.problem.f, g, opts);
    field.f_handle = cfg.problem.f_handle;
    field.write_csv((out / "field.csv").string());
    nlohmann::json meta = nlohmann::json::parse(field.metadata_json());
    meta["config"] = nlohmann::json::parse(cfg.to_json());
    write_text(out / "metadata.json", meta.dump(2) + "\n");
    std::printf("solve: %zu interior nodes, %ld iterations, residual %.3g\n",
                field.mask->n_interior(), field.iterations, field.residual_inf);
    return 0;
}

int cmd_measure(const ExperimentConfig& cfg) {
    const fs::path out = resolve_output_dir(cfg.output_dir);
    const Scenario sc = cfg.problem.scenario;
    if (sc == Scenario::FlatC1Alpha) {
        const auto r = flat_c1alpha_check(cfg.problem.h, OperatorTag::PucciPlus, cfg.problem.ell,
                                          cfg.problem.W, cfg.problem.tol, cfg.problem.workers);
        const bool pass = r.degenerate_linear || r.alpha > 0.0;
        std::printf("flat_c1alpha: a=%.6g alpha=%.6g C=%.6g %s\n", r.a, r.alpha, r.C,
                    pass ? "pass" : "fail");
        return pass ? 0 : 2;
    }
    if (sc == Scenario::FlatHopf) {
        const double c = flat_hopf_check(cfg.problem.h, cfg.problem.ell, cfg.problem.W,
                                         cfg.problem.tol, cfg.problem.workers);
        std::printf("flat_hopf: c=%.6g %s\n", c, c > 0.0 ? "pass" : "fail");
        return c > 0.0 ? 0 : 2;
    }
    if (sc == Scenario::NotchHopf) {
        const auto table = notch_hopf_check({cfg.problem.domain.notch_offset()}, cfg.problem.h,
                                            cfg.problem.ell, cfg.problem.W, cfg.problem.tol,
                                            cfg.problem.workers);
        const double c = table.begin()->second;
        std::printf("notch_hopf: a=%.3g c=%.6g %s\n", table.begin()->first, c,
                    c > 0.0 ? "pass" : "fail");
        return c > 0.0 ? 0 : 2;
    }
    auto [field, report] = run_scenario(cfg.problem);
    field.write_csv((out / "field.csv").string());
    report.write_csv((out / "growth.csv").string());
    nlohmann::json meta = nlohmann::json::parse(field.metadata_json());
    meta["config"] = nlohmann::json::parse(cfg.to_json());
    write_text(out / "metadata.json", meta.dump(2) + "\n");
    for (const auto& [name, ok] : report.verdicts)
        std::printf("%s: %s %s\n", cfg.scenario_raw.c_str(), name.c_str(), ok ? "pass" : "fail");
    return report.all_pass() ? 0 : 2;
}

int cmd_certify(const ExperimentConfig& cfg) {
    const fs::path out = resolve_output_dir(cfg.output_dir);
    CertificationReport rep = ak_sequence(cfg.certify_omega, cfg.certify_params);
    rep.a = growth_product(cfg.certify_omega, cfg.certify_params.c0, cfg.certify_params.eta,
                           cfg.certify_params.K, +1, cfg.certify_a0);
    try {
        rep.omega_tilde = growth_product(cfg.certify_omega, cfg.certify_params.c0,
                                         cfg.certify_params.eta, cfg.certify_params.K, -1,
                                         cfg.certify_a0);
    } catch (const std::invalid_argument&) {
        // minus product undefined when c0 * omega(eta) >= 1
    }
    for (const auto& [name, st] :
         check_conditions(cfg.certify_params, cfg.certify_constants))
        rep.conditions[name] = st;
    write_text(out / "certification.json", rep.to_json() + "\n");
    rep.write_csv((out / "certification.csv").string());
    std::printf("certify: sum A_k = %.12g (3c0 = %.12g) tail %.3g %s\n", rep.partial_sum,
                3.0 * cfg.certify_params.c0, rep.tail_bound, rep.bound_3c0_ok ? "pass" : "fail");
    return rep.bound_3c0_ok ? 0 : 2;
}

int cmd_dini(const std::string& modulus_json, double r0) {
    const Modulus m = Modulus::from_json(modulus_json);
    const DiniVerdict v = dini_integral(m, r0);
    if (v.is_dini)
        std::printf("is_dini=true integral=%.12g method=%s\n", *v.integral_value,
                    v.method == DiniVerdict::Method::Analytic ? "analytic" : "quadrature");
    else
        std::printf("is_dini=false lower_bound_witness=%.12g method=%s\n",
                    *v.lower_bound_witness,
                    v.method == DiniVerdict::Method::Analytic ? "analytic" : "quadrature");
    return 0;
}

int cmd_sweep(const ExperimentConfig& base, const std::string& axis,
              const std::vector<double>& values) {
    const fs::path out = resolve_output_dir(base.output_dir);
    std::FILE* f = std::fopen((out / "sweep.csv").string().c_str(), "wb");
    if (!f) throw std::runtime_error("sweep: cannot open output");
    std::fprintf(f, "axis,value,k,r,Q,q,verdict\n");
    bool all_ok = true;
    for (double v : values) {
        ExperimentConfig cfg = base;
        if (axis == "h") cfg.problem.h = v;
        else if (axis == "W") cfg.problem.W = int(v);
        else if (axis == "a_notch") cfg.problem.domain = DomainSpec::notch(v, cfg.problem.domain.radius());
        else if (axis == "omega_param") {
            const Modulus& w = cfg.problem.domain.omega();
            Modulus replaced = w.family() == Modulus::Family::Power
                                   ? Modulus::power(v, w.param_c())
                                   : Modulus::log_inverse(v, w.param_c());
            cfg.problem.domain =
                cfg.problem.domain.kind() == DomainSpec::Kind::GraphExteriorMinus
                    ? DomainSpec::graph_exterior_minus(replaced, cfg.problem.domain.radius())
                    : DomainSpec::graph_interior_plus(replaced, cfg.problem.domain.radius());
        } else {
            std::fclose(f);
            throw ConfigError("/sweep/axis", "unknown axis " + axis);
        }
        if (cfg.problem.scenario == Scenario::NotchHopf) {
            const auto table = notch_hopf_check({axis == "a_notch" ? v : cfg.problem.domain.notch_offset()},
                                                cfg.problem.h, cfg.problem.ell, cfg.problem.W,
                                                cfg.problem.tol, cfg.problem.workers);
            const double c = table.begin()->second;
            std::fprintf(f, "%s,%.17g,,,,%.17g,%d\n", axis.c_str(), v, c, c > 0.0 ? 1 : 0);
            all_ok = all_ok && c > 0.0;
            continue;
        }
        auto [field, report] = run_scenario(cfg.problem);
        const int ok = report.all_pass() ? 1 : 0;
        all_ok = all_ok && ok;
        for (std::size_t i = 0; i < report.k.size(); ++i)
            std::fprintf(f, "%s,%.17g,%d,%.17g,%.17g,%.17g,%d\n", axis.c_str(), v, report.k[i],
                         report.radii[i], report.Q[i], report.q[i], ok);
    }
    std::fclose(f);
    return all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dirichlet laboratory for Pucci extremal operators on 2-D domains"};
    app.require_subcommand(1);

    std::string config_path, modulus_json, axis = "h";
    double r0 = 1.0;
    std::vector<double> sweep_values;
    double override_h = 0.0, override_tol = 0.0;
    int override_W = 0;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "experiment config JSON")->required();
        sub->add_option("--grid-h", override_h, "override grid spacing");
        sub->add_option("--width", override_W, "override stencil width");
        sub->add_option("--tol", override_tol, "override solver tolerance");
    };
    CLI::App* solve = app.add_subcommand("solve", "solve the Dirichlet problem, write field CSV");
    add_config(solve);
    CLI::App* measure = app.add_subcommand("measure", "run a scenario and report growth verdicts");
    add_config(measure);
    CLI::App* certify = app.add_subcommand("certify", "A_k recursion and growth products");
    add_config(certify);
    CLI::App* dini = app.add_subcommand("dini", "classify a modulus");
    dini->add_option("modulus", modulus_json, "modulus JSON (inline)")->required();
    dini->add_option("--r0", r0, "upper integration limit");
    CLI::App* sweep = app.add_subcommand("sweep", "repeat a scenario along one axis");
    add_config(sweep);
    sweep->add_option("--axis", axis, "h | W | omega_param | a_notch");
    sweep->add_option("--values", sweep_values, "axis values")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (dini->parsed()) return cmd_dini(modulus_json, r0);
        ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
        if (override_h > 0.0) cfg.problem.h = override_h;
        if (override_W > 0) cfg.problem.W = override_W;
        if (override_tol > 0.0) cfg.problem.tol = override_tol;
        if (solve->parsed()) return cmd_solve(cfg);
        if (measure->parsed()) return cmd_measure(cfg);
        if (certify->parsed()) return cmd_certify(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg, axis, sweep_values);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
