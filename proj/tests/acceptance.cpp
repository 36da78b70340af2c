// Acceptance gate: eight criteria, one verdict line each.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "puccilab/harness.hpp"

using namespace puccilab;
namespace fs = std::filesystem;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void verdict(int n, const char* name, bool pass, double secs, const std::string& detail = "") {
    std::printf("criterion %d (%s): %s  [%.1fs]%s%s\n", n, name, pass ? "PASS" : "FAIL", secs,
                detail.empty() ? "" : "  ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string g(double v, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

// ---- criterion 1: sum A_k <= 3 c0 for rescaled Dini moduli ----

bool criterion1(std::string& detail) {
    IterationParams p;
    p.c0 = 0.25;
    p.eta = 1.0 / 16.0;
    p.alpha0 = 0.25;
    p.K = 200;
    bool ok = true;
    std::ostringstream oss;
    for (const Modulus& w :
         {Modulus::zero(), Modulus::power(1.0, 1.0), Modulus::power(0.5, 1.0)}) {
        const auto [r1, rescaled] = rescale_to_small(w, p.c0);
        const CertificationReport rep = ak_sequence(rescaled, p);
        ok = ok && rep.partial_sum <= 3.0 * p.c0 && rep.tail_bound < 1e-12;
        oss << w.family_name() << ": sum=" << g(rep.partial_sum, 12) << " ";
    }
    detail = oss.str() + "(3c0=0.75)";
    return ok;
}

// ---- criterion 2: Dini dichotomy ----

bool criterion2(std::string& detail) {
    bool ok = true;
    for (double alpha : {1.0, 0.5, 0.25})
        ok = ok && dini_integral(Modulus::power(alpha, 1.0), 1.0).is_dini;
    for (double p : {0.5, 1.0}) ok = ok && !dini_integral(Modulus::log_inverse(p, 1.0), 1.0).is_dini;
    ok = ok && dini_integral(Modulus::log_inverse(2.0, 1.0), 1.0).is_dini;

    std::vector<Modulus::Knot> knots;
    for (int i = 16 * 64; i >= 0; --i) {
        const double r = std::pow(2.0, -i / 16.0);
        knots.push_back({r, std::sqrt(r)});
    }
    const auto v = dini_integral(Modulus::tabulated(knots), 1.0);
    const double rel = std::fabs(*v.integral_value - 2.0) / 2.0;
    detail = "tabulated sqrt integral=" + g(*v.integral_value, 8) + " rel_err=" + g(rel, 3);
    return ok && v.is_dini && rel <= 1e-3;
}

// ---- criterion 3: Pucci oracle equivalence ----

bool criterion3(std::string& detail) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    bool ok = true;
    for (const EllipticityPair& ell : {EllipticityPair(1.0, 2.0), EllipticityPair(1.0, 10.0)}) {
        for (int i = 0; i < 100; ++i) {
            const Sym2 m{u(rng), u(rng), u(rng)};
            const auto [sup, inf] = pucci_bruteforce(m, ell, 10000);
            const double scale = std::max(m.norm(), 1e-12);
            const double err = std::max(std::fabs(pucci_plus(m, ell) - sup),
                                        std::fabs(pucci_minus(m, ell) - inf)) /
                               scale;
            worst = std::max(worst, err);
            ok = ok && err <= 2e-2;
        }
    }
    detail = "worst rel dev=" + g(worst, 3);
    return ok;
}

// ---- criterion 4: scheme exactness and convergence (Laplace oracle) ----

double laplace_error(double h, const std::function<double(Point)>& exact, int workers,
                     const std::string& csv) {
    auto mask = std::make_shared<GridMask>(
        rasterize(DomainSpec::half_ball(1.0), h, StencilSet::make(3)));
    SolveOptions opts;
    opts.workers = workers;
    BoundaryData g{exact, exact};
    const SolutionField u = solve_dirichlet(mask, OperatorTag::Laplace, EllipticityPair(1.0, 1.0),
                                            [](Point) { return 0.0; }, g, opts);
    if (!csv.empty()) u.write_csv(csv);
    double err = 0.0;
    for (std::size_t ci = 0; ci < mask->n_interior(); ++ci) {
        const Point x = mask->node_point(mask->interior_nodes[ci]);
        err = std::max(err, std::fabs(u.values[ci] - exact(x)));
    }
    return err;
}

bool run_criterion4(const fs::path& dir, int workers, std::string& detail) {
    fs::create_directories(dir);
    auto xy = [](Point x) { return x.x1 * x.x2; };
    auto r52 = [](Point x) {
        const double r = std::hypot(x.x1, x.x2);
        return r == 0.0 ? 0.0 : std::pow(r, 2.5) * std::sin(2.5 * std::atan2(x.x2, x.x1));
    };
    const double e_xy = laplace_error(1.0 / 64.0, xy, workers, (dir / "c4_xy_64.csv").string());
    const double e64 = laplace_error(1.0 / 64.0, r52, workers, (dir / "c4_r52_64.csv").string());
    const double e128 = laplace_error(1.0 / 128.0, r52, workers, (dir / "c4_r52_128.csv").string());
    detail = "xy err=" + g(e_xy, 3) + " r52 err 1/64=" + g(e64, 4) + " 1/128=" + g(e128, 4) +
             " factor=" + g(e64 / e128, 3);
    return e_xy <= 10.0 * 1e-8 && e64 / e128 >= 1.5;
}

// ---- criterion 5: discrete comparison / maximum principles ----

bool criterion5(std::string& detail) {
    auto mask = std::make_shared<GridMask>(
        rasterize(DomainSpec::half_ball(1.0), 1.0 / 32.0, StencilSet::make(3)));
    const EllipticityPair ell(1.0, 2.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> us(-1.0, 1.0);
    long violations = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const double a0 = us(rng), a1 = us(rng), a2 = us(rng), w = 1.0 + 3.0 * u01(rng);
        const double bump = u01(rng), fmag = u01(rng);
        auto glo = [=](Point x) { return a0 + a1 * std::sin(w * x.x1) + a2 * x.x2; };
        auto ghi = [=](Point x) { return glo(x) + bump * (1.1 + std::cos(w * x.x2)); };
        const OperatorTag op = trial % 2 == 0 ? OperatorTag::PucciPlus : OperatorTag::PucciMinus;
        const SolutionField lo = solve_dirichlet(mask, op, ell, [=](Point) { return fmag; },
                                                 BoundaryData{glo, glo});
        const SolutionField hi = solve_dirichlet(mask, op, ell, [](Point) { return 0.0; },
                                                 BoundaryData{ghi, ghi});
        double gmin = 1e300, gmax = -1e300;
        for (int i = 0; i <= 4000; ++i) {
            const double t = -1.0 + 2.0 * i / 4000.0;
            const double vw = ghi({t, 0.0});
            const double theta = std::acos(-1.0) * i / 4000.0;
            const double vs = ghi({std::cos(theta), std::sin(theta)});
            gmin = std::min({gmin, vw, vs});
            gmax = std::max({gmax, vw, vs});
        }
        for (std::size_t ci = 0; ci < mask->n_interior(); ++ci) {
            if (lo.values[ci] > hi.values[ci] + 1e-10) ++violations;
            if (hi.values[ci] > gmax + 1e-10 || hi.values[ci] < gmin - 1e-10) ++violations;
        }
    }
    detail = "violations=" + std::to_string(violations);
    return violations == 0;
}

// ---- criterion 6: flat and notch boundary probes ----

bool criterion6(std::string& detail) {
    const EllipticityPair ell(1.0, 2.0);
    const auto fa = flat_c1alpha_check(1.0 / 128.0, OperatorTag::PucciPlus, ell);
    const auto fb = flat_c1alpha_check(1.0 / 256.0, OperatorTag::PucciPlus, ell);
    const bool alpha_ok = fa.alpha > 0.05 && fb.alpha > 0.05 &&
                          std::fabs(fa.alpha - fb.alpha) <= 0.2 * std::fabs(fb.alpha);
    const bool a_ok = std::isfinite(fa.C) && fa.C > 0.0 && std::isfinite(fb.C);

    const double c128 = flat_hopf_check(1.0 / 128.0, ell);
    const double c256 = flat_hopf_check(1.0 / 256.0, ell);
    const bool hopf_ok =
        c128 > 0.0 && c256 > 0.0 && std::fabs(c128 - c256) <= 0.25 * std::fabs(c256);

    const auto table = notch_hopf_check({0.0, 0.1, 0.2, 0.3, 0.4}, 1.0 / 128.0, ell);
    double cmin = 1e300;
    for (const auto& [a, c] : table) cmin = std::min(cmin, c);

    detail = "alpha=" + g(fa.alpha, 3) + "/" + g(fb.alpha, 3) + " C=" + g(fb.C, 3) +
             " hopf c=" + g(c128, 3) + "/" + g(c256, 3) + " notch min c=" + g(cmin, 3);
    return alpha_ok && a_ok && hopf_ok && cmin > 0.0;
}

// ---- criterion 7: boundary growth trends ----

ProblemSpec scenario_spec(Scenario sc, double h, int workers, Point probe = {0.0, 1.0}) {
    ProblemSpec spec;
    spec.scenario = sc;
    spec.h = h;
    spec.workers = workers;
    spec.probe_l = probe;
    spec.K = 6;
    const Modulus dini = Modulus::power(0.5, 1.0);
    const Modulus anti = Modulus::log_inverse(1.0, 1.0);
    switch (sc) {
        case Scenario::Lipschitz: spec.domain = DomainSpec::graph_exterior_minus(dini); break;
        case Scenario::Hopf: spec.domain = DomainSpec::graph_interior_plus(dini); break;
        case Scenario::AntiLipschitz: spec.domain = DomainSpec::graph_exterior_minus(anti); break;
        case Scenario::AntiHopf: spec.domain = DomainSpec::graph_interior_plus(anti); break;
        default: break;
    }
    return spec;
}

bool run_criterion7(const fs::path& dir, int workers, std::string& detail) {
    fs::create_directories(dir);
    bool ok = true;
    std::ostringstream oss;
    struct Run {
        const char* tag;
        Scenario sc;
        Point probe;
    };
    const std::vector<Run> runs = {
        {"lipschitz", Scenario::Lipschitz, {0.0, 1.0}},
        {"hopf", Scenario::Hopf, {0.0, 1.0}},
        {"hopf_oblique", Scenario::Hopf, {0.6, 0.8}},
        {"anti_lipschitz", Scenario::AntiLipschitz, {0.0, 1.0}},
        {"anti_hopf", Scenario::AntiHopf, {0.0, 1.0}},
    };
    for (const Run& r : runs) {
        std::map<std::string, bool> fine, coarse;
        for (double h : {1.0 / 256.0, 1.0 / 128.0}) {
            const auto [field, rep] = run_scenario(scenario_spec(r.sc, h, workers, r.probe));
            rep.write_csv((dir / ("c7_" + std::string(r.tag) + "_" +
                                  std::to_string(int(std::lround(1.0 / h))) + ".csv"))
                              .string());
            (h < 1.0 / 200.0 ? fine : coarse) = rep.verdicts;
            if (h < 1.0 / 200.0) {
                bool all = true;
                for (const auto& [name, v] : rep.verdicts) all = all && v;
                oss << r.tag << "=" << (all ? "ok" : "FAIL") << " ";
                ok = ok && all;
            }
        }
        if (fine != coarse) {
            oss << r.tag << "=UNSTABLE ";
            ok = false;
        }
    }
    detail = oss.str();
    return ok;
}

// ---- criterion 8: determinism ----

std::vector<fs::path> csv_files(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".csv") out.push_back(e.path().filename());
    std::sort(out.begin(), out.end());
    return out;
}

bool dirs_identical(const fs::path& a, const fs::path& b) {
    const auto fa = csv_files(a), fb = csv_files(b);
    if (fa != fb) return false;
    for (const auto& name : fa) {
        std::ifstream ia(a / name, std::ios::binary), ib(b / name, std::ios::binary);
        std::stringstream sa, sb;
        sa << ia.rdbuf();
        sb << ib.rdbuf();
        if (sa.str() != sb.str()) return false;
    }
    return true;
}

}  // namespace

int main() {
    const fs::path root = "acceptance_out";
    fs::create_directories(root);
    std::string detail;
    Timer total;

    {
        Timer t;
        const bool ok = criterion1(detail);
        verdict(1, "smallness recursion sum A_k <= 3c0", ok, t.seconds(), detail);
    }
    {
        Timer t;
        const bool ok = criterion2(detail);
        verdict(2, "dini dichotomy", ok, t.seconds(), detail);
    }
    {
        Timer t;
        const bool ok = criterion3(detail);
        verdict(3, "pucci oracle equivalence", ok, t.seconds(), detail);
    }
    {
        Timer t;
        const bool ok = run_criterion4(root / "c4_w4_run1", 4, detail);
        verdict(4, "scheme exactness and convergence", ok, t.seconds(), detail);
    }
    {
        Timer t;
        const bool ok = criterion5(detail);
        verdict(5, "comparison and maximum principles", ok, t.seconds(), detail);
    }
    {
        Timer t;
        const bool ok = criterion6(detail);
        verdict(6, "flat and notch boundary probes", ok, t.seconds(), detail);
    }
    {
        Timer t;
        const bool ok = run_criterion7(root / "c7_w4_run1", 4, detail);
        verdict(7, "boundary growth trends", ok, t.seconds(), detail);
    }
    {
        Timer t;
        std::string d4b, d4c, d7b, d7c;
        run_criterion4(root / "c4_w4_run2", 4, d4b);
        run_criterion4(root / "c4_w1_run1", 1, d4c);
        run_criterion7(root / "c7_w4_run2", 4, d7b);
        run_criterion7(root / "c7_w1_run1", 1, d7c);
        const bool reruns = dirs_identical(root / "c4_w4_run1", root / "c4_w4_run2") &&
                            dirs_identical(root / "c7_w4_run1", root / "c7_w4_run2");
        const bool workers = dirs_identical(root / "c4_w4_run1", root / "c4_w1_run1") &&
                             dirs_identical(root / "c7_w4_run1", root / "c7_w1_run1");
        verdict(8, "determinism", reruns && workers, t.seconds(),
                std::string("reruns=") + (reruns ? "identical" : "DIFFER") +
                    " workers=" + (workers ? "identical" : "DIFFER"));
    }

    std::printf("%s (%d criteria failed, %.1fs total)\n", failures == 0 ? "ALL PASS" : "FAILURES",
                failures, total.seconds());
    return failures == 0 ? 0 : 1;
}
