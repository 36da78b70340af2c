#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "puccilab/config.hpp"

namespace py = pybind11;
using namespace puccilab;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Pucci extremal Dirichlet laboratory";

    py::class_<Modulus>(m, "Modulus")
        .def_static("zero", &Modulus::zero)
        .def_static("constant", &Modulus::constant, py::arg("k"))
        .def_static("power", &Modulus::power, py::arg("alpha"), py::arg("c"))
        .def_static("log_inverse", &Modulus::log_inverse, py::arg("p"), py::arg("c"))
        .def_static("from_json", &Modulus::from_json)
        .def("eval", &Modulus::eval)
        .def("with_radius_scale", &Modulus::with_radius_scale)
        .def("to_json", &Modulus::to_json)
        .def("family_name", &Modulus::family_name)
        .def("__call__", &Modulus::eval)
        .def("__repr__", [](const Modulus& w) { return "Modulus(" + w.to_json() + ")"; });
    m.def(
        "tabulated_modulus",
        [](const std::vector<std::pair<double, double>>& knots) {
            std::vector<Modulus::Knot> k;
            for (const auto& [r, w] : knots) k.push_back({r, w});
            return Modulus::tabulated(std::move(k));
        },
        py::arg("knots"));

    py::class_<DiniVerdict>(m, "DiniVerdict")
        .def_readonly("is_dini", &DiniVerdict::is_dini)
        .def_readonly("integral_value", &DiniVerdict::integral_value)
        .def_readonly("lower_bound_witness", &DiniVerdict::lower_bound_witness);
    m.def("dini_integral", &dini_integral, py::arg("omega"), py::arg("r0"),
          py::arg("tol") = 1e-9);
    m.def("rescale_to_small", &rescale_to_small, py::arg("omega"), py::arg("c0"));

    py::class_<EllipticityPair>(m, "EllipticityPair")
        .def(py::init<double, double>(), py::arg("lam"), py::arg("Lam"))
        .def_readonly("lam", &EllipticityPair::lambda)
        .def_readonly("Lam", &EllipticityPair::Lambda);
    m.def(
        "pucci_plus",
        [](double a11, double a12, double a22, const EllipticityPair& ell) {
            return pucci_plus({a11, a12, a22}, ell);
        },
        py::arg("a11"), py::arg("a12"), py::arg("a22"), py::arg("ell"));
    m.def(
        "pucci_minus",
        [](double a11, double a12, double a22, const EllipticityPair& ell) {
            return pucci_minus({a11, a12, a22}, ell);
        },
        py::arg("a11"), py::arg("a12"), py::arg("a22"), py::arg("ell"));

    py::class_<DomainSpec>(m, "DomainSpec")
        .def_static("half_ball", &DomainSpec::half_ball, py::arg("R") = 1.0)
        .def_static("graph_exterior_minus", &DomainSpec::graph_exterior_minus, py::arg("omega"),
                    py::arg("R") = 1.0)
        .def_static("graph_interior_plus", &DomainSpec::graph_interior_plus, py::arg("omega"),
                    py::arg("R") = 1.0)
        .def_static("notch", &DomainSpec::notch, py::arg("a"), py::arg("R") = 1.0)
        .def_static("wedge", &DomainSpec::wedge, py::arg("slope"), py::arg("R") = 1.0)
        .def("inside", [](const DomainSpec& d, double x1, double x2) {
            return d.inside({x1, x2});
        })
        .def("kind_name", &DomainSpec::kind_name);

    py::class_<CertificationReport>(m, "CertificationReport")
        .def_readonly("A", &CertificationReport::A)
        .def_readonly("partial_sum", &CertificationReport::partial_sum)
        .def_readonly("tail_bound", &CertificationReport::tail_bound)
        .def_readonly("bound_3c0_ok", &CertificationReport::bound_3c0_ok)
        .def("to_json", &CertificationReport::to_json);
    m.def(
        "ak_sequence",
        [](const Modulus& w, double c0, double eta, double alpha0, int K) {
            IterationParams p;
            p.c0 = c0;
            p.eta = eta;
            p.alpha0 = alpha0;
            p.K = K;
            return ak_sequence(w, p);
        },
        py::arg("omega"), py::arg("c0") = 0.25, py::arg("eta") = 1.0 / 16.0,
        py::arg("alpha0") = 0.5, py::arg("K") = 200);
    m.def("growth_product", &growth_product, py::arg("omega"), py::arg("c0"), py::arg("eta"),
          py::arg("K"), py::arg("sign"), py::arg("a0") = 1.0);

    py::class_<GrowthReport>(m, "GrowthReport")
        .def_readonly("k", &GrowthReport::k)
        .def_readonly("radii", &GrowthReport::radii)
        .def_readonly("Q", &GrowthReport::Q)
        .def_readonly("q", &GrowthReport::q)
        .def_readonly("verdicts", &GrowthReport::verdicts)
        .def_readonly("fitted_exponent", &GrowthReport::fitted_exponent)
        .def_readonly("normalization", &GrowthReport::normalization)
        .def("all_pass", &GrowthReport::all_pass);

    m.def(
        "run_scenario",
        [](const std::string& scenario, const DomainSpec& domain, double lam, double Lam, double h,
           int W, double tol, int workers, std::pair<double, double> probe_l, int K) {
            ProblemSpec spec;
            spec.scenario = scenario_from_name(scenario);
            spec.domain = domain;
            spec.ell = EllipticityPair(lam, Lam);
            spec.h = h;
            spec.W = W;
            spec.tol = tol;
            spec.workers = workers;
            spec.probe_l = {probe_l.first, probe_l.second};
            spec.K = K;
            auto [field, rep] = run_scenario(spec);
            return rep;
        },
        py::arg("scenario"), py::arg("domain"), py::arg("lam") = 1.0, py::arg("Lam") = 2.0,
        py::arg("h") = 1.0 / 64.0, py::arg("W") = 3, py::arg("tol") = 1e-8,
        py::arg("workers") = 4, py::arg("probe_l") = std::pair<double, double>{0.0, 1.0},
        py::arg("K") = 6);

    m.def(
        "solve_dirichlet",
        [](const DomainSpec& domain, const std::string& op, double lam, double Lam, double h,
           int W, const std::function<double(double, double)>& f,
           const std::function<double(double, double)>& g_wall,
           const std::function<double(double, double)>& g_sphere, double tol, int workers) {
            auto mask = std::make_shared<GridMask>(rasterize(domain, h, StencilSet::make(W)));
            OperatorTag tag = OperatorTag::Laplace;
            if (op == "pucci_plus") tag = OperatorTag::PucciPlus;
            else if (op == "pucci_minus") tag = OperatorTag::PucciMinus;
            else if (op != "laplace") throw std::invalid_argument("unknown operator " + op);
            SolveOptions opts;
            opts.tol = tol;
            opts.workers = workers;
            BoundaryData g{[g_wall](Point x) { return g_wall(x.x1, x.x2); },
                           [g_sphere](Point x) { return g_sphere(x.x1, x.x2); }};
            const SolutionField u = solve_dirichlet(
                mask, tag, EllipticityPair(lam, Lam),
                [f](Point x) { return f(x.x1, x.x2); }, g, opts);
            std::vector<std::tuple<double, double, double>> rows;
            rows.reserve(mask->n_interior());
            for (std::size_t ci = 0; ci < mask->n_interior(); ++ci) {
                const Point x = mask->node_point(mask->interior_nodes[ci]);
                rows.emplace_back(x.x1, x.x2, u.values[ci]);
            }
            return py::make_tuple(rows, u.residual_inf, u.iterations);
        },
        py::arg("domain"), py::arg("op"), py::arg("lam") = 1.0, py::arg("Lam") = 2.0,
        py::arg("h") = 1.0 / 64.0, py::arg("W") = 3,
        py::arg("f") = std::function<double(double, double)>([](double, double) { return 0.0; }),
        py::arg("g_wall") =
            std::function<double(double, double)>([](double, double) { return 0.0; }),
        py::arg("g_sphere") =
            std::function<double(double, double)>([](double, double) { return 1.0; }),
        py::arg("tol") = 1e-8, py::arg("workers") = 4);

    m.def("flat_c1alpha_check",
          [](double h, double lam, double Lam) {
              const auto r = flat_c1alpha_check(h, OperatorTag::PucciPlus,
                                                EllipticityPair(lam, Lam));
              return py::dict(py::arg("a") = r.a, py::arg("alpha") = r.alpha, py::arg("C") = r.C,
                              py::arg("degenerate_linear") = r.degenerate_linear);
          },
          py::arg("h") = 1.0 / 64.0, py::arg("lam") = 1.0, py::arg("Lam") = 2.0);
    m.def("flat_hopf_check",
          [](double h, double lam, double Lam) {
              return flat_hopf_check(h, EllipticityPair(lam, Lam));
          },
          py::arg("h") = 1.0 / 64.0, py::arg("lam") = 1.0, py::arg("Lam") = 2.0);
}
