#include "puccilab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace puccilab {

namespace {

using nlohmann::json;

double num_at(const json& j, const std::string& pointer, const char* key) {
    if (!j.contains(key)) throw ConfigError(pointer + "/" + key, "missing field");
    if (!j.at(key).is_number()) throw ConfigError(pointer + "/" + key, "expected a number");
    return j.at(key).get<double>();
}

double num_or(const json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

Modulus modulus_from(const json& j, const std::string& pointer) {
    try {
        return Modulus::from_json(j.dump());
    } catch (const std::exception& e) {
        throw ConfigError(pointer, e.what());
    }
}

json modulus_to_json(const Modulus& m) { return json::parse(m.to_json()); }

DomainSpec domain_from(const json& j, const std::string& pointer) {
    const std::string kind = j.value("kind", "half_ball");
    const double R = num_or(j, "R", 1.0);
    if (kind == "half_ball") return DomainSpec::half_ball(R);
    if (kind == "notch") return DomainSpec::notch(num_at(j, pointer, "a"), R);
    if (kind == "wedge") return DomainSpec::wedge(num_at(j, pointer, "slope"), R);
    if (kind == "graph_exterior_minus" || kind == "graph_interior_plus") {
        if (!j.contains("omega")) throw ConfigError(pointer + "/omega", "missing field");
        const Modulus w = modulus_from(j.at("omega"), pointer + "/omega");
        return kind == "graph_exterior_minus" ? DomainSpec::graph_exterior_minus(w, R)
                                              : DomainSpec::graph_interior_plus(w, R);
    }
    throw ConfigError(pointer + "/kind", "unknown domain kind " + kind);
}

}  // namespace

std::function<double(Point)> parse_descriptor(const std::string& desc) {
    if (desc == "zero") return [](Point) { return 0.0; };
    if (desc == "one") return [](Point) { return 1.0; };
    if (desc == "harmonic_xy") return [](Point x) { return x.x1 * x.x2; };
    if (desc == "abs_x") return [](Point x) { return std::hypot(x.x1, x.x2); };
    if (desc == "harmonic_r52")
        return [](Point x) {
            const double r = std::hypot(x.x1, x.x2);
            const double theta = std::atan2(x.x2, x.x1);
            return std::pow(r, 2.5) * std::sin(2.5 * theta);
        };
    const auto split = [&desc]() {
        std::vector<std::string> parts;
        std::stringstream ss(desc);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        return parts;
    }();
    if (split.size() == 2 && split[0] == "constant")
        return [v = std::stod(split[1])](Point) { return v; };
    if (split.size() == 2 && split[0] == "linear_xn")
        return [t = std::stod(split[1])](Point x) { return t * x.x2; };
    if (split.size() == 3 && split[0] == "radial_power")
        return [beta = std::stod(split[1]), c = std::stod(split[2])](Point x) {
            const double r = std::hypot(x.x1, x.x2);
            return r > 0.0 ? c * std::pow(r, beta) : 0.0;
        };
    throw ConfigError("/data", "unknown descriptor " + desc);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("/", e.what());
    }
    ExperimentConfig cfg;
    cfg.scenario_raw = j.value("scenario", "hopf");
    try {
        cfg.problem.scenario = scenario_from_name(cfg.scenario_raw);
    } catch (const std::exception& e) {
        throw ConfigError("/scenario", e.what());
    }
    if (j.contains("domain")) cfg.problem.domain = domain_from(j.at("domain"), "/domain");

    if (j.contains("operator")) {
        const json& op = j.at("operator");
        const double lam = num_or(op, "lambda", 1.0);
        const double Lam = num_or(op, "Lambda", lam);
        try {
            cfg.problem.ell = EllipticityPair(lam, Lam);
        } catch (const std::exception& e) {
            throw ConfigError("/operator", e.what());
        }
    }
    if (j.contains("data")) {
        const json& d = j.at("data");
        cfg.g_wall_desc = d.value("g_wall", cfg.g_wall_desc);
        cfg.g_sphere_desc = d.value("g_sphere", cfg.g_sphere_desc);
        cfg.f_desc = d.value("f", cfg.f_desc);
        if (d.contains("omega_g")) cfg.problem.omega_g = modulus_from(d.at("omega_g"), "/data/omega_g");
        if (d.contains("omega_f")) cfg.problem.omega_f = modulus_from(d.at("omega_f"), "/data/omega_f");
    }
    cfg.problem.g_wall = parse_descriptor(cfg.g_wall_desc);
    cfg.problem.g_sphere = parse_descriptor(cfg.g_sphere_desc);
    cfg.problem.f = parse_descriptor(cfg.f_desc);
    cfg.problem.f_handle = cfg.f_desc;

    if (j.contains("numerics")) {
        const json& n = j.at("numerics");
        cfg.problem.h = num_or(n, "h", cfg.problem.h);
        cfg.problem.W = int(num_or(n, "W", cfg.problem.W));
        cfg.problem.tol = num_or(n, "tol", cfg.problem.tol);
        cfg.problem.max_iter = long(num_or(n, "max_iter", double(cfg.problem.max_iter)));
        cfg.problem.workers = int(num_or(n, "workers", cfg.problem.workers));
        const std::string method = n.value("method", "auto");
        if (method == "auto") cfg.problem.method = SolveMethod::Auto;
        else if (method == "jacobi") cfg.problem.method = SolveMethod::Jacobi;
        else if (method == "policy") cfg.problem.method = SolveMethod::Policy;
        else throw ConfigError("/numerics/method", "unknown method " + method);
    }
    if (j.contains("probe")) {
        const json& p = j.at("probe");
        if (p.contains("l")) {
            cfg.problem.probe_l = {p.at("l").at(0).get<double>(), p.at("l").at(1).get<double>()};
            if (!(cfg.problem.probe_l.x2 > 0.0))
                throw ConfigError("/probe/l", "probe direction needs l2 > 0");
        }
        cfg.problem.K = int(num_or(p, "K", cfg.problem.K));
        cfg.problem.certify_c0 = num_or(p, "certify_c0", cfg.problem.certify_c0);
    }
    cfg.output_dir = j.value("output_dir", cfg.output_dir);

    if (j.contains("certify")) {
        const json& c = j.at("certify");
        cfg.has_certify = true;
        if (c.contains("omega")) cfg.certify_omega = modulus_from(c.at("omega"), "/certify/omega");
        cfg.certify_params.c0 = num_or(c, "c0", cfg.certify_params.c0);
        cfg.certify_params.eta = num_or(c, "eta", cfg.certify_params.eta);
        cfg.certify_params.alpha0 = num_or(c, "alpha0", cfg.certify_params.alpha0);
        cfg.certify_params.K = int(num_or(c, "K", cfg.certify_params.K));
        cfg.certify_sign = int(num_or(c, "sign", cfg.certify_sign));
        cfg.certify_a0 = num_or(c, "a0", cfg.certify_a0);
        if (c.contains("constants"))
            for (const auto& [k, v] : c.at("constants").items())
                cfg.certify_constants[k] = v.get<double>();
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("/", "cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["scenario"] = scenario_raw;
    json dom;
    dom["kind"] = problem.domain.kind_name();
    dom["R"] = problem.domain.radius();
    switch (problem.domain.kind()) {
        case DomainSpec::Kind::GraphExteriorMinus:
        case DomainSpec::Kind::GraphInteriorPlus:
            dom["omega"] = modulus_to_json(problem.domain.omega());
            break;
        case DomainSpec::Kind::Notch:
            dom["a"] = problem.domain.notch_offset();
            break;
        case DomainSpec::Kind::Wedge:
            dom["slope"] = problem.domain.wedge_slope();
            break;
        default:
            break;
    }
    j["domain"] = dom;
    j["operator"] = {{"lambda", problem.ell.lambda}, {"Lambda", problem.ell.Lambda}};
    j["data"] = {{"g_wall", g_wall_desc}, {"g_sphere", g_sphere_desc}, {"f", f_desc}};
    j["numerics"] = {{"h", problem.h},
                     {"W", problem.W},
                     {"tol", problem.tol},
                     {"max_iter", problem.max_iter},
                     {"workers", problem.workers},
                     {"method", problem.method == SolveMethod::Jacobi   ? "jacobi"
                                : problem.method == SolveMethod::Policy ? "policy"
                                                                        : "auto"}};
    j["probe"] = {{"l", {problem.probe_l.x1, problem.probe_l.x2}},
                  {"K", problem.K},
                  {"certify_c0", problem.certify_c0}};
    j["output_dir"] = output_dir;
    if (has_certify) {
        json c;
        c["omega"] = modulus_to_json(certify_omega);
        c["c0"] = certify_params.c0;
        c["eta"] = certify_params.eta;
        c["alpha0"] = certify_params.alpha0;
        c["K"] = certify_params.K;
        c["sign"] = certify_sign;
        c["a0"] = certify_a0;
        if (!certify_constants.empty()) c["constants"] = certify_constants;
        j["certify"] = c;
    }
    return j.dump(2);
}

}  // namespace puccilab
