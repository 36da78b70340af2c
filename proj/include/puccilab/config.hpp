#pragma once

#include <string>

#include "puccilab/certify.hpp"
#include "puccilab/harness.hpp"

namespace puccilab {

// Versionable experiment description; see docs in README for the schema.
struct ExperimentConfig {
    ProblemSpec problem;
    std::string scenario_raw;
    std::string g_wall_desc = "zero";
    std::string g_sphere_desc = "one";
    std::string f_desc = "zero";
    std::string output_dir = "out";

    // certify block
    Modulus certify_omega = Modulus::zero();
    IterationParams certify_params;
    int certify_sign = +1;
    double certify_a0 = 1.0;
    std::map<std::string, double> certify_constants;
    bool has_certify = false;

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig from_file(const std::string& path);
    std::string to_json() const;
};

// Boundary/source descriptor vocabulary: zero | one | constant:<v> |
// linear_xn:<t> | harmonic_xy | harmonic_r52 | abs_x | radial_power:<beta>:<c>
std::function<double(Point)> parse_descriptor(const std::string& desc);

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& pointer, const std::string& what)
        : std::runtime_error(what + " (at " + pointer + ")"), json_pointer(pointer) {}
    std::string json_pointer;
};

}  // namespace puccilab
