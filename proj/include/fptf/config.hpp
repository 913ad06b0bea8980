#pragma once

#include <string>
#include <vector>

#include "fptf/design.hpp"
#include "fptf/field.hpp"

namespace fptf {

struct FieldSpec {
    double rho_min = 0.0;
    double rho_max = 1.0;
    int rho_count = 40;
    int theta_count = 128;
    bool core = false;  // also sample the core on a clipped rectangular grid
    int core_nx = 64;
    int core_ny = 64;
};

struct DesignSpec {
    int target_order = 1;
    std::string mode = "minimize";   // "vanish" | "minimize"
    std::string solver = "auto";     // "newton" | "grid" | "auto"
    double damping = 0.5;
    int max_iterations = 200;
    double grid_lo = 0.01;
    double grid_hi = 10.0;
    int grid_resolution = 40;
    bool polish = true;
    std::vector<double> init;        // Newton start; defaults to current sigmas
};

struct OutputSpec {
    std::string format = "csv";      // "csv" | "json"
    std::string path;                // empty: stdout
};

/// Parsed CLI configuration; mirrors the JSON schema documented in the README.
struct Config {
    ConformalMap map;
    double sigma0 = 1.0;
    std::vector<double> layer_radii;
    std::vector<double> layer_sigmas;
    int truncation = 50;

    std::string loading_type = "uniform-x2";  // "faber" | "uniform-x2" | "hyperbolic-x1x2"
    std::vector<Complex> loading_alpha, loading_beta;

    FieldSpec field;
    DesignSpec design;
    OutputSpec output;

    LayeredStructure structure() const;
    Loading loading() const;
    DesignProblem design_problem() const;
};

/// Parses a JSON config file. Throws ConfigError with a field-precise message.
Config load_config(const std::string& path);
Config parse_config(const std::string& json_text, const std::string& origin = "<config>");

/// 17-significant-digit decimal formatting (round-trips doubles exactly).
std::string format_double(double v);

}  // namespace fptf
