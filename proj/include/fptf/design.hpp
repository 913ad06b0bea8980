#pragma once

#include <string>
#include <vector>

#include "fptf/fpt.hpp"

namespace fptf {

enum class DesignMode { Vanish, Minimize };
enum class DesignStatus { Converged, Stalled, GridBest };

/// Layer-conductivity design: the map, radii and sigma_0 are fixed; the free
/// parameters are sigma_1..sigma_N. The objective stacks Re/Im of the scaled
/// FPT entries F^(s)_mk / (4 pi k) for 1 <= m,k <= M into a 4M^2 vector.
struct DesignProblem {
    LayeredStructure base;   // sigmas[1..N] act as placeholders
    int target_order = 1;    // M
    DesignMode mode = DesignMode::Minimize;
    int k_trunc = 50;

    double damping = 0.5;           // Newton step factor in (0,1)
    int max_iterations = 200;
    double fd_step = 1e-6;          // central-difference step in log sigma
    double grid_lo = 0.01, grid_hi = 10.0;
    int grid_resolution = 40;       // points per dimension
    bool polish = true;             // run Newton from the best grid point

    int free_count() const { return base.layer_count(); }
    void validate() const;
};

struct DesignTracePoint {
    int iteration = 0;
    double objective_norm = 0.0;
    double step_norm = 0.0;
};

struct DesignResult {
    std::vector<double> sigma;            // sigma_1..sigma_N at the returned point
    double objective_norm = 0.0;
    std::vector<double> diagnostics;      // F_n^K for n = 1..5 at sigma
    std::vector<DesignTracePoint> trace;
    DesignStatus status = DesignStatus::Stalled;
};

std::string to_string(DesignStatus s);

/// Objective vector f(sigma) of length 4 M^2; entries ordered per mode pair
/// (m, k) with l = (k-1)M + m - 1 as (Re F1, Im F1, Re F2, Im F2) / (4 pi k).
Eigen::VectorXd objective(const DesignProblem& p, const std::vector<double>& sigma);

/// Damped Gauss-Newton in log-sigma coordinates with an SVD pseudo-inverse
/// Jacobian (cutoff 1e-10 s_max). Vanish mode converges on ||f|| < 1e-8;
/// Minimize mode also accepts a stationary point (step norm < 1e-9).
DesignResult newton_solve(const DesignProblem& p, const std::vector<double>& sigma_init);

/// Exhaustive search on a log-equidistant product grid; failures score +inf.
/// Ties break to the lexicographically smallest index. Optionally polished.
DesignResult grid_search(const DesignProblem& p);

}  // namespace fptf
