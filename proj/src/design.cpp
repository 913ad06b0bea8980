#include "fptf/design.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace fptf {

namespace {

LayeredStructure with_sigmas(const LayeredStructure& base, const std::vector<double>& sigma) {
    LayeredStructure s = base;
    for (size_t j = 0; j < sigma.size(); ++j) s.sigmas[j + 1] = sigma[j];
    return s;
}

/// Collapses regions whose conductivities coincide exactly: the separating
/// interface disappears and the inner region extends to the outer boundary.
/// An outermost region equal to the background is absorbed into the exterior.
/// Returns an empty optional when the whole structure merges away.
std::optional<LayeredStructure> merge_equal_layers(const LayeredStructure& s) {
    std::vector<double> bounds;   // outer boundary of each region
    std::vector<double> sig;
    sig.push_back(s.sigmas[0]);
    bounds.push_back(s.radius(0));
    for (int j = 1; j <= s.layer_count(); ++j) {
        if (s.sigmas[static_cast<size_t>(j)] == sig.back()) {
            bounds.back() = s.radius(j);  // drop the interface between equals
        } else {
            sig.push_back(s.sigmas[static_cast<size_t>(j)]);
            bounds.push_back(s.radius(j));
        }
    }
    while (!sig.empty() && sig.back() == 1.0) {
        sig.pop_back();
        bounds.pop_back();
    }
    if (sig.empty()) return std::nullopt;

    LayeredStructure out;
    out.map = s.map;
    out.map.r0 = bounds.front();
    out.radii.assign(bounds.begin() + 1, bounds.end());
    out.sigmas = sig;
    return out;
}

std::vector<double> from_log(const Eigen::VectorXd& x) {
    std::vector<double> sigma(static_cast<size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) sigma[static_cast<size_t>(i)] = std::exp(x(i));
    return sigma;
}

std::vector<double> diagnostics_at(const DesignProblem& p, const std::vector<double>& sigma) {
    std::vector<double> d;
    try {
        const FptTable t = fpt_multicoated(with_sigmas(p.base, sigma), p.k_trunc);
        for (int n = 1; n <= 5 && n <= t.order; ++n)
            d.push_back(diagnostic(t, n, t.order));
    } catch (const Error&) {
        // diagnostics are best-effort at infeasible points
    }
    return d;
}

}  // namespace

std::string to_string(DesignStatus s) {
    switch (s) {
        case DesignStatus::Converged: return "converged";
        case DesignStatus::Stalled: return "stalled";
        case DesignStatus::GridBest: return "grid-best";
    }
    return "unknown";
}

void DesignProblem::validate() const {
    if (target_order < 1) throw Error("design: target order M must be >= 1");
    if (free_count() < 1) throw Error("design: at least one coating layer is required");
    if (!(damping > 0.0 && damping < 1.0)) throw Error("design: damping must be in (0,1)");
    if (!(grid_lo > 0.0 && grid_lo < grid_hi)) throw Error("design: need 0 < grid_lo < grid_hi");
    if (grid_resolution < 2) throw Error("design: grid resolution must be >= 2");
    if (target_order > k_trunc) throw Error("design: M exceeds K_trunc");
    base.validate();
}

Eigen::VectorXd objective(const DesignProblem& p, const std::vector<double>& sigma) {
    const double pi = std::numbers::pi;
    const int M = p.target_order;
    for (double s : sigma)
        if (!(s > 0.0)) throw Error("objective: sigma must be positive");
    const auto merged = merge_equal_layers(with_sigmas(p.base, sigma));
    if (!merged) return Eigen::VectorXd::Zero(4 * M * M);  // background only
    const FptTable t = fpt_multicoated(*merged, p.k_trunc);

    Eigen::VectorXd f(4 * M * M);
    for (int k = 1; k <= M; ++k) {
        for (int m = 1; m <= M; ++m) {
            const int l = (k - 1) * M + m - 1;
            const double scale = 4.0 * pi * k;
            const Complex f1 = t.f1(m, k) / scale;
            const Complex f2 = t.f2(m, k) / scale;
            f(4 * l + 0) = f1.real();
            f(4 * l + 1) = f1.imag();
            f(4 * l + 2) = f2.real();
            f(4 * l + 3) = f2.imag();
        }
    }
    return f;
}

DesignResult newton_solve(const DesignProblem& p, const std::vector<double>& sigma_init) {
    p.validate();
    const int n = p.free_count();
    if (static_cast<int>(sigma_init.size()) != n)
        throw InfeasibleStart("newton_solve: wrong number of initial conductivities");

    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) {
        if (!(sigma_init[static_cast<size_t>(i)] > 0.0))
            throw InfeasibleStart("newton_solve: initial sigma must be positive");
        x(i) = std::log(sigma_init[static_cast<size_t>(i)]);
    }

    DesignResult res;
    Eigen::VectorXd f;
    try {
        f = objective(p, from_log(x));
    } catch (const Error& e) {
        throw InfeasibleStart(std::string("newton_solve: objective failed at start: ") + e.what());
    }

    const int dim = static_cast<int>(f.size());
    for (int it = 0; it < p.max_iterations; ++it) {
        // central-difference Jacobian in log-sigma coordinates
        Eigen::MatrixXd J(dim, n);
        for (int j = 0; j < n; ++j) {
            Eigen::VectorXd xp = x, xm = x;
            xp(j) += p.fd_step;
            xm(j) -= p.fd_step;
            Eigen::VectorXd fp, fm;
            try {
                fp = objective(p, from_log(xp));
                fm = objective(p, from_log(xm));
            } catch (const Error& e) {
                throw NonFiniteObjective(std::string("newton_solve: Jacobian evaluation failed: ") +
                                         e.what());
            }
            J.col(j) = (fp - fm) / (2.0 * p.fd_step);
        }

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& sv = svd.singularValues();
        const double cutoff = 1e-10 * (sv.size() > 0 ? sv(0) : 0.0);
        Eigen::VectorXd inv_sv = sv;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            inv_sv(i) = (sv(i) > cutoff && sv(i) > 0.0) ? 1.0 / sv(i) : 0.0;
        const Eigen::VectorXd step =
            p.damping * (svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose() * f);

        x -= step;
        try {
            f = objective(p, from_log(x));
        } catch (const Error& e) {
            throw NonFiniteObjective(std::string("newton_solve: objective failed mid-iteration: ") +
                                     e.what());
        }
        if (!f.allFinite())
            throw NonFiniteObjective("newton_solve: objective is non-finite");

        res.trace.push_back({it, f.norm(), step.norm()});
        if (f.norm() < 1e-8) {
            res.status = DesignStatus::Converged;
            break;
        }
        // The step norm floors around 1e-11 from central-difference noise in
        // the Jacobian, so the stationarity test must sit above that floor.
        if (step.norm() < 1e-9) {
            res.status = (p.mode == DesignMode::Minimize) ? DesignStatus::Converged
                                                          : DesignStatus::Stalled;
            break;
        }
    }

    res.sigma = from_log(x);
    res.objective_norm = f.norm();
    res.diagnostics = diagnostics_at(p, res.sigma);
    return res;
}

DesignResult grid_search(const DesignProblem& p) {
    p.validate();
    const int n = p.free_count();
    const int res_per_dim = p.grid_resolution;
    const double llo = std::log(p.grid_lo);
    const double lhi = std::log(p.grid_hi);

    std::vector<int> idx(static_cast<size_t>(n), 0);
    std::vector<int> best_idx;
    double best_norm = std::numeric_limits<double>::infinity();
    std::vector<double> best_sigma;

    const long total = static_cast<long>(std::pow(res_per_dim, n));
    for (long flat = 0; flat < total; ++flat) {
        long rem = flat;
        // lexicographic order: the last dimension varies fastest
        for (int j = n - 1; j >= 0; --j) {
            idx[static_cast<size_t>(j)] = static_cast<int>(rem % res_per_dim);
            rem /= res_per_dim;
        }
        std::vector<double> sigma(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j)
            sigma[static_cast<size_t>(j)] =
                std::exp(llo + (lhi - llo) * idx[static_cast<size_t>(j)] / (res_per_dim - 1.0));
        double norm;
        try {
            norm = objective(p, sigma).norm();
        } catch (const Error&) {
            continue;  // infeasible point scores +inf
        }
        if (norm < best_norm) {  // strict: first (lexicographically smallest) wins ties
            best_norm = norm;
            best_sigma = sigma;
            best_idx = idx;
        }
    }
    if (best_sigma.empty()) throw Error("grid_search: every grid point was infeasible");

    if (p.polish) {
        try {
            DesignResult polished = newton_solve(p, best_sigma);
            if (polished.objective_norm <= best_norm) {
                if (polished.status == DesignStatus::Stalled)
                    polished.status = DesignStatus::GridBest;
                return polished;
            }
        } catch (const Error&) {
            // fall through to the raw grid minimum
        }
    }

    DesignResult r;
    r.sigma = best_sigma;
    r.objective_norm = best_norm;
    r.diagnostics = diagnostics_at(p, best_sigma);
    r.status = DesignStatus::GridBest;
    return r;
}

}  // namespace fptf
