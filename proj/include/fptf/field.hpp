#pragma once

#include <optional>
#include <vector>

#include "fptf/fpt.hpp"

namespace fptf {

/// Background potential in the Faber basis:
///   H = constant + sum_m Re-part of (alpha_m F_m + beta_m conj(F_m)).
/// The constant carries whatever additive term a Cartesian encoding drops.
struct Loading {
    std::vector<Complex> alpha;
    std::vector<Complex> beta;
    double constant = 0.0;

    int degree() const { return static_cast<int>(std::max(alpha.size(), beta.size())); }
    Complex alpha_at(int m) const;
    Complex beta_at(int m) const;
    void validate() const;
};

/// Expands a polynomial p(z) = sum p_j z^j in the Faber basis of the map
/// (triangular back-substitution against the monic F_n). Returns gamma with
/// p = sum gamma_n F_n, gamma[0] being the constant term.
std::vector<Complex> monomials_to_faber(const ConformalMap& map,
                                        const std::vector<Complex>& poly);

/// H = Im(p(z)) as a Loading (alpha_m = gamma_m/2i, beta_m = -conj(gamma_m)/2i).
Loading loading_from_imag_poly(const ConformalMap& map, const std::vector<Complex>& poly);

/// Preset H(x) = x_2.
Loading loading_uniform_x2(const ConformalMap& map);

/// Preset H(x) = x_1 x_2.
Loading loading_hyperbolic_x1x2(const ConformalMap& map);

/// Per-layer series coefficients for a fixed Loading. Layer j = 0..N+1 holds
/// truncated vectors for w^k, conj(w^k), w^-k, conj(w^-k) (k = 1..order).
struct LayerCoefficients {
    int order = 0;
    double constant = 0.0;
    /// [layer][k-1]; a1 multiplies w^k, b1 conj(w^k), a2 w^-k, b2 conj(w^-k).
    std::vector<Eigen::VectorXcd> a1, b1, a2, b2;
    double core_residual = 0.0;  // relative defect of the Grunsky trace relation
};

struct FieldSample {
    double x = 0.0, y = 0.0;
    double rho = 0.0, theta = 0.0;
    int layer = 0;
    double u = 0.0;
};

/// Transfer-matrix marching from the exterior expansion down to the core.
/// Throws InconsistentTruncation on order mismatch and ConsistencyFailure when
/// the core Grunsky residual exceeds 1e-6.
LayerCoefficients solve_coefficients(const LayeredStructure& s, const FptTable& t,
                                     const Loading& load);

/// Potential at the curvilinear point (rho, theta); requires rho >= log(r0).
double eval_field(const LayeredStructure& s, const LayerCoefficients& coeffs,
                  double rho, double theta);

/// Potential at a Cartesian point. Set in_core when z is known to lie in the
/// core; otherwise the map is inverted by Newton iteration and points that
/// land inside |w| < r0 raise OutOfDomain.
double eval_field_at(const LayeredStructure& s, const LayerCoefficients& coeffs,
                     Complex z, bool in_core = false);

/// Core evaluation through the Faber series (valid for z in the core).
double eval_core(const LayeredStructure& s, const LayerCoefficients& coeffs, Complex z);

/// Newton inversion of the map: finds w with Psi(w) = z, |w| >= r0.
std::optional<Complex> invert_map(const ConformalMap& map, Complex z);

/// Curvilinear samples Psi(e^{rho + i theta}) on a deterministic row-major
/// (rho outer, theta inner) grid; rho_lo must be >= log(r0).
std::vector<FieldSample> sample_grid(const LayeredStructure& s,
                                     const LayerCoefficients& coeffs,
                                     double rho_lo, double rho_hi,
                                     int rho_count, int theta_count);

/// Rectangular z-grid over the core bounding box, clipped to the core by a
/// winding test on the mapped boundary polygon.
std::vector<FieldSample> sample_core_grid(const LayeredStructure& s,
                                          const LayerCoefficients& coeffs,
                                          int nx, int ny);

}  // namespace fptf
