#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "fptf/errors.hpp"

namespace fptf {

using Complex = std::complex<double>;

/// Exterior conformal map  Psi(w) = w + a0 + a_1/w + a_2/w^2 + ...
/// from {|w| > r0} onto the complement of the inclusion. The Laurent tail is
/// a finite list; coefficients beyond a.size() are zero.
struct ConformalMap {
    double r0 = 1.0;
    Complex a0{0.0, 0.0};
    std::vector<Complex> a;

    /// Laurent coefficient a_n for n >= 1 (zero beyond the stored tail).
    Complex coeff(int n) const {
        if (n < 1 || n > static_cast<int>(a.size())) return {0.0, 0.0};
        return a[static_cast<size_t>(n - 1)];
    }

    /// Throws NonUnivalentMap / Error on invalid parameters.
    void validate() const;
};

/// Truncated Grunsky matrix c_mk, 1 <= m,k <= order (stored zero-based).
struct GrunskyMatrix {
    int order = 0;
    Eigen::MatrixXcd entries;

    Complex operator()(int m, int k) const { return entries(m - 1, k - 1); }
};

/// Evaluates the map at w. Requires |w| > r0; pass allow_boundary = true to
/// sample on |w| = r0.
Complex map_eval(const ConformalMap& map, Complex w, bool allow_boundary = false);

/// Derivative Psi'(w), used by the Newton inversion in the field module.
Complex map_deriv(const ConformalMap& map, Complex w);

/// Grunsky coefficients of the map, via the classical recursion
///   c_{m,k+1} = c_{m+1,k} - a_{m+k} + sum_{s<m} a_{m-s} c_{sk} - sum_{s<k} a_{k-s} c_{ms}
/// with c_{1n} = a_n and c_{n1} = n a_n. Filled along anti-diagonals.
GrunskyMatrix grunsky(const ConformalMap& map, int k_trunc);

/// Monic Faber polynomials F_0..F_m_max as coefficient vectors in z
/// (coeffs[n][j] is the z^j coefficient of F_n).
std::vector<std::vector<Complex>> faber_coeffs(const ConformalMap& map, int m_max);

/// Evaluates F_n(z) from a coefficient table produced by faber_coeffs.
Complex faber_eval(const std::vector<Complex>& poly, Complex z);

/// Area enclosed by the image boundary: pi r0^2 - pi sum k |a_k|^2 / r0^{2k}.
/// Throws NonUnivalentMap when the result is nonpositive.
double area(const ConformalMap& map);

/// Largest N with a_n = 0 (tol 1e-14) for all n != -1 (mod N); 1 when none.
int symmetry_order(const ConformalMap& map);

}  // namespace fptf
