#pragma once

#include <Eigen/Dense>

#include "fptf/structure.hpp"

namespace fptf {

/// Truncated FPT matrices F1 = F^(1)_mk, F2 = F^(2)_mk together with the
/// intermediates of the transfer-matrix solve. Entries are one-based through
/// the accessors; storage is zero-based Eigen.
struct FptTable {
    int order = 0;
    Eigen::MatrixXcd F1, F2;
    Eigen::MatrixXcd Fplus, Fminus;
    Eigen::MatrixXcd Xplus, Xminus;
    Eigen::MatrixXcd Yplus, Yminus;
    GrunskyMatrix grunsky;
    /// min over rows of 1 - sum_{l != k} |M_kl| / |1 - M_kk| with M = conj(X)X;
    /// negative means the truncated system is not diagonally dominant.
    double dominance_margin = 0.0;

    Complex f1(int m, int k) const { return F1(m - 1, k - 1); }
    Complex f2(int m, int k) const { return F2(m - 1, k - 1); }
};

/// FPTs of a multi-coated structure via the transfer-matrix system:
/// X+- = +-D2 C D4^-1, Y+- = [D3 - conj(C) D2 C +- (C D4 - D1 C)] D4^-1,
/// F+- solves F+- (I - conj(X+-) X+-) = Y+- + conj(Y+-) X+-,
/// F^(1)_mk = 2 pi k (F+ - F-)_mk, F^(2)_mk = 2 pi k conj(F+ + F-)_mk.
FptTable fpt_multicoated(const LayeredStructure& s, int k_trunc);

/// FPTs of a simply connected inclusion with conductivity sigma0 from the
/// closed-form reduction of the N = 0 system (tau = 2 lambda):
/// F^(1) = 4 pi k C + 4 pi k (1 - tau^2) C A^-1,
/// F^(2) = 4 pi k tau r^2m conj[delta + (1 - tau^2) A^-1],
/// with A = tau^2 I - r^-2N conj(C) r^-2N C.
FptTable fpt_single(const ConformalMap& map, double sigma0, int k_trunc);

/// Same reduction parameterized by tau directly; tau = +-1 gives the exact
/// lambda = +-1/2 limit (F^(1) = 4 pi k c_mk, F^(2) diagonal).
FptTable fpt_single_tau(const ConformalMap& map, double tau, int k_trunc);

/// Diagonal closed forms for the ellipse map Psi(w) = w + a1/w; returns
/// (F^(1)_mk, F^(2)_mk), zero off the diagonal. Throws SingularContrast when
/// lambda^2 = |a1|^2m / (4 r^4m).
std::pair<Complex, Complex> fpt_ellipse_oracle(Complex a1, double r, double lambda,
                                               int m, int k);

/// First-order 2x2 polarization tensor recovered from F_11 entries.
Eigen::Matrix2d polarization_tensor(const FptTable& t);

/// Cloaking diagnostic F_n^K = sqrt(sum_{k<=K} |F1_nk/(4 pi k)|^2 + |F2_nk/(4 pi k)|^2).
double diagnostic(const FptTable& t, int n, int K);

/// lambda = (sigma0 + 1) / (2 (sigma0 - 1)).
double contrast_lambda(double sigma0);

}  // namespace fptf
