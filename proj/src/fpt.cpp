#include "fptf/fpt.hpp"

#include <cmath>
#include <numbers>

namespace fptf {

namespace {

constexpr double kPivotRatioLimit = 1e8;

double dominance_margin_of(const Eigen::MatrixXcd& M) {
    // M = conj(X) X; rows of I - M are checked for diagonal dominance.
    const int n = static_cast<int>(M.rows());
    double margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        double offsum = 0.0;
        for (int l = 0; l < n; ++l)
            if (l != k) offsum += std::abs(M(k, l));
        const double diag = std::abs(1.0 - M(k, k));
        margin = std::min(margin, 1.0 - offsum / diag);
    }
    return margin;
}

/// Solves F (I - M) = R for F by LU on the transposed system.
Eigen::MatrixXcd solve_right(const Eigen::MatrixXcd& M, const Eigen::MatrixXcd& R) {
    const int n = static_cast<int>(M.rows());
    Eigen::MatrixXcd lhs = (Eigen::MatrixXcd::Identity(n, n) - M).transpose();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(lhs);
    const Eigen::VectorXcd diag = lu.matrixLU().diagonal();
    const double dmax = diag.cwiseAbs().maxCoeff();
    const double dmin = diag.cwiseAbs().minCoeff();
    if (!(dmin > 0.0) || dmax / dmin > kPivotRatioLimit)
        throw IllConditionedSystem("FPT solve: LU pivot ratio exceeds 1e8");
    return lu.solve(R.transpose()).transpose();
}

}  // namespace

double contrast_lambda(double sigma0) {
    if (!(sigma0 > 0.0)) throw Error("sigma0 must be positive");
    if (sigma0 == 1.0) throw Error("sigma0 = 1 gives no inclusion");
    return (sigma0 + 1.0) / (2.0 * (sigma0 - 1.0));
}

FptTable fpt_multicoated(const LayeredStructure& s, int k_trunc) {
    const double pi = std::numbers::pi;
    const int n = k_trunc;

    FptTable t;
    t.order = n;
    t.grunsky = grunsky(s.map, n);
    const Eigen::MatrixXcd& C = t.grunsky.entries;
    const TransferDiagonals td = transfer_diagonals(s, n);

    Eigen::VectorXcd d1 = Eigen::Map<const Eigen::VectorXd>(td.d1.data(), n).cast<Complex>();
    Eigen::VectorXcd d2 = Eigen::Map<const Eigen::VectorXd>(td.d2.data(), n).cast<Complex>();
    Eigen::VectorXcd d3 = Eigen::Map<const Eigen::VectorXd>(td.d3.data(), n).cast<Complex>();
    Eigen::VectorXcd d4 = Eigen::Map<const Eigen::VectorXd>(td.d4.data(), n).cast<Complex>();
    const Eigen::VectorXcd d4inv = d4.cwiseInverse();

    // Ratio forms: D2 C D4^-1 and D1 C D4^-1 stay bounded even when d3 grows.
    Eigen::MatrixXcd X = d2.asDiagonal() * C * d4inv.asDiagonal();
    Eigen::MatrixXcd D1CD4 = d1.asDiagonal() * C * d4inv.asDiagonal();
    Eigen::MatrixXcd Bplus = d3.cwiseProduct(d4inv).asDiagonal();
    Bplus -= C.conjugate() * X;                     // (D3 - conj(C) D2 C) D4^-1
    Eigen::MatrixXcd Bminus = C - D1CD4;            // (C D4 - D1 C) D4^-1

    t.Xplus = X;
    t.Xminus = -X;
    t.Yplus = Bplus + Bminus;
    t.Yminus = Bplus - Bminus;

    // conj(X+-) X+- is sign-independent; one factorization serves both solves.
    const Eigen::MatrixXcd M = X.conjugate() * X;
    t.dominance_margin = dominance_margin_of(M);

    t.Fplus = solve_right(M, t.Yplus + t.Yplus.conjugate() * t.Xplus);
    t.Fminus = solve_right(M, t.Yminus + t.Yminus.conjugate() * t.Xminus);

    Eigen::VectorXd colscale(n);
    for (int k = 1; k <= n; ++k) colscale(k - 1) = 2.0 * pi * k;
    t.F1 = (t.Fplus - t.Fminus) * colscale.asDiagonal();
    t.F2 = (t.Fplus + t.Fminus).conjugate() * colscale.asDiagonal();
    return t;
}

FptTable fpt_single(const ConformalMap& map, double sigma0, int k_trunc) {
    return fpt_single_tau(map, 2.0 * contrast_lambda(sigma0), k_trunc);
}

FptTable fpt_single_tau(const ConformalMap& map, double tau, int k_trunc) {
    const double pi = std::numbers::pi;
    const int n = k_trunc;
    const double r = map.r0;

    FptTable t;
    t.order = n;
    t.grunsky = grunsky(map, n);
    const Eigen::MatrixXcd& C = t.grunsky.entries;

    Eigen::VectorXcd rminus(n), rplus(n);
    for (int k = 1; k <= n; ++k) {
        rplus(k - 1) = std::pow(r, 2.0 * k);
        rminus(k - 1) = 1.0 / rplus(k - 1);
    }

    const Eigen::MatrixXcd RmC = rminus.asDiagonal() * C;
    const Eigen::MatrixXcd A =
        tau * tau * Eigen::MatrixXcd::Identity(n, n) - RmC.conjugate() * RmC;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const Eigen::VectorXcd diag = lu.matrixLU().diagonal();
    if (!(diag.cwiseAbs().minCoeff() > 0.0) ||
        diag.cwiseAbs().maxCoeff() / diag.cwiseAbs().minCoeff() > kPivotRatioLimit)
        throw IllConditionedSystem("fpt_single: LU pivot ratio exceeds 1e8");
    const Eigen::MatrixXcd Ainv = lu.solve(Eigen::MatrixXcd::Identity(n, n));

    Eigen::VectorXd colscale(n);
    for (int k = 1; k <= n; ++k) colscale(k - 1) = 4.0 * pi * k;

    const double om = 1.0 - tau * tau;
    Eigen::VectorXcd colscalec = colscale.cast<Complex>();
    t.F1 = (C + om * C * Ainv) * colscalec.asDiagonal();
    t.F2 = tau * (rplus.asDiagonal() *
                  (Eigen::MatrixXcd::Identity(n, n) + om * Ainv.conjugate()) *
                  colscalec.asDiagonal());

    // Intermediates of the N = 0 reduction, kept for structural tests.
    t.Xplus = RmC / tau;
    t.Xminus = -t.Xplus;
    t.Yplus = (Eigen::MatrixXcd(rplus.asDiagonal()) - C.conjugate() * RmC) / tau;
    t.Yminus = t.Yplus;
    t.dominance_margin = dominance_margin_of(t.Xplus.conjugate() * t.Xplus);

    t.Fplus.resize(n, n);
    t.Fminus.resize(n, n);
    for (int m = 0; m < n; ++m) {
        for (int k = 0; k < n; ++k) {
            const double s = colscale(k);
            t.Fplus(m, k) = (t.F1(m, k) + std::conj(t.F2(m, k))) / s;
            t.Fminus(m, k) = -(t.F1(m, k) - std::conj(t.F2(m, k))) / s;
        }
    }
    return t;
}

std::pair<Complex, Complex> fpt_ellipse_oracle(Complex a1, double r, double lambda,
                                               int m, int k) {
    const double pi = std::numbers::pi;
    if (m != k) return {Complex(0.0, 0.0), Complex(0.0, 0.0)};
    const double r4m = std::pow(r, 4.0 * m);
    const double den = lambda * lambda - std::pow(std::abs(a1), 2.0 * m) / (4.0 * r4m);
    if (den == 0.0)
        throw SingularContrast("fpt_ellipse_oracle: resonance denominator vanishes");
    const Complex a1m = std::pow(a1, m);
    const double quart = 0.25 - lambda * lambda;
    const double r2m = std::pow(r, 2.0 * m);
    // Diagonal resolvent coefficients of the two-dimensional invariant block:
    // b_mm = a1^m / den, a_mm = 2 lambda r^2m / den.
    const Complex f1 = 4.0 * pi * (static_cast<double>(m) * a1m +
                                   static_cast<double>(k) * quart * a1m / den);
    const Complex f2 = 4.0 * pi * (2.0 * m * lambda * r2m +
                                   static_cast<double>(k) * quart * 2.0 * lambda * r2m / den);
    return {f1, f2};
}

Eigen::Matrix2d polarization_tensor(const FptTable& t) {
    if (t.order < 1) throw Error("polarization_tensor: table order must be >= 1");
    const Complex f1 = t.f1(1, 1);
    const Complex f2 = t.f2(1, 1);
    Eigen::Matrix2d M;
    M(0, 0) = (f2.real() + f1.real()) / 2.0;
    M(1, 1) = (f2.real() - f1.real()) / 2.0;
    M(0, 1) = M(1, 0) = f1.imag() / 2.0;
    return M;
}

double diagnostic(const FptTable& t, int n, int K) {
    if (n < 1 || n > K || K > t.order)
        throw Error("diagnostic: need 1 <= n <= K <= table order");
    const double pi = std::numbers::pi;
    double s = 0.0;
    for (int k = 1; k <= K; ++k) {
        const double scale = 4.0 * pi * k;
        s += std::norm(t.f1(n, k) / scale) + std::norm(t.f2(n, k) / scale);
    }
    return std::sqrt(s);
}

}  // namespace fptf
