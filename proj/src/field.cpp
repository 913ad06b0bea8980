#include "fptf/field.hpp"

#include <cmath>
#include <numbers>

namespace fptf {

namespace {
constexpr double kCoreResidualLimit = 1e-6;
}

Complex Loading::alpha_at(int m) const {
    if (m < 1 || m > static_cast<int>(alpha.size())) return {0.0, 0.0};
    return alpha[static_cast<size_t>(m - 1)];
}

Complex Loading::beta_at(int m) const {
    if (m < 1 || m > static_cast<int>(beta.size())) return {0.0, 0.0};
    return beta[static_cast<size_t>(m - 1)];
}

void Loading::validate() const {
    for (const Complex& c : alpha)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw Error("loading: non-finite coefficient");
    for (const Complex& c : beta)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw Error("loading: non-finite coefficient");
    bool nonzero = false;
    for (const Complex& c : alpha) nonzero = nonzero || c != Complex(0.0, 0.0);
    for (const Complex& c : beta) nonzero = nonzero || c != Complex(0.0, 0.0);
    if (!nonzero) throw Error("loading: all coefficients are zero");
}

std::vector<Complex> monomials_to_faber(const ConformalMap& map,
                                        const std::vector<Complex>& poly) {
    const int deg = static_cast<int>(poly.size()) - 1;
    if (deg < 0) return {};
    const auto F = faber_coeffs(map, deg);
    std::vector<Complex> rem = poly;
    std::vector<Complex> gamma(static_cast<size_t>(deg) + 1, Complex(0.0, 0.0));
    // F_n is monic of degree n, so peel off leading terms from the top.
    for (int nn = deg; nn >= 0; --nn) {
        const Complex g = rem[static_cast<size_t>(nn)];
        gamma[static_cast<size_t>(nn)] = g;
        const auto& Fn = F[static_cast<size_t>(nn)];
        for (size_t j = 0; j < Fn.size(); ++j) rem[j] -= g * Fn[j];
    }
    return gamma;
}

Loading loading_from_imag_poly(const ConformalMap& map, const std::vector<Complex>& poly) {
    const auto gamma = monomials_to_faber(map, poly);
    Loading load;
    const Complex twoi(0.0, 2.0);
    for (size_t n = 1; n < gamma.size(); ++n) {
        load.alpha.push_back(gamma[n] / twoi);
        load.beta.push_back(-std::conj(gamma[n]) / twoi);
    }
    if (!gamma.empty()) load.constant = gamma[0].imag();
    load.validate();
    return load;
}

Loading loading_uniform_x2(const ConformalMap& map) {
    // x_2 = Im(z)
    return loading_from_imag_poly(map, {Complex(0.0, 0.0), Complex(1.0, 0.0)});
}

Loading loading_hyperbolic_x1x2(const ConformalMap& map) {
    // x_1 x_2 = Im(z^2) / 2
    return loading_from_imag_poly(map, {Complex(0.0, 0.0), Complex(0.0, 0.0),
                                        Complex(0.5, 0.0)});
}

LayerCoefficients solve_coefficients(const LayeredStructure& s, const FptTable& t,
                                     const Loading& load) {
    load.validate();
    const int K = t.order;
    if (t.grunsky.order != K)
        throw InconsistentTruncation("solve_coefficients: table truncation mismatch");
    if (load.degree() > K)
        throw InconsistentTruncation("solve_coefficients: loading degree exceeds K_trunc");
    const int N = s.layer_count();
    const double pi = std::numbers::pi;
    const std::vector<double> tau = contrasts(s);
    const Eigen::MatrixXcd& C = t.grunsky.entries;

    LayerCoefficients lc;
    lc.order = K;
    lc.constant = load.constant;
    lc.a1.assign(static_cast<size_t>(N) + 2, Eigen::VectorXcd::Zero(K));
    lc.b1 = lc.a1;
    lc.a2 = lc.a1;
    lc.b2 = lc.a1;

    // Exterior expansion: the loading supplies the w^k part, the FPTs the
    // perturbation in w^-k and conj(w^-k).
    const size_t ext = static_cast<size_t>(N) + 1;
    for (int k = 1; k <= K; ++k) {
        lc.a1[ext](k - 1) = load.alpha_at(k);
        lc.b1[ext](k - 1) = load.beta_at(k);
        Complex a2{0.0, 0.0}, b2{0.0, 0.0};
        const double scale = 4.0 * pi * k;
        for (int m = 1; m <= load.degree(); ++m) {
            const Complex am = load.alpha_at(m);
            const Complex bm = load.beta_at(m);
            const Complex pert1 = C(m - 1, k - 1) - t.F1(m - 1, k - 1) / scale;
            const Complex pert2 = -t.F2(m - 1, k - 1) / scale;
            a2 += am * pert1 + bm * std::conj(pert2);
            b2 += am * pert2 + bm * std::conj(pert1);
        }
        lc.a2[ext](k - 1) = a2;
        lc.b2[ext](k - 1) = b2;
    }

    // March inward across each interface; the per-mode transfer matrix is real,
    // so the (a1, b2) and (b1, a2) pairs transform identically.
    for (int j = N; j >= 0; --j) {
        const double cj = (s.sigma(j) - s.sigma(j + 1)) / (2.0 * s.sigma(j));
        const double rj = s.radius(j);
        const size_t up = static_cast<size_t>(j) + 1;
        const size_t lo = static_cast<size_t>(j);
        for (int k = 1; k <= K; ++k) {
            const double r2k = std::pow(rj, 2.0 * k);
            const double t11 = tau[lo];
            lc.a1[lo](k - 1) = cj * (t11 * lc.a1[up](k - 1) + lc.b2[up](k - 1) / r2k);
            lc.b2[lo](k - 1) = cj * (r2k * lc.a1[up](k - 1) + t11 * lc.b2[up](k - 1));
            lc.b1[lo](k - 1) = cj * (t11 * lc.b1[up](k - 1) + lc.a2[up](k - 1) / r2k);
            lc.a2[lo](k - 1) = cj * (r2k * lc.b1[up](k - 1) + t11 * lc.a2[up](k - 1));
        }
    }

    // Core self-check: the w^-k trace of the core Faber series must reproduce
    // the marched coefficients through the Grunsky matrix.
    const Eigen::VectorXcd a2_ref = C.transpose() * lc.a1[0];
    const Eigen::VectorXcd b2_ref = C.conjugate().transpose() * lc.b1[0];
    const double denom = std::max({lc.a1[0].norm(), lc.b1[0].norm(),
                                   lc.a2[0].norm(), lc.b2[0].norm(), 1e-300});
    lc.core_residual = std::max((lc.a2[0] - a2_ref).norm(), (lc.b2[0] - b2_ref).norm()) / denom;
    if (lc.core_residual > kCoreResidualLimit)
        throw ConsistencyFailure("solve_coefficients: core residual " +
                                 std::to_string(lc.core_residual) +
                                 " exceeds 1e-6; increase K_trunc");
    return lc;
}

namespace {

int locate_layer(const LayeredStructure& s, double rho) {
    const double rho0 = std::log(s.map.r0);
    if (rho < rho0 - 1e-12)
        throw OutOfDomain("eval_field: rho below the core boundary");
    const int N = s.layer_count();
    for (int j = 1; j <= N; ++j)
        if (rho <= std::log(s.radius(j))) return j;
    return N + 1;
}

double eval_series(const LayerCoefficients& coeffs, int layer, Complex w) {
    const Eigen::VectorXcd& a1 = coeffs.a1[static_cast<size_t>(layer)];
    const Eigen::VectorXcd& b1 = coeffs.b1[static_cast<size_t>(layer)];
    const Eigen::VectorXcd& a2 = coeffs.a2[static_cast<size_t>(layer)];
    const Eigen::VectorXcd& b2 = coeffs.b2[static_cast<size_t>(layer)];
    Complex wp = 1.0, wn = 1.0;
    const Complex winv = 1.0 / w;
    Complex sum{0.0, 0.0};
    for (int k = 1; k <= coeffs.order; ++k) {
        wp *= w;
        wn *= winv;
        sum += a1(k - 1) * wp + b1(k - 1) * std::conj(wp) +
               a2(k - 1) * wn + b2(k - 1) * std::conj(wn);
    }
    return coeffs.constant + sum.real();
}

}  // namespace

double eval_field(const LayeredStructure& s, const LayerCoefficients& coeffs,
                  double rho, double theta) {
    const int layer = locate_layer(s, rho);
    const Complex w = std::exp(Complex(rho, theta));
    return eval_series(coeffs, layer, w);
}

double eval_core(const LayeredStructure& s, const LayerCoefficients& coeffs, Complex z) {
    const auto F = faber_coeffs(s.map, coeffs.order);
    Complex sum{0.0, 0.0};
    for (int k = 1; k <= coeffs.order; ++k) {
        const Complex fk = faber_eval(F[static_cast<size_t>(k)], z);
        sum += coeffs.a1[0](k - 1) * fk + coeffs.b1[0](k - 1) * std::conj(fk);
    }
    return coeffs.constant + sum.real();
}

std::optional<Complex> invert_map(const ConformalMap& map, Complex z) {
    Complex w = z - map.a0;
    if (std::abs(w) < map.r0) w = map.r0 * (w == Complex(0.0, 0.0) ? 1.0 : w / std::abs(w));
    for (int it = 0; it < 30; ++it) {
        const Complex f = map_eval(map, w, true) - z;
        if (std::abs(f) < 1e-12) return w;
        const Complex d = map_deriv(map, w);
        if (d == Complex(0.0, 0.0)) return std::nullopt;
        Complex next = w - f / d;
        if (std::abs(next) < map.r0) next = map.r0 * next / std::abs(next);
        w = next;
    }
    if (std::abs(map_eval(map, w, true) - z) < 1e-10) return w;
    return std::nullopt;
}

double eval_field_at(const LayeredStructure& s, const LayerCoefficients& coeffs,
                     Complex z, bool in_core) {
    if (in_core) return eval_core(s, coeffs, z);
    const auto w = invert_map(s.map, z);
    if (!w) throw OutOfDomain("eval_field_at: map inversion failed (point may be in the core)");
    if (std::abs(*w) < s.map.r0 * (1.0 - 1e-10))
        throw OutOfDomain("eval_field_at: point is inside the core; pass in_core");
    return eval_field(s, coeffs, std::log(std::abs(*w)), std::arg(*w));
}

std::vector<FieldSample> sample_grid(const LayeredStructure& s,
                                     const LayerCoefficients& coeffs,
                                     double rho_lo, double rho_hi,
                                     int rho_count, int theta_count) {
    const double rho0 = std::log(s.map.r0);
    if (rho_lo < rho0 - 1e-12)
        throw OutOfDomain("sample_grid: rho range extends below the core boundary");
    if (rho_count < 1 || theta_count < 1) throw Error("sample_grid: counts must be >= 1");
    if (rho_hi < rho_lo) throw Error("sample_grid: empty rho range");

    std::vector<FieldSample> out;
    out.reserve(static_cast<size_t>(rho_count) * static_cast<size_t>(theta_count));
    const double pi = std::numbers::pi;
    for (int i = 0; i < rho_count; ++i) {
        const double rho =
            (rho_count == 1) ? rho_lo
                             : rho_lo + (rho_hi - rho_lo) * i / (rho_count - 1.0);
        const int layer = locate_layer(s, rho);
        for (int j = 0; j < theta_count; ++j) {
            const double theta = 2.0 * pi * j / theta_count;
            const Complex w = std::exp(Complex(rho, theta));
            const Complex z = map_eval(s.map, w, true);
            FieldSample fs;
            fs.x = z.real();
            fs.y = z.imag();
            fs.rho = rho;
            fs.theta = theta;
            fs.layer = layer;
            fs.u = eval_series(coeffs, layer, w);
            out.push_back(fs);
        }
    }
    return out;
}

std::vector<FieldSample> sample_core_grid(const LayeredStructure& s,
                                          const LayerCoefficients& coeffs,
                                          int nx, int ny) {
    if (nx < 2 || ny < 2) throw Error("sample_core_grid: counts must be >= 2");
    const double pi = std::numbers::pi;
    const int nb = 720;
    std::vector<Complex> poly(static_cast<size_t>(nb));
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (int i = 0; i < nb; ++i) {
        const double th = 2.0 * pi * i / nb;
        const Complex z = map_eval(s.map, s.map.r0 * std::exp(Complex(0.0, th)), true);
        poly[static_cast<size_t>(i)] = z;
        xmin = std::min(xmin, z.real());
        xmax = std::max(xmax, z.real());
        ymin = std::min(ymin, z.imag());
        ymax = std::max(ymax, z.imag());
    }
    auto inside = [&](double px, double py) {
        // even-odd crossing test against the mapped boundary polygon
        bool in = false;
        for (int i = 0, j = nb - 1; i < nb; j = i++) {
            const Complex& zi = poly[static_cast<size_t>(i)];
            const Complex& zj = poly[static_cast<size_t>(j)];
            if ((zi.imag() > py) != (zj.imag() > py)) {
                const double xint = zj.real() + (py - zj.imag()) / (zi.imag() - zj.imag()) *
                                                    (zi.real() - zj.real());
                if (px < xint) in = !in;
            }
        }
        return in;
    };

    const auto F = faber_coeffs(s.map, coeffs.order);
    std::vector<FieldSample> out;
    for (int iy = 0; iy < ny; ++iy) {
        const double y = ymin + (ymax - ymin) * iy / (ny - 1.0);
        for (int ix = 0; ix < nx; ++ix) {
            const double x = xmin + (xmax - xmin) * ix / (nx - 1.0);
            if (!inside(x, y)) continue;
            const Complex z(x, y);
            Complex sum{0.0, 0.0};
            for (int k = 1; k <= coeffs.order; ++k) {
                const Complex fk = faber_eval(F[static_cast<size_t>(k)], z);
                sum += coeffs.a1[0](k - 1) * fk + coeffs.b1[0](k - 1) * std::conj(fk);
            }
            FieldSample fs;
            fs.x = x;
            fs.y = y;
            fs.rho = std::log(s.map.r0);
            fs.theta = std::atan2(y, x);
            fs.layer = 0;
            fs.u = coeffs.constant + sum.real();
            out.push_back(fs);
        }
    }
    return out;
}

}  // namespace fptf
