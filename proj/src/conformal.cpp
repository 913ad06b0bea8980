#include "fptf/conformal.hpp"

#include <cmath>

namespace fptf {

namespace {
constexpr double kSymmetryTol = 1e-14;
}

void ConformalMap::validate() const {
    if (!(r0 > 0.0)) throw Error("conformal map requires r0 > 0");
    area(*this);  // throws NonUnivalentMap when the area test fails
}

Complex map_eval(const ConformalMap& map, Complex w, bool allow_boundary) {
    const double aw = std::abs(w);
    const double lo = allow_boundary ? map.r0 * (1.0 - 1e-12) : map.r0;
    if (aw < lo || (!allow_boundary && aw == map.r0))
        throw OutOfDomain("map_eval: |w| <= r0 lies inside the omitted disk");
    Complex sum = w + map.a0;
    Complex winv = 1.0 / w;
    Complex p = winv;
    for (const Complex& ak : map.a) {
        sum += ak * p;
        p *= winv;
    }
    return sum;
}

Complex map_deriv(const ConformalMap& map, Complex w) {
    Complex sum = 1.0;
    Complex winv = 1.0 / w;
    Complex p = winv * winv;
    for (size_t k = 0; k < map.a.size(); ++k) {
        sum -= static_cast<double>(k + 1) * map.a[k] * p;
        p *= winv;
    }
    return sum;
}

GrunskyMatrix grunsky(const ConformalMap& map, int k_trunc) {
    if (k_trunc < 1) throw Error("grunsky: k_trunc must be >= 1");
    // The recursion for c_{m,k+1} consumes c_{m+1,k} on the same anti-diagonal,
    // so the K x K block needs a working array reaching row/column 2K-1.
    const int n = 2 * k_trunc;
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);

    auto A = [&](int j) { return map.coeff(j); };

    for (int j = 1; j <= n; ++j) {
        c(0, j - 1) = A(j);
        c(j - 1, 0) = static_cast<double>(j) * A(j);
    }
    // Anti-diagonal sweep: within diagonal m+k = d, walk from column 1 upward.
    for (int d = 3; d <= n + 1; ++d) {
        for (int k = 2; k <= d - 2; ++k) {
            const int m = d - k;       // entry (m, k), needs (m+1, k-1)
            if (m < 2) break;
            Complex v = c(m, k - 2) - A(m + k - 1);
            for (int s = 1; s <= m - 1; ++s) {
                if (m - s <= static_cast<int>(map.a.size()))
                    v += A(m - s) * c(s - 1, k - 2);
            }
            for (int s = 1; s <= k - 2; ++s) {
                if (k - 1 - s <= static_cast<int>(map.a.size()))
                    v -= A(k - 1 - s) * c(m - 1, s - 1);
            }
            c(m - 1, k - 1) = v;
        }
    }

    GrunskyMatrix g;
    g.order = k_trunc;
    g.entries = c.topLeftCorner(k_trunc, k_trunc);
    return g;
}

std::vector<std::vector<Complex>> faber_coeffs(const ConformalMap& map, int m_max) {
    if (m_max < 0) throw Error("faber_coeffs: m_max must be >= 0");
    std::vector<std::vector<Complex>> F(static_cast<size_t>(m_max) + 1);
    F[0] = {Complex(1.0, 0.0)};
    if (m_max == 0) return F;

    auto A = [&](int j) -> Complex {
        if (j == 0) return map.a0;
        return map.coeff(j);
    };

    // F_{n+1}(z) = z F_n(z) - sum_{j=0}^{n} a_j F_{n-j}(z) - n a_n
    for (int nn = 0; nn < m_max; ++nn) {
        std::vector<Complex> next(static_cast<size_t>(nn) + 2, Complex(0.0, 0.0));
        for (size_t i = 0; i < F[static_cast<size_t>(nn)].size(); ++i)
            next[i + 1] = F[static_cast<size_t>(nn)][i];
        for (int j = 0; j <= nn; ++j) {
            const Complex aj = A(j);
            if (aj == Complex(0.0, 0.0)) continue;
            const auto& Fnj = F[static_cast<size_t>(nn - j)];
            for (size_t i = 0; i < Fnj.size(); ++i) next[i] -= aj * Fnj[i];
        }
        next[0] -= static_cast<double>(nn) * A(nn);
        F[static_cast<size_t>(nn) + 1] = std::move(next);
    }
    return F;
}

Complex faber_eval(const std::vector<Complex>& poly, Complex z) {
    Complex v{0.0, 0.0};
    for (size_t i = poly.size(); i-- > 0;) v = v * z + poly[i];
    return v;
}

double area(const ConformalMap& map) {
    if (!(map.r0 > 0.0)) throw Error("area: r0 must be positive");
    const double pi = 4.0 * std::atan(1.0);
    double s = map.r0 * map.r0;
    double rpow = 1.0;
    for (size_t k = 0; k < map.a.size(); ++k) {
        rpow *= map.r0 * map.r0;
        s -= static_cast<double>(k + 1) * std::norm(map.a[k]) / rpow;
    }
    const double result = pi * s;
    if (!(result > 0.0))
        throw NonUnivalentMap("area: nonpositive area, map cannot be univalent");
    return result;
}

int symmetry_order(const ConformalMap& map) {
    int last = 0;  // index of the last non-negligible coefficient
    for (size_t k = 0; k < map.a.size(); ++k)
        if (std::abs(map.a[k]) > kSymmetryTol) last = static_cast<int>(k + 1);
    if (last == 0) return 1;  // disk: no finite maximal order, report trivial

    for (int N = last + 1; N >= 2; --N) {
        bool ok = true;
        for (int n = 1; n <= last; ++n) {
            if ((n + 1) % N != 0 && std::abs(map.coeff(n)) > kSymmetryTol) {
                ok = false;
                break;
            }
        }
        if (ok) return N;
    }
    return 1;
}

}  // namespace fptf
