#include "fptf/structure.hpp"

#include <cmath>
#include <string>

namespace fptf {

double LayeredStructure::sigma(int j) const {
    if (j < 0 || j > layer_count() + 1) throw Error("sigma: layer index out of range");
    if (j == layer_count() + 1) return 1.0;
    return sigmas[static_cast<size_t>(j)];
}

double LayeredStructure::radius(int j) const {
    if (j < 0 || j > layer_count()) throw Error("radius: interface index out of range");
    if (j == 0) return map.r0;
    return radii[static_cast<size_t>(j - 1)];
}

void LayeredStructure::validate() const {
    map.validate();
    if (sigmas.size() != radii.size() + 1)
        throw Error("structure: sigmas must list sigma_0..sigma_N");
    double prev = map.r0;
    for (double r : radii) {
        if (!(r > prev)) throw Error("structure: radii must satisfy r0 < r_1 < ... < r_N");
        prev = r;
    }
    for (double s : sigmas)
        if (!(s > 0.0)) throw Error("structure: conductivities must be positive");
    contrasts(*this);  // throws DegenerateInterface on equal neighbors
}

std::vector<double> contrasts(const LayeredStructure& s) {
    const int N = s.layer_count();
    std::vector<double> tau(static_cast<size_t>(N) + 1);
    for (int j = 0; j <= N; ++j) {
        const double sj = s.sigmas[static_cast<size_t>(j)];
        const double sj1 = (j == N) ? 1.0 : s.sigmas[static_cast<size_t>(j + 1)];
        if (sj == sj1)
            throw DegenerateInterface("contrasts: sigma_" + std::to_string(j) +
                                      " equals sigma_" + std::to_string(j + 1) +
                                      "; merge the layers explicitly");
        tau[static_cast<size_t>(j)] = (sj + sj1) / (sj - sj1);
    }
    return tau;
}

TransferDiagonals transfer_diagonals(const LayeredStructure& s, int k_trunc) {
    if (k_trunc < 1) throw Error("transfer_diagonals: k_trunc must be >= 1");
    const int N = s.layer_count();
    const std::vector<double> tau = contrasts(s);

    double logsum = 0.0;
    for (int j = 0; j <= N; ++j) logsum += std::abs(std::log(s.radius(j)));
    if (2.0 * k_trunc * logsum > 600.0)
        throw TruncationOverflow("transfer_diagonals: r^(2k) exceeds double range at k_trunc=" +
                                 std::to_string(k_trunc));

    TransferDiagonals t;
    t.order = k_trunc;
    t.d1.resize(static_cast<size_t>(k_trunc));
    t.d2.resize(static_cast<size_t>(k_trunc));
    t.d3.resize(static_cast<size_t>(k_trunc));
    t.d4.resize(static_cast<size_t>(k_trunc));

    t.kappa = 1.0;
    for (int j = 0; j <= N; ++j) {
        const double sj = s.sigma(j);
        t.kappa *= (sj - s.sigma(j + 1)) / (2.0 * sj);
    }

    for (int k = 1; k <= k_trunc; ++k) {
        // left-to-right product over interfaces j = 0..N
        double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
        for (int j = 0; j <= N; ++j) {
            const double r2k = std::pow(s.radius(j), 2.0 * k);
            const double f11 = tau[static_cast<size_t>(j)];
            const double f12 = 1.0 / r2k;
            const double f21 = r2k;
            const double f22 = f11;
            const double n11 = m11 * f11 + m12 * f21;
            const double n12 = m11 * f12 + m12 * f22;
            const double n21 = m21 * f11 + m22 * f21;
            const double n22 = m21 * f12 + m22 * f22;
            m11 = n11; m12 = n12; m21 = n21; m22 = n22;
        }
        t.d1[static_cast<size_t>(k - 1)] = m11;
        t.d2[static_cast<size_t>(k - 1)] = m12;
        t.d3[static_cast<size_t>(k - 1)] = m21;
        t.d4[static_cast<size_t>(k - 1)] = m22;
    }
    return t;
}

}  // namespace fptf
