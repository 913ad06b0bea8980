#pragma once

#include <vector>

#include "fptf/conformal.hpp"

namespace fptf {

/// Core + N confocal coatings. The core boundary is the image of |w| = map.r0;
/// coating interfaces sit at the level curves |w| = radii[j-1] (j = 1..N).
/// sigmas holds sigma_0..sigma_N; the exterior conductivity is fixed to 1.
struct LayeredStructure {
    ConformalMap map;
    std::vector<double> radii;   // r_1 < ... < r_N, all > map.r0
    std::vector<double> sigmas;  // sigma_0, sigma_1, ..., sigma_N

    int layer_count() const { return static_cast<int>(radii.size()); }

    /// Conductivity of region j, j = 0..N+1 (exterior returns 1).
    double sigma(int j) const;

    /// Interface radius r_j for j = 0..N (r_0 is the core radius).
    double radius(int j) const;

    void validate() const;
};

/// Per-mode diagonals of the interface transfer product
///   [d1 d2; d3 d4]^{(k)} = prod_{j=0..N} [tau_j, r_j^{-2k}; r_j^{2k}, tau_j].
struct TransferDiagonals {
    int order = 0;
    std::vector<double> d1, d2, d3, d4;  // index k-1 holds mode k
    double kappa = 0.0;
};

/// Interface contrasts tau_j = (sigma_j + sigma_{j+1}) / (sigma_j - sigma_{j+1}),
/// j = 0..N with sigma_{N+1} = 1. Throws DegenerateInterface on equal neighbors.
std::vector<double> contrasts(const LayeredStructure& s);

/// Transfer-matrix diagonals for modes k = 1..k_trunc plus the constant
///   kappa = prod_j (sigma_j - sigma_{j+1}) / (2 sigma_j).
/// d3 grows like (prod r_j)^{2k}; modes with 2k sum(log r_j) > 600 overflow
/// double range and are rejected with TruncationOverflow.
TransferDiagonals transfer_diagonals(const LayeredStructure& s, int k_trunc);

}  // namespace fptf
