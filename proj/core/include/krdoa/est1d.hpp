// SPDX-License-Identifier: Apache-2.0

#ifndef KRDOA_EST1D_HPP
#define KRDOA_EST1D_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "krdoa/types.hpp"

namespace krdoa {

/// Pseudospectrum a^H (I - U U^H) a sampled on an angle grid (degrees).
struct Spectrum1D {
    std::vector<double> grid_deg;
    std::vector<double> values;
};

/// Per-axis spatial frequency estimates, sorted by ascending angle.
struct FrequencyEstimates {
    std::vector<double> mu;
    std::vector<double> angles_deg;
    std::size_t coarse_evaluations = 0;
    std::size_t fine_evaluations = 0;
};

struct SearchSettings {
    double coarse_step_deg = 1.0;
    double fine_step_deg = 0.05;
    double fine_halfwidth_deg = 1.0;
    double opt_tolerance_deg = 1e-4;
};

/// Evenly spaced grid lo, lo + step, ..., hi (hi included when it lies on the grid).
std::vector<double> angle_grid(double lo_deg, double hi_deg, double step_deg);

/// Throws PreconditionError unless basis has fewer columns than rows and
/// `positions` matches its row count.
Spectrum1D music_spectrum_1d(const CMatrix& basis, std::span<const double> positions,
                             std::span<const double> grid_deg);

/// Angles of the P deepest strict interior local minima. Throws
/// EstimationError naming the count found when fewer than P exist.
std::vector<double> find_minima(const Spectrum1D& spectrum, std::size_t P);

/// Coarse scan of [0, 180] followed by a fine grid around each coarse minimum.
FrequencyEstimates coarse_fine_search(const CMatrix& basis, std::span<const double> positions,
                                      std::size_t P, const SearchSettings& settings = {});

/// Bounded scalar minimisation of the pseudospectrum inside [lo_deg, hi_deg].
double refine_opt(const CMatrix& basis, std::span<const double> positions, double lo_deg, double hi_deg,
                  double tolerance_deg = 1e-4);

/// Coarse scan followed by refine_opt on a one-cell bracket around each minimum.
FrequencyEstimates coarse_opt_search(const CMatrix& basis, std::span<const double> positions,
                                     std::size_t P, const SearchSettings& settings = {});

/// Root-MUSIC on a uniform axis. Throws CapabilityError for non-uniform positions.
FrequencyEstimates root_music_1d(const CMatrix& basis, std::span<const double> positions, std::size_t P);

/// Least-squares ESPRIT on a uniform axis. Throws CapabilityError for
/// non-uniform positions, EstimationError when the shifted block is rank
/// deficient (condition number above 1e12).
FrequencyEstimates esprit_1d(const CMatrix& basis, std::span<const double> positions, std::size_t P);

/// All roots of sum_k coeffs[k] z^k (ascending powers) via companion-matrix
/// eigenvalues. Leading coefficients below 1e-14 of the largest are dropped.
std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs);

/// Root-MUSIC polynomial coefficients (ascending powers of z, degree 2(K-1)):
/// entry j is the sum of diagonal j-(K-1) of I - U U^H.
std::vector<Complex> root_music_polynomial(const CMatrix& basis);

}  // namespace krdoa

#endif  // KRDOA_EST1D_HPP
