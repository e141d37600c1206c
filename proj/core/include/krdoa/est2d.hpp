// SPDX-License-Identifier: Apache-2.0

#ifndef KRDOA_EST2D_HPP
#define KRDOA_EST2D_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "krdoa/est1d.hpp"
#include "krdoa/geometry.hpp"
#include "krdoa/subspace.hpp"
#include "krdoa/synth.hpp"

namespace krdoa {

enum class Method {
    DeRootMusic,   // decoupled root-MUSIC
    DeEsprit,      // decoupled LS-ESPRIT
    DeMusic,       // decoupled spectral MUSIC, coarse + fine grid
    DeMusicOpt,    // decoupled spectral MUSIC, coarse grid + bounded refinement
    Music2D,       // joint 2-D spectral MUSIC baseline
};

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);
std::span<const Method> all_methods();
bool is_decoupled(Method method);

/// Paired (azimuth, elevation) estimates in degrees.
struct EstimateSet {
    std::vector<Direction> pairs;
    std::vector<double> pairing_costs;  // joint pseudospectrum at each pair
    Method method = Method::DeRootMusic;
    std::size_t coarse_evaluations = 0;
    std::size_t fine_evaluations = 0;
};

/// Joint pseudospectrum a^H (I - Qs Qs^H) a at one (mu_h, mu_v).
double joint_pseudospectrum(const JointSubspace& js, const ArrayGeometry& geom, double mu_h, double mu_v);

/// Evaluates the joint pseudospectrum at every (azimuth_i, elevation_j)
/// candidate and returns the assignment with minimum total cost, one pair per
/// azimuth in input order.
EstimateSet pair_angles(const JointSubspace& js, const ArrayGeometry& geom, std::span<const double> azimuths_deg,
                        std::span<const double> elevations_deg);

/// signal_subspace -> decouple -> per-axis back-end -> pair_angles. `method`
/// must be one of the decoupled methods.
EstimateSet estimate_decoupled(const Covariance& cov, const ArrayGeometry& geom, std::size_t P, Method method,
                               const SearchSettings& settings = {});

/// Two-stage 2-D spectral MUSIC over [0,180]^2: coarse grid, P deepest local
/// minima over the 8-neighbourhood, then a local fine grid around each.
EstimateSet estimate_2d_music(const Covariance& cov, const ArrayGeometry& geom, std::size_t P,
                              const SearchSettings& settings = {});

/// Dispatches to estimate_decoupled or estimate_2d_music.
EstimateSet estimate(const Covariance& cov, const ArrayGeometry& geom, std::size_t P, Method method,
                     const SearchSettings& settings = {});

}  // namespace krdoa

#endif  // KRDOA_EST2D_HPP
