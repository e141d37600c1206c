// SPDX-License-Identifier: Apache-2.0

#include "krdoa/est2d.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "krdoa/assignment.hpp"
#include "krdoa/errors.hpp"

namespace krdoa {

namespace {

constexpr std::array kMethods = {Method::DeRootMusic, Method::DeEsprit, Method::DeMusic, Method::DeMusicOpt,
                                 Method::Music2D};

CMatrix axis_steering(std::span<const double> positions, std::span<const double> grid_deg) {
    CMatrix out(static_cast<Eigen::Index>(positions.size()), static_cast<Eigen::Index>(grid_deg.size()));
    for (std::size_t g = 0; g < grid_deg.size(); ++g) {
        out.col(static_cast<Eigen::Index>(g)) = steering_vector_1d(positions, angle_to_mu(grid_deg[g]));
    }
    return out;
}

/// values(i, j) = joint pseudospectrum at (az_grid[i], el_grid[j]).
Eigen::MatrixXd joint_spectrum_grid(const CMatrix& Qs, const ArrayGeometry& geom, std::span<const double> az_grid,
                                    std::span<const double> el_grid) {
    const CMatrix Ah = axis_steering(geom.x_positions(), az_grid);
    const CMatrix Av = axis_steering(geom.z_positions(), el_grid);
    const Eigen::Index M = Ah.rows();
    const Eigen::Index N = Av.rows();
    const Eigen::Index Ge = Av.cols();

    Eigen::MatrixXd values(Ah.cols(), Ge);
    CMatrix block(M * N, Ge);
    for (Eigen::Index i = 0; i < Ah.cols(); ++i) {
        for (Eigen::Index m = 0; m < M; ++m) block.middleRows(m * N, N) = Ah(m, i) * Av;
        const CMatrix residual = block - Qs * (Qs.adjoint() * block);
        values.row(i) = residual.colwise().squaredNorm();
    }
    return values;
}

struct GridPoint {
    Eigen::Index i;
    Eigen::Index j;
};

std::vector<GridPoint> local_minima_2d(const Eigen::MatrixXd& v) {
    std::vector<GridPoint> minima;
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
        for (Eigen::Index j = 0; j < v.cols(); ++j) {
            bool is_min = true;
            for (Eigen::Index di = -1; di <= 1 && is_min; ++di) {
                for (Eigen::Index dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const Eigen::Index ni = i + di;
                    const Eigen::Index nj = j + dj;
                    if (ni < 0 || nj < 0 || ni >= v.rows() || nj >= v.cols()) continue;
                    if (!(v(i, j) < v(ni, nj))) {
                        is_min = false;
                        break;
                    }
                }
            }
            if (is_min) minima.push_back({i, j});
        }
    }
    return minima;
}

std::pair<double, double> window(double centre, double halfwidth) {
    return {std::max(0.0, centre - halfwidth), std::min(180.0, centre + halfwidth)};
}

}  // namespace

std::string_view to_string(Method method) {
    switch (method) {
        case Method::DeRootMusic: return "de-rmusic";
        case Method::DeEsprit: return "de-esprit";
        case Method::DeMusic: return "de-music";
        case Method::DeMusicOpt: return "de-music-opt";
        case Method::Music2D: return "2d-music";
    }
    return "de-rmusic";
}

Method method_from_string(std::string_view name) {
    for (const Method m : kMethods) {
        if (to_string(m) == name) return m;
    }
    throw DomainError("est2d", "unknown method '" + std::string(name) + "'");
}

std::span<const Method> all_methods() { return kMethods; }

bool is_decoupled(Method method) { return method != Method::Music2D; }

double joint_pseudospectrum(const JointSubspace& js, const ArrayGeometry& geom, double mu_h, double mu_v) {
    return noise_projection_norm(js.Qs, steering_vector_2d(geom, mu_h, mu_v));
}

EstimateSet pair_angles(const JointSubspace& js, const ArrayGeometry& geom, std::span<const double> azimuths_deg,
                        std::span<const double> elevations_deg) {
    if (azimuths_deg.size() != elevations_deg.size()) {
        throw DomainError("est2d", "azimuth and elevation lists differ in length");
    }
    const auto P = static_cast<Eigen::Index>(azimuths_deg.size());
    Eigen::MatrixXd cost(P, P);
    for (Eigen::Index i = 0; i < P; ++i) {
        const double mu_h = angle_to_mu(azimuths_deg[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < P; ++j) {
            cost(i, j) = joint_pseudospectrum(js, geom, mu_h, angle_to_mu(elevations_deg[static_cast<std::size_t>(j)]));
        }
    }
    const std::vector<std::size_t> match = optimal_assignment(cost);
    EstimateSet out;
    for (std::size_t i = 0; i < match.size(); ++i) {
        out.pairs.push_back({azimuths_deg[i], elevations_deg[match[i]]});
        out.pairing_costs.push_back(cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(match[i])));
    }
    return out;
}

EstimateSet estimate_decoupled(const Covariance& cov, const ArrayGeometry& geom, std::size_t P, Method method,
                               const SearchSettings& settings) {
    if (!is_decoupled(method)) throw DomainError("est2d", "estimate_decoupled called with 2d-music");
    require_decoupled_capacity(geom.M(), geom.N(), P);
    const JointSubspace js = signal_subspace(cov, geom.M(), geom.N(), P);
    const DecoupledSubspaces ds = decouple(js);

    FrequencyEstimates az;
    FrequencyEstimates el;
    switch (method) {
        case Method::DeRootMusic:
            az = root_music_1d(ds.azimuth_basis, geom.x_positions(), P);
            el = root_music_1d(ds.elevation_basis, geom.z_positions(), P);
            break;
        case Method::DeEsprit:
            az = esprit_1d(ds.azimuth_basis, geom.x_positions(), P);
            el = esprit_1d(ds.elevation_basis, geom.z_positions(), P);
            break;
        case Method::DeMusic:
            az = coarse_fine_search(ds.azimuth_basis, geom.x_positions(), P, settings);
            el = coarse_fine_search(ds.elevation_basis, geom.z_positions(), P, settings);
            break;
        case Method::DeMusicOpt:
            az = coarse_opt_search(ds.azimuth_basis, geom.x_positions(), P, settings);
            el = coarse_opt_search(ds.elevation_basis, geom.z_positions(), P, settings);
            break;
        case Method::Music2D:
            break;
    }
    EstimateSet out = pair_angles(js, geom, az.angles_deg, el.angles_deg);
    out.method = method;
    out.coarse_evaluations = az.coarse_evaluations + el.coarse_evaluations;
    out.fine_evaluations = az.fine_evaluations + el.fine_evaluations;
    return out;
}

EstimateSet estimate_2d_music(const Covariance& cov, const ArrayGeometry& geom, std::size_t P,
                              const SearchSettings& settings) {
    const JointSubspace js = signal_subspace(cov, geom.M(), geom.N(), P);
    const std::vector<double> coarse = angle_grid(0.0, 180.0, settings.coarse_step_deg);
    const Eigen::MatrixXd values = joint_spectrum_grid(js.Qs, geom, coarse, coarse);

    std::vector<GridPoint> minima = local_minima_2d(values);
    if (minima.size() < P) {
        throw EstimationError("est2d", "2-D spectrum has " + std::to_string(minima.size()) + " local minima, " +
                                           std::to_string(P) + " required");
    }
    std::stable_sort(minima.begin(), minima.end(),
                     [&values](const GridPoint& a, const GridPoint& b) { return values(a.i, a.j) < values(b.i, b.j); });

    EstimateSet out;
    out.method = Method::Music2D;
    out.coarse_evaluations = static_cast<std::size_t>(values.size());
    for (std::size_t p = 0; p < P; ++p) {
        const double az0 = coarse[static_cast<std::size_t>(minima[p].i)];
        const double el0 = coarse[static_cast<std::size_t>(minima[p].j)];
        const auto [az_lo, az_hi] = window(az0, settings.fine_halfwidth_deg);
        const auto [el_lo, el_hi] = window(el0, settings.fine_halfwidth_deg);
        const std::vector<double> az_fine = angle_grid(az_lo, az_hi, settings.fine_step_deg);
        const std::vector<double> el_fine = angle_grid(el_lo, el_hi, settings.fine_step_deg);
        const Eigen::MatrixXd fine = joint_spectrum_grid(js.Qs, geom, az_fine, el_fine);
        out.fine_evaluations += static_cast<std::size_t>(fine.size());
        Eigen::Index bi = 0, bj = 0;
        const double best = fine.minCoeff(&bi, &bj);
        out.pairs.push_back({az_fine[static_cast<std::size_t>(bi)], el_fine[static_cast<std::size_t>(bj)]});
        out.pairing_costs.push_back(best);
    }
    return out;
}

EstimateSet estimate(const Covariance& cov, const ArrayGeometry& geom, std::size_t P, Method method,
                     const SearchSettings& settings) {
    if (method == Method::Music2D) return estimate_2d_music(cov, geom, P, settings);
    return estimate_decoupled(cov, geom, P, method, settings);
}

}  // namespace krdoa
