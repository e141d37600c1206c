// SPDX-License-Identifier: Apache-2.0

#include "krdoa/est1d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "krdoa/errors.hpp"
#include "krdoa/geometry.hpp"
#include "krdoa/scalar_min.hpp"
#include "krdoa/subspace.hpp"

namespace krdoa {

namespace {

constexpr double kAngleMin = 0.0;
constexpr double kAngleMax = 180.0;
constexpr double kEspritConditionLimit = 1e12;

void check_basis(const CMatrix& basis, std::size_t sensor_count) {
    if (basis.rows() != static_cast<Eigen::Index>(sensor_count)) {
        throw PreconditionError("est1d", "basis rows do not match sensor count");
    }
    if (basis.cols() < 1 || basis.cols() >= basis.rows()) {
        throw PreconditionError("est1d", "basis must have 0 < P < K columns");
    }
}

double require_uniform(std::span<const double> positions, const char* method) {
    const std::optional<double> d = uniform_spacing(positions);
    if (!d) {
        throw CapabilityError("est1d", std::string(method) +
                                           " needs uniformly spaced sensors; use spectral MUSIC on non-uniform axes");
    }
    return *d;
}

double spectrum_at(const CMatrix& basis, std::span<const double> positions, double angle_deg) {
    return noise_projection_norm(basis, steering_vector_1d(positions, angle_to_mu(angle_deg)));
}

double checked_mu_to_angle(double mu) {
    try {
        return mu_to_angle(mu);
    } catch (const DomainError& e) {
        throw EstimationError("est1d", std::string("estimate out of band: ") + e.what());
    }
}

FrequencyEstimates from_mu(std::vector<double> mus) {
    FrequencyEstimates out;
    std::vector<std::pair<double, double>> by_angle;
    for (const double mu : mus) by_angle.emplace_back(checked_mu_to_angle(mu), mu);
    std::sort(by_angle.begin(), by_angle.end());
    for (const auto& [angle, mu] : by_angle) {
        out.angles_deg.push_back(angle);
        out.mu.push_back(mu);
    }
    return out;
}

FrequencyEstimates from_angles(std::vector<double> angles) {
    std::sort(angles.begin(), angles.end());
    FrequencyEstimates out;
    for (const double angle : angles) {
        out.angles_deg.push_back(angle);
        out.mu.push_back(angle_to_mu(angle));
    }
    return out;
}

std::pair<double, double> window(double centre, double halfwidth) {
    return {std::max(kAngleMin, centre - halfwidth), std::min(kAngleMax, centre + halfwidth)};
}

}  // namespace

std::vector<double> angle_grid(double lo_deg, double hi_deg, double step_deg) {
    if (!(step_deg > 0.0) || hi_deg < lo_deg) throw DomainError("est1d", "invalid angle grid");
    const auto count = static_cast<std::size_t>(std::floor((hi_deg - lo_deg) / step_deg + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) grid[i] = lo_deg + static_cast<double>(i) * step_deg;
    return grid;
}

Spectrum1D music_spectrum_1d(const CMatrix& basis, std::span<const double> positions,
                             std::span<const double> grid_deg) {
    check_basis(basis, positions.size());
    const auto K = static_cast<Eigen::Index>(positions.size());
    const auto G = static_cast<Eigen::Index>(grid_deg.size());
    CMatrix steering(K, G);
    for (Eigen::Index g = 0; g < G; ++g) {
        steering.col(g) = steering_vector_1d(positions, angle_to_mu(grid_deg[static_cast<std::size_t>(g)]));
    }
    const CMatrix residual = steering - basis * (basis.adjoint() * steering);
    Spectrum1D spec;
    spec.grid_deg.assign(grid_deg.begin(), grid_deg.end());
    spec.values.resize(grid_deg.size());
    for (Eigen::Index g = 0; g < G; ++g) {
        spec.values[static_cast<std::size_t>(g)] = std::max(0.0, residual.col(g).squaredNorm());
    }
    return spec;
}

std::vector<double> find_minima(const Spectrum1D& spectrum, std::size_t P) {
    const auto& v = spectrum.values;
    if (v.size() < 3 || spectrum.grid_deg.size() != v.size()) {
        throw DomainError("est1d", "spectrum needs at least 3 grid points");
    }
    std::vector<std::size_t> minima;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i] < v[i - 1] && v[i] < v[i + 1]) minima.push_back(i);
    }
    if (minima.size() < P) {
        throw EstimationError("est1d", "found " + std::to_string(minima.size()) + " local minima, " +
                                           std::to_string(P) + " required");
    }
    std::stable_sort(minima.begin(), minima.end(),
                     [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> angles;
    for (std::size_t k = 0; k < P; ++k) angles.push_back(spectrum.grid_deg[minima[k]]);
    return angles;
}

FrequencyEstimates coarse_fine_search(const CMatrix& basis, std::span<const double> positions, std::size_t P,
                                      const SearchSettings& settings) {
    const std::vector<double> coarse_grid = angle_grid(kAngleMin, kAngleMax, settings.coarse_step_deg);
    const Spectrum1D coarse = music_spectrum_1d(basis, positions, coarse_grid);
    const std::vector<double> seeds = find_minima(coarse, P);

    std::vector<double> refined;
    std::size_t fine_evals = 0;
    for (const double seed : seeds) {
        const auto [lo, hi] = window(seed, settings.fine_halfwidth_deg);
        const std::vector<double> fine_grid = angle_grid(lo, hi, settings.fine_step_deg);
        const Spectrum1D fine = music_spectrum_1d(basis, positions, fine_grid);
        fine_evals += fine_grid.size();
        const auto best = std::min_element(fine.values.begin(), fine.values.end()) - fine.values.begin();
        refined.push_back(fine.grid_deg[static_cast<std::size_t>(best)]);
    }
    FrequencyEstimates out = from_angles(std::move(refined));
    out.coarse_evaluations = coarse_grid.size();
    out.fine_evaluations = fine_evals;
    return out;
}

double refine_opt(const CMatrix& basis, std::span<const double> positions, double lo_deg, double hi_deg,
                  double tolerance_deg) {
    check_basis(basis, positions.size());
    lo_deg = std::max(kAngleMin, lo_deg);
    hi_deg = std::min(kAngleMax, hi_deg);
    const auto objective = [&](double angle) { return spectrum_at(basis, positions, angle); };
    return minimize_bounded(objective, lo_deg, hi_deg, tolerance_deg).x;
}

FrequencyEstimates coarse_opt_search(const CMatrix& basis, std::span<const double> positions, std::size_t P,
                                     const SearchSettings& settings) {
    const std::vector<double> coarse_grid = angle_grid(kAngleMin, kAngleMax, settings.coarse_step_deg);
    const Spectrum1D coarse = music_spectrum_1d(basis, positions, coarse_grid);
    const std::vector<double> seeds = find_minima(coarse, P);

    std::vector<double> refined;
    std::size_t fine_evals = 0;
    for (const double seed : seeds) {
        const auto [lo, hi] = window(seed, settings.coarse_step_deg);
        const auto objective = [&](double angle) { return spectrum_at(basis, positions, angle); };
        const ScalarMinimum best = minimize_bounded(objective, lo, hi, settings.opt_tolerance_deg);
        fine_evals += best.evaluations;
        refined.push_back(best.x);
    }
    FrequencyEstimates out = from_angles(std::move(refined));
    out.coarse_evaluations = coarse_grid.size();
    out.fine_evaluations = fine_evals;
    return out;
}

std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs) {
    std::size_t degree = coeffs.size();
    double largest = 0.0;
    for (const Complex& c : coeffs) largest = std::max(largest, std::abs(c));
    if (largest == 0.0) throw DomainError("est1d", "zero polynomial has no isolated roots");
    while (degree > 0 && std::abs(coeffs[degree - 1]) <= 1e-14 * largest) --degree;
    if (degree <= 1) return {};
    const std::size_t n = degree - 1;  // polynomial degree after trimming

    CMatrix companion = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const Complex lead = coeffs[n];
    for (std::size_t k = 0; k < n; ++k) {
        companion(0, static_cast<Eigen::Index>(k)) = -coeffs[n - 1 - k] / lead;
    }
    for (std::size_t k = 1; k < n; ++k) {
        companion(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = 1.0;
    }
    const Eigen::ComplexEigenSolver<CMatrix> eig(companion, false);
    if (eig.info() != Eigen::Success) throw EstimationError("est1d", "polynomial rooting did not converge");
    return {eig.eigenvalues().begin(), eig.eigenvalues().end()};
}

std::vector<Complex> root_music_polynomial(const CMatrix& basis) {
    const Eigen::Index K = basis.rows();
    CMatrix projector = -basis * basis.adjoint();
    projector.diagonal().array() += 1.0;
    std::vector<Complex> coeffs(static_cast<std::size_t>(2 * K - 1));
    for (Eigen::Index lag = -(K - 1); lag <= K - 1; ++lag) {
        // diagonal(lag) holds entries (m, m + lag): the z^lag term of a^H C a.
        coeffs[static_cast<std::size_t>(lag + K - 1)] = projector.diagonal(lag).sum();
    }
    return coeffs;
}

FrequencyEstimates root_music_1d(const CMatrix& basis, std::span<const double> positions, std::size_t P) {
    check_basis(basis, positions.size());
    const double spacing = require_uniform(positions, "root-MUSIC");
    if (static_cast<Eigen::Index>(P) >= basis.rows()) {
        throw PreconditionError("est1d", "root-MUSIC needs P < K");
    }

    const std::vector<Complex> coeffs = root_music_polynomial(basis);
    std::vector<Complex> roots = polynomial_roots(coeffs);

    // Roots of a^H C a come in conjugate-reciprocal pairs (z, 1/conj(z)); a
    // source on the unit circle gives a double root. Match each root with its
    // mirror partner and treat the pair as one candidate.
    struct Candidate {
        double distance;    // | log|z_inside| |
        double magnitude;   // |z_inside|
        double phase;       // arg of the pair's unit-normalised sum
    };
    std::vector<Candidate> candidates;
    std::vector<bool> used(roots.size(), false);
    struct Link {
        double cost;
        std::size_t i, j;
    };
    std::vector<Link> links;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            const Complex mirror_j = 1.0 / std::conj(roots[j]);
            const Complex mirror_i = 1.0 / std::conj(roots[i]);
            const double cost = std::abs(roots[i] - mirror_j) / std::max(1.0, std::abs(roots[i])) +
                                std::abs(roots[j] - mirror_i) / std::max(1.0, std::abs(roots[j]));
            links.push_back({cost, i, j});
        }
    }
    std::stable_sort(links.begin(), links.end(), [](const Link& a, const Link& b) { return a.cost < b.cost; });
    for (const Link& link : links) {
        if (used[link.i] || used[link.j]) continue;
        used[link.i] = used[link.j] = true;
        const Complex zi = roots[link.i];
        const Complex zj = roots[link.j];
        const Complex inside = std::abs(zi) <= std::abs(zj) ? zi : zj;
        const Complex unit_sum = zi / std::abs(zi) + zj / std::abs(zj);
        candidates.push_back({std::abs(std::log(std::abs(inside))), std::abs(inside), std::arg(unit_sum)});
    }
    if (candidates.size() < P) {
        throw EstimationError("est1d", "root-MUSIC produced " + std::to_string(candidates.size()) +
                                           " root pairs, " + std::to_string(P) + " required");
    }
    std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.magnitude > b.magnitude;
    });

    std::vector<double> mus;
    for (std::size_t p = 0; p < P; ++p) mus.push_back(-candidates[p].phase / spacing);
    return from_mu(std::move(mus));
}

FrequencyEstimates esprit_1d(const CMatrix& basis, std::span<const double> positions, std::size_t P) {
    check_basis(basis, positions.size());
    const double spacing = require_uniform(positions, "ESPRIT");
    const Eigen::Index K = basis.rows();
    if (static_cast<Eigen::Index>(P) > K - 1 || static_cast<Eigen::Index>(P) != basis.cols()) {
        throw PreconditionError("est1d", "ESPRIT needs a K x P basis with P <= K-1");
    }
    const CMatrix upper = basis.topRows(K - 1);
    const CMatrix lower = basis.bottomRows(K - 1);

    const Eigen::JacobiSVD<CMatrix> svd(upper, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > kEspritConditionLimit) {
        throw EstimationError("est1d", "ESPRIT shifted block is rank deficient");
    }
    const CMatrix rotation = svd.solve(lower);
    const Eigen::ComplexEigenSolver<CMatrix> eig(rotation, false);
    if (eig.info() != Eigen::Success) throw EstimationError("est1d", "ESPRIT eigendecomposition failed");

    std::vector<double> mus;
    for (Eigen::Index p = 0; p < eig.eigenvalues().size(); ++p) {
        mus.push_back(-std::arg(eig.eigenvalues()(p)) / spacing);
    }
    return from_mu(std::move(mus));
}

}  // namespace krdoa
