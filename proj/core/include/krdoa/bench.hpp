// SPDX-License-Identifier: Apache-2.0

#ifndef KRDOA_BENCH_HPP
#define KRDOA_BENCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "krdoa/est2d.hpp"
#include "krdoa/geometry.hpp"

namespace krdoa {

enum class SweepAxis { Snr, Snapshots, Size };

std::string_view to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(std::string_view name);

/// Recipe for building the array of each sweep cell. Generated arrays use
/// `spacing` (URA/UPgA) or the seeded [0.3, 0.5] spacing draw (NURA/NUPgA);
/// explicit positions override both. A size sweep sets M = N = value.
struct GeometrySpec {
    ArrayKind kind = ArrayKind::URA;
    std::size_t M = 10;
    std::size_t N = 10;
    double spacing = 0.5;
    std::uint64_t seed = 0;
    std::optional<std::vector<double>> x_positions;
    std::optional<std::vector<double>> z_positions;

    ArrayGeometry build() const;
    ArrayGeometry build_square(std::size_t size) const;
};

struct EnsembleConfig {
    GeometrySpec geometry;
    /// Empty: spread_sources(min(M, N) - 1) per cell.
    std::vector<Direction> sources;
    std::vector<Method> methods;
    SweepAxis axis = SweepAxis::Snr;
    std::vector<double> values;
    double snr_db = 0.0;
    std::size_t snapshots = 100;
    std::size_t runs = 200;
    std::uint64_t base_seed = 1;
    /// 0 selects worker_count_from_environment().
    std::size_t workers = 0;
    /// Timed iterations discarded before measuring (timing sweeps only).
    std::size_t warmup = 2;
    SearchSettings search;
};

struct TimingSummary {
    double median_s = 0.0;
    double p10_s = 0.0;
    double p90_s = 0.0;
};

struct CellResult {
    double sweep_value = 0.0;
    Method method = Method::DeRootMusic;
    double mean_rmse_deg = 0.0;   // over successful runs; NaN if none
    double std_rmse_deg = 0.0;    // sample deviation; 0 for a single success
    std::size_t runs = 0;
    std::size_t failures = 0;
    std::optional<TimingSummary> timing;
    std::vector<std::string> errors;  // distinct failure messages, first-seen order
};

struct EnsembleResult {
    SweepAxis axis = SweepAxis::Snr;
    bool timing = false;
    std::vector<CellResult> cells;  // sweep-value major, method minor
};

/// Per-run error: sqrt((1/P) sum_p (dtheta_p^2 + dvartheta_p^2)) in degrees,
/// after matching estimates to truth by minimum total squared error.
double rmse(const SourceSet& truth, const EstimateSet& est);

/// P sources with direction cosines evenly spread over [-0.9, 0.9] on each
/// axis, elevations in reverse order of azimuths.
std::vector<Direction> spread_sources(std::size_t P);

/// Worker count from KRDOA_WORKERS, else std::thread::hardware_concurrency().
std::size_t worker_count_from_environment();

/// For every (sweep value, method): `runs` synthesize -> sample covariance ->
/// estimate -> rmse repetitions. Run i uses seed base_seed + i, shared by all
/// methods and sweep values. Runs are spread over workers and reduced in
/// run-index order, so the result does not depend on the worker count.
EnsembleResult run_ensemble(const EnsembleConfig& config);

/// As run_ensemble, executed on one thread, additionally timing each estimate
/// call (from covariance to paired angles). Methods alternate on each
/// covariance; the first `warmup` rounds per cell are discarded.
EnsembleResult run_timing(const EnsembleConfig& config);

/// Header: sweep_axis,sweep_value,method,mean_rmse_deg,std_rmse_deg,runs,failures
/// followed by median_s,p10_s,p90_s for timing results. Numbers use up to 17
/// significant digits.
std::string to_csv(const EnsembleResult& result);

}  // namespace krdoa

#endif  // KRDOA_BENCH_HPP
