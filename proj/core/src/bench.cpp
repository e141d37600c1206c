// SPDX-License-Identifier: Apache-2.0

#include "krdoa/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <limits>
#include <locale>
#include <mutex>
#include <sstream>
#include <thread>
#include <variant>

#include "krdoa/assignment.hpp"
#include "krdoa/errors.hpp"
#include "krdoa/synth.hpp"

namespace krdoa {

namespace {

struct RunOutcome {
    std::variant<double, std::string> value;  // rmse or failure message
    double seconds = 0.0;
};

struct CellSetup {
    ArrayGeometry geometry;
    SourceSet sources;
    double snr_db;
    std::size_t snapshots;
};

std::size_t as_count(double value, const char* what) {
    if (!(value >= 1.0) || value != std::floor(value)) {
        throw DomainError("bench", std::string(what) + " sweep values must be positive integers");
    }
    return static_cast<std::size_t>(value);
}

CellSetup setup_cell(const EnsembleConfig& config, double value) {
    ArrayGeometry geometry = config.axis == SweepAxis::Size
                                 ? config.geometry.build_square(as_count(value, "size"))
                                 : config.geometry.build();
    std::vector<Direction> directions = config.sources;
    if (directions.empty()) {
        const std::size_t P = max_decoupled_sources(geometry.M(), geometry.N());
        if (P == 0) throw DomainError("bench", "array too small for spread sources");
        directions = spread_sources(P);
    }
    return CellSetup{
        std::move(geometry),
        SourceSet(std::move(directions)),
        config.axis == SweepAxis::Snr ? value : config.snr_db,
        config.axis == SweepAxis::Snapshots ? as_count(value, "snapshot") : config.snapshots,
    };
}

RunOutcome estimate_once(const Covariance& cov, const CellSetup& cell, Method method,
                         const SearchSettings& search, bool timed) {
    RunOutcome outcome;
    try {
        const auto start = std::chrono::steady_clock::now();
        const EstimateSet est = estimate(cov, cell.geometry, cell.sources.size(), method, search);
        const auto stop = std::chrono::steady_clock::now();
        if (timed) outcome.seconds = std::chrono::duration<double>(stop - start).count();
        outcome.value = rmse(cell.sources, est);
    } catch (const Error& e) {
        outcome.value = std::string(e.what());
    }
    return outcome;
}

double percentile(std::vector<double> sorted, double q) {
    std::sort(sorted.begin(), sorted.end());
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

CellResult reduce(double value, Method method, const std::vector<RunOutcome>& outcomes, bool timing) {
    CellResult cell;
    cell.sweep_value = value;
    cell.method = method;
    cell.runs = outcomes.size();
    std::vector<double> errors;
    std::vector<double> seconds;
    for (const RunOutcome& o : outcomes) {
        if (const double* r = std::get_if<double>(&o.value)) {
            errors.push_back(*r);
        } else {
            ++cell.failures;
            const auto& msg = std::get<std::string>(o.value);
            if (std::find(cell.errors.begin(), cell.errors.end(), msg) == cell.errors.end()) {
                cell.errors.push_back(msg);
            }
        }
        seconds.push_back(o.seconds);
    }
    if (errors.empty()) {
        cell.mean_rmse_deg = std::numeric_limits<double>::quiet_NaN();
        cell.std_rmse_deg = std::numeric_limits<double>::quiet_NaN();
    } else {
        double sum = 0.0;
        for (const double e : errors) sum += e;
        cell.mean_rmse_deg = sum / static_cast<double>(errors.size());
        double sq = 0.0;
        for (const double e : errors) sq += (e - cell.mean_rmse_deg) * (e - cell.mean_rmse_deg);
        cell.std_rmse_deg = errors.size() > 1 ? std::sqrt(sq / static_cast<double>(errors.size() - 1)) : 0.0;
    }
    if (timing) {
        cell.timing = TimingSummary{percentile(seconds, 0.5), percentile(seconds, 0.1), percentile(seconds, 0.9)};
    }
    return cell;
}

void validate(const EnsembleConfig& config) {
    if (config.methods.empty()) throw DomainError("bench", "no methods configured");
    if (config.values.empty()) throw DomainError("bench", "no sweep values configured");
    if (config.runs == 0) throw DomainError("bench", "run count must be positive");
    if (config.snapshots == 0) throw DomainError("bench", "snapshot count must be positive");
}

}  // namespace

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Snr: return "snr";
        case SweepAxis::Snapshots: return "snapshots";
        case SweepAxis::Size: return "size";
    }
    return "snr";
}

SweepAxis sweep_axis_from_string(std::string_view name) {
    for (const auto axis : {SweepAxis::Snr, SweepAxis::Snapshots, SweepAxis::Size}) {
        if (to_string(axis) == name) return axis;
    }
    throw DomainError("bench", "unknown sweep axis '" + std::string(name) + "'");
}

ArrayGeometry GeometrySpec::build() const {
    if (x_positions || z_positions) {
        if (!x_positions || !z_positions) {
            throw DomainError("bench", "explicit geometry needs both x and z positions");
        }
        return ArrayGeometry::create(kind, *x_positions, *z_positions);
    }
    const bool uniform = kind == ArrayKind::URA || kind == ArrayKind::UPgA;
    const ArrayGeometry base = uniform ? make_ura(M, N, spacing) : make_nura(M, N, seed);
    return ArrayGeometry::create(kind, {base.x_positions().begin(), base.x_positions().end()},
                                 {base.z_positions().begin(), base.z_positions().end()});
}

ArrayGeometry GeometrySpec::build_square(std::size_t size) const {
    if (x_positions || z_positions) throw DomainError("bench", "size sweeps need a generated geometry");
    GeometrySpec copy = *this;
    copy.M = size;
    copy.N = size;
    return copy.build();
}

double rmse(const SourceSet& truth, const EstimateSet& est) {
    if (truth.size() != est.pairs.size()) {
        throw DomainError("bench", "estimate count " + std::to_string(est.pairs.size()) +
                                       " does not match source count " + std::to_string(truth.size()));
    }
    const auto P = static_cast<Eigen::Index>(truth.size());
    Eigen::MatrixXd cost(P, P);
    for (Eigen::Index p = 0; p < P; ++p) {
        for (Eigen::Index q = 0; q < P; ++q) {
            const Direction& t = truth[static_cast<std::size_t>(p)];
            const Direction& e = est.pairs[static_cast<std::size_t>(q)];
            const double da = t.azimuth_deg - e.azimuth_deg;
            const double de = t.elevation_deg - e.elevation_deg;
            cost(p, q) = da * da + de * de;
        }
    }
    const std::vector<std::size_t> match = optimal_assignment(cost);
    double total = 0.0;
    for (Eigen::Index p = 0; p < P; ++p) total += cost(p, static_cast<Eigen::Index>(match[static_cast<std::size_t>(p)]));
    return std::sqrt(total / static_cast<double>(P));
}

std::vector<Direction> spread_sources(std::size_t P) {
    std::vector<Direction> out;
    for (std::size_t p = 0; p < P; ++p) {
        const double u_az = -0.9 + 1.8 * (static_cast<double>(p) + 0.5) / static_cast<double>(P);
        const double u_el = -0.9 + 1.8 * (static_cast<double>(P - 1 - p) + 0.5) / static_cast<double>(P);
        out.push_back({rad_to_deg(std::acos(u_az)), rad_to_deg(std::acos(u_el))});
    }
    return out;
}

std::size_t worker_count_from_environment() {
    if (const char* env = std::getenv("KRDOA_WORKERS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

EnsembleResult run_ensemble(const EnsembleConfig& config) {
    validate(config);
    const std::size_t workers = std::max<std::size_t>(
        1, std::min(config.workers == 0 ? worker_count_from_environment() : config.workers, config.runs));
    const std::size_t K = config.methods.size();

    EnsembleResult result;
    result.axis = config.axis;
    for (const double value : config.values) {
        const CellSetup cell = setup_cell(config, value);
        std::vector<RunOutcome> outcomes(config.runs * K);
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;

        auto worker = [&] {
            try {
                for (std::size_t i = next++; i < config.runs; i = next++) {
                    const SnapshotMatrix snap =
                        synthesize(cell.geometry, cell.sources, cell.snapshots, cell.snr_db, config.base_seed + i);
                    const Covariance cov = sample_covariance(snap);
                    for (std::size_t k = 0; k < K; ++k) {
                        outcomes[i * K + k] = estimate_once(cov, cell, config.methods[k], config.search, false);
                    }
                }
            } catch (...) {
                const std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next = config.runs;
            }
        };
        if (workers == 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        }
        if (first_error) std::rethrow_exception(first_error);

        for (std::size_t k = 0; k < K; ++k) {
            std::vector<RunOutcome> column;
            for (std::size_t i = 0; i < config.runs; ++i) column.push_back(outcomes[i * K + k]);
            result.cells.push_back(reduce(value, config.methods[k], column, false));
        }
    }
    return result;
}

EnsembleResult run_timing(const EnsembleConfig& config) {
    validate(config);
    EnsembleResult result;
    result.axis = config.axis;
    result.timing = true;
    for (const double value : config.values) {
        const CellSetup cell = setup_cell(config, value);
        std::vector<Covariance> covariances;
        for (std::size_t i = 0; i < config.runs; ++i) {
            covariances.push_back(sample_covariance(
                synthesize(cell.geometry, cell.sources, cell.snapshots, cell.snr_db, config.base_seed + i)));
        }
        for (std::size_t w = 0; w < config.warmup; ++w) {
            for (const Method method : config.methods) {
                estimate_once(covariances[w % covariances.size()], cell, method, config.search, true);
            }
        }
        // Methods alternate on each covariance so drift in machine load hits all of them alike.
        std::vector<std::vector<RunOutcome>> outcomes(config.methods.size());
        for (const Covariance& cov : covariances) {
            for (std::size_t k = 0; k < config.methods.size(); ++k) {
                outcomes[k].push_back(estimate_once(cov, cell, config.methods[k], config.search, true));
            }
        }
        for (std::size_t k = 0; k < config.methods.size(); ++k) {
            result.cells.push_back(reduce(value, config.methods[k], outcomes[k], true));
        }
    }
    return result;
}

std::string to_csv(const EnsembleResult& result) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << std::setprecision(17);
    out << "sweep_axis,sweep_value,method,mean_rmse_deg,std_rmse_deg,runs,failures";
    if (result.timing) out << ",median_s,p10_s,p90_s";
    out << '\n';
    for (const CellResult& cell : result.cells) {
        out << to_string(result.axis) << ',' << cell.sweep_value << ',' << to_string(cell.method) << ','
            << cell.mean_rmse_deg << ',' << cell.std_rmse_deg << ',' << cell.runs << ',' << cell.failures;
        if (result.timing && cell.timing) {
            out << ',' << cell.timing->median_s << ',' << cell.timing->p10_s << ',' << cell.timing->p90_s;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace krdoa
