// SPDX-License-Identifier: Apache-2.0

#ifndef KRDOA_TOOLS_RUN_CONFIG_HPP
#define KRDOA_TOOLS_RUN_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "krdoa/bench.hpp"

namespace krdoa::cli {

/// Malformed command line or config; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// JSON sweep description. Optional members stay unset when absent from the
/// input so that serialization reproduces the input.
struct RunConfig {
    struct Geometry {
        ArrayKind kind = ArrayKind::URA;
        std::optional<std::size_t> M;
        std::optional<std::size_t> N;
        std::optional<double> spacing;
        std::optional<std::uint64_t> seed;
        std::optional<std::vector<double>> x_positions;
        std::optional<std::vector<double>> z_positions;
    };
    struct Search {
        std::optional<double> coarse_step_deg;
        std::optional<double> fine_step_deg;
        std::optional<double> fine_halfwidth_deg;
        std::optional<double> opt_tolerance_deg;
    };

    Geometry geometry;
    std::optional<std::vector<Direction>> sources;
    std::vector<std::string> methods;
    SweepAxis axis = SweepAxis::Snr;
    std::vector<double> values;
    std::optional<double> snr_db;
    std::optional<std::size_t> snapshots;
    std::size_t runs = 0;
    std::uint64_t base_seed = 0;
    std::string output;
    /// Present: timing sweep with this many discarded warm-up calls.
    std::optional<std::size_t> timing_warmup;
    std::optional<Search> search;
};

/// Throws UsageError on syntax errors, wrong types, missing or unknown fields.
RunConfig parse_run_config(const std::string& text);
std::string serialize_run_config(const RunConfig& config);

/// Applies defaults and checks every sweep cell against the library
/// preconditions (geometry, sources). Throws UsageError.
EnsembleConfig to_ensemble_config(const RunConfig& config);

/// 64-bit FNV-1a of the raw bytes, as 16 lowercase hex digits.
std::string fnv1a64_hex(const std::string& bytes);

}  // namespace krdoa::cli

#endif  // KRDOA_TOOLS_RUN_CONFIG_HPP
