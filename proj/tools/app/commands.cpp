// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "krdoa/krdoa.hpp"
#include "run_config.hpp"

namespace krdoa::cli {
namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("[cli] cannot write '" + path.string() + "'");
}

std::string format_value(double v) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s << std::setprecision(17) << v;
    return s.str();
}

json sidecar(const RunConfig& config, const std::string& config_text, const std::filesystem::path& config_path,
             const EnsembleResult& result) {
    json cells = json::array();
    for (const CellResult& cell : result.cells) {
        if (cell.failures == 0) continue;
        cells.push_back({{"sweep_value", cell.sweep_value},
                         {"method", std::string(to_string(cell.method))},
                         {"failures", cell.failures},
                         {"errors", cell.errors}});
    }
    json meta = {
        {"version", std::string(kVersion)},
        {"config_file", config_path.filename().string()},
        {"config_fnv1a64", fnv1a64_hex(config_text)},
        {"config", json::parse(serialize_run_config(config))},
        {"base_seed", config.base_seed},
        {"runs", config.runs},
        {"sweep_axis", std::string(to_string(result.axis))},
        {"failed_cells", cells},
    };
    if (result.timing) {
        meta["percentiles"] = {{"median_s", 50}, {"p10_s", 10}, {"p90_s", 90}};
        meta["warmup"] = config.timing_warmup.value_or(0);
    }
    return meta;
}

struct SingleOptions {
    std::string kind = "URA";
    std::size_t M = 10;
    std::size_t N = 10;
    double spacing = 0.5;
    std::uint64_t geometry_seed = 0;
    std::vector<std::string> sources;
    double snr_db = 20.0;
    std::size_t snapshots = 100;
    std::string method = "de-rmusic";
    std::uint64_t seed = 1;
    std::string export_path;
};

Direction parse_direction(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError("--source expects AZIMUTH,ELEVATION, got '" + text + "'");
    try {
        std::size_t used_a = 0, used_e = 0;
        const std::string a = text.substr(0, comma), e = text.substr(comma + 1);
        const double az = std::stod(a, &used_a);
        const double el = std::stod(e, &used_e);
        if (used_a != a.size() || used_e != e.size()) throw std::invalid_argument(text);
        return {az, el};
    } catch (const std::logic_error&) {
        throw UsageError("--source expects AZIMUTH,ELEVATION, got '" + text + "'");
    }
}

int cmd_single(const SingleOptions& o, std::ostream& out, std::ostream& err) {
    std::optional<ArrayGeometry> geom_opt;
    std::optional<SourceSet> sources_opt;
    Method method{};
    try {
        if (o.snapshots == 0) throw UsageError("--snapshots must be positive");
        GeometrySpec spec;
        spec.kind = array_kind_from_string(o.kind);
        spec.M = o.M;
        spec.N = o.N;
        spec.spacing = o.spacing;
        spec.seed = o.geometry_seed;
        geom_opt = spec.build();
        std::vector<Direction> dirs;
        for (const std::string& s : o.sources) dirs.push_back(parse_direction(s));
        if (dirs.empty()) dirs = {{155, 20}, {21, 150}, {76, 80}};
        sources_opt.emplace(std::move(dirs));
        method = method_from_string(o.method);
    } catch (const UsageError& e) {
        err << "[cli] " << e.what() << '\n';
        return kExitUsage;
    } catch (const krdoa::Error& e) {
        err << e.what() << '\n';
        return kExitUsage;
    }

    const ArrayGeometry& geom = *geom_opt;
    const SourceSet& sources = *sources_opt;
    try {
        const SnapshotMatrix snap = synthesize(geom, sources, o.snapshots, o.snr_db, o.seed);
        if (!o.export_path.empty()) write_snapshots(o.export_path, snap);
        const EstimateSet est = estimate(sample_covariance(snap), geom, sources.size(), method);
        json pairs = json::array();
        for (std::size_t p = 0; p < est.pairs.size(); ++p) {
            pairs.push_back({{"azimuth_deg", est.pairs[p].azimuth_deg},
                             {"elevation_deg", est.pairs[p].elevation_deg},
                             {"cost", est.pairing_costs[p]}});
        }
        json truth = json::array();
        for (std::size_t p = 0; p < sources.size(); ++p) {
            truth.push_back({{"azimuth_deg", sources[p].azimuth_deg}, {"elevation_deg", sources[p].elevation_deg}});
        }
        json result = {
            {"method", std::string(to_string(method))},
            {"geometry", json::parse(geometry_to_json(geom))},
            {"sources", truth},
            {"snapshots", o.snapshots},
            {"seed", o.seed},
            {"estimates", pairs},
            {"coarse_evaluations", est.coarse_evaluations},
            {"fine_evaluations", est.fine_evaluations},
        };
        // JSON has no infinity; noiseless runs report null.
        result["snr_db"] = std::isfinite(o.snr_db) ? json(o.snr_db) : json(nullptr);
        out << result.dump(2) << '\n';
        return kExitOk;
    } catch (const krdoa::Error& e) {
        err << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace

int cmd_run(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& out,
            std::ostream& err) {
    std::string text;
    RunConfig config;
    EnsembleConfig ensemble;
    try {
        text = read_file(config_path);
        config = parse_run_config(text);
        ensemble = to_ensemble_config(config);
    } catch (const UsageError& e) {
        err << "[cli] " << e.what() << '\n';
        return kExitUsage;
    }
    ensemble.workers = options.workers;
    const std::filesystem::path csv_path = options.output.value_or(std::filesystem::path(config.output));
    std::filesystem::path meta_path = csv_path;
    meta_path.replace_extension(".meta.json");

    try {
        const EnsembleResult result = config.timing_warmup ? run_timing(ensemble) : run_ensemble(ensemble);
        write_file(csv_path, to_csv(result));
        write_file(meta_path, sidecar(config, text, config_path, result).dump(2) + "\n");

        bool any_success = false;
        for (const CellResult& cell : result.cells) {
            if (cell.failures < cell.runs) any_success = true;
            if (cell.failures == 0) continue;
            err << "cell " << to_string(result.axis) << '=' << format_value(cell.sweep_value) << ' '
                << to_string(cell.method) << ": " << cell.failures << '/' << cell.runs << " runs failed";
            if (!cell.errors.empty()) err << ": " << cell.errors.front();
            err << '\n';
        }
        out << "wrote " << csv_path.string() << " (" << result.cells.size() << " rows) and " << meta_path.string()
            << '\n';
        return any_success ? kExitOk : kExitFailure;
    } catch (const krdoa::Error& e) {
        err << e.what() << '\n';
    } catch (const std::exception& e) {
        err << e.what() << '\n';
    }
    return kExitFailure;
}

int cmd_list_methods(std::ostream& out) {
    for (const Method m : all_methods()) {
        std::string_view what;
        switch (m) {
            case Method::DeRootMusic: what = "decoupled root-MUSIC; uniform axes only"; break;
            case Method::DeEsprit: what = "decoupled LS-ESPRIT; uniform axes only"; break;
            case Method::DeMusic: what = "decoupled spectral MUSIC, coarse then fine grid"; break;
            case Method::DeMusicOpt: what = "decoupled spectral MUSIC, coarse grid then bounded refinement"; break;
            case Method::Music2D: what = "joint 2-D spectral MUSIC, coarse then fine grid"; break;
        }
        out << std::left << std::setw(14) << to_string(m) << what << '\n';
    }
    return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decoupled azimuth/elevation angle-of-arrival estimation", "krdoa"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string output;
    std::size_t workers = 0;
    CLI::App* run = app.add_subcommand("run", "Run a Monte-Carlo sweep described by a JSON config");
    run->add_option("config", config_path, "Sweep config (JSON)")->required();
    run->add_option("--output", output, "CSV path, overriding the config's output field");
    run->add_option("--workers", workers, "Worker threads (default: KRDOA_WORKERS or all cores)");

    SingleOptions single_opts;
    CLI::App* single = app.add_subcommand("single", "Estimate once on a synthetic scene and print JSON");
    single->add_option("--kind", single_opts.kind, "Array kind: URA, NURA, UPgA, NUPgA")->capture_default_str();
    single->add_option("--M", single_opts.M, "Elements along x")->capture_default_str();
    single->add_option("--N", single_opts.N, "Elements along z")->capture_default_str();
    single->add_option("--spacing", single_opts.spacing, "Uniform spacing in wavelengths")->capture_default_str();
    single->add_option("--geometry-seed", single_opts.geometry_seed, "Seed of non-uniform spacings")
        ->capture_default_str();
    single->add_option("--source", single_opts.sources, "AZIMUTH,ELEVATION in degrees (repeatable)");
    single->add_option("--snr", single_opts.snr_db, "SNR in dB; inf for noiseless")->capture_default_str();
    single->add_option("--snapshots", single_opts.snapshots, "Snapshot count")->capture_default_str();
    single->add_option("--method", single_opts.method, "Estimator name (see list-methods)")->capture_default_str();
    single->add_option("--seed", single_opts.seed, "Synthesis seed")->capture_default_str();
    single->add_option("--export-snapshots", single_opts.export_path, "Write the snapshot matrix to this file");

    CLI::App* list = app.add_subcommand("list-methods", "List estimator names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    if (*run) {
        RunOptions options;
        if (!output.empty()) options.output = output;
        options.workers = workers;
        return cmd_run(config_path, options, out, err);
    }
    if (*single) return cmd_single(single_opts, out, err);
    if (*list) return cmd_list_methods(out);
    return kExitUsage;
}

}  // namespace krdoa::cli
