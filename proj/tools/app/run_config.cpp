// SPDX-License-Identifier: Apache-2.0

#include "run_config.hpp"

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <set>

#include <json.hpp>

#include "krdoa/errors.hpp"

namespace krdoa::cli {
namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw UsageError(where + " must be a JSON object");
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    const std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
        if (!known.contains(item.key())) throw UsageError("unknown field '" + item.key() + "' in " + where);
    }
}

const json& required(const json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) throw UsageError("missing field '" + std::string(key) + "' in " + where);
    return *it;
}

double as_number(const json& j, const std::string& what) {
    if (!j.is_number()) throw UsageError(what + " must be a number");
    return j.get<double>();
}

std::uint64_t as_unsigned(const json& j, const std::string& what) {
    if (!j.is_number_unsigned()) throw UsageError(what + " must be a non-negative integer");
    return j.get<std::uint64_t>();
}

std::string as_string(const json& j, const std::string& what) {
    if (!j.is_string()) throw UsageError(what + " must be a string");
    return j.get<std::string>();
}

std::vector<double> as_numbers(const json& j, const std::string& what) {
    if (!j.is_array()) throw UsageError(what + " must be an array of numbers");
    std::vector<double> out;
    for (const json& v : j) out.push_back(as_number(v, what));
    return out;
}

template <typename T, typename F>
std::optional<T> optional_field(const json& j, const char* key, F convert) {
    const auto it = j.find(key);
    if (it == j.end()) return std::nullopt;
    return convert(*it, std::string(key));
}

RunConfig::Geometry parse_geometry(const json& j) {
    require_object(j, "geometry");
    reject_unknown(j, {"kind", "M", "N", "spacing", "seed", "x_positions", "z_positions"}, "geometry");
    RunConfig::Geometry g;
    try {
        g.kind = array_kind_from_string(as_string(required(j, "kind", "geometry"), "geometry.kind"));
    } catch (const krdoa::Error& e) {
        throw UsageError(e.what());
    }
    g.M = optional_field<std::size_t>(j, "M", as_unsigned);
    g.N = optional_field<std::size_t>(j, "N", as_unsigned);
    g.spacing = optional_field<double>(j, "spacing", as_number);
    g.seed = optional_field<std::uint64_t>(j, "seed", as_unsigned);
    g.x_positions = optional_field<std::vector<double>>(j, "x_positions", as_numbers);
    g.z_positions = optional_field<std::vector<double>>(j, "z_positions", as_numbers);
    return g;
}

std::vector<Direction> parse_sources(const json& j) {
    if (!j.is_array()) throw UsageError("sources must be an array");
    std::vector<Direction> out;
    for (const json& s : j) {
        require_object(s, "source");
        reject_unknown(s, {"azimuth_deg", "elevation_deg"}, "source");
        out.push_back({as_number(required(s, "azimuth_deg", "source"), "azimuth_deg"),
                       as_number(required(s, "elevation_deg", "source"), "elevation_deg")});
    }
    return out;
}

RunConfig::Search parse_search(const json& j) {
    require_object(j, "search");
    reject_unknown(j, {"coarse_step_deg", "fine_step_deg", "fine_halfwidth_deg", "opt_tolerance_deg"}, "search");
    return {optional_field<double>(j, "coarse_step_deg", as_number),
            optional_field<double>(j, "fine_step_deg", as_number),
            optional_field<double>(j, "fine_halfwidth_deg", as_number),
            optional_field<double>(j, "opt_tolerance_deg", as_number)};
}

template <typename T>
void put(json& j, const char* key, const std::optional<T>& value) {
    if (value) j[key] = *value;
}

GeometrySpec resolve_geometry(const RunConfig::Geometry& g) {
    GeometrySpec spec;
    spec.kind = g.kind;
    const bool uniform = g.kind == ArrayKind::URA || g.kind == ArrayKind::UPgA;
    if (g.x_positions || g.z_positions) {
        if (!g.x_positions || !g.z_positions) throw UsageError("geometry needs both x_positions and z_positions");
        if (g.spacing || g.seed) throw UsageError("geometry: spacing and seed conflict with explicit positions");
        if ((g.M && *g.M != g.x_positions->size()) || (g.N && *g.N != g.z_positions->size())) {
            throw UsageError("geometry: M and N disagree with the position lists");
        }
        spec.x_positions = g.x_positions;
        spec.z_positions = g.z_positions;
        spec.M = g.x_positions->size();
        spec.N = g.z_positions->size();
        return spec;
    }
    if (!g.M || !g.N) throw UsageError("geometry needs M and N");
    if (uniform && g.seed) throw UsageError("geometry: seed applies to non-uniform kinds only");
    if (!uniform && g.spacing) throw UsageError("geometry: spacing applies to uniform kinds only");
    spec.M = *g.M;
    spec.N = *g.N;
    spec.spacing = g.spacing.value_or(0.5);
    spec.seed = g.seed.value_or(0);
    return spec;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    require_object(j, "config");
    reject_unknown(j,
                   {"geometry", "sources", "methods", "sweep", "snr_db", "snapshots", "runs", "base_seed", "output",
                    "timing", "search"},
                   "config");
    RunConfig c;
    c.geometry = parse_geometry(required(j, "geometry", "config"));
    if (const auto it = j.find("sources"); it != j.end()) c.sources = parse_sources(*it);

    const json& methods = required(j, "methods", "config");
    if (!methods.is_array()) throw UsageError("methods must be an array of strings");
    for (const json& m : methods) c.methods.push_back(as_string(m, "method"));

    const json& sweep = required(j, "sweep", "config");
    require_object(sweep, "sweep");
    reject_unknown(sweep, {"axis", "values"}, "sweep");
    try {
        c.axis = sweep_axis_from_string(as_string(required(sweep, "axis", "sweep"), "sweep.axis"));
    } catch (const krdoa::Error& e) {
        throw UsageError(e.what());
    }
    c.values = as_numbers(required(sweep, "values", "sweep"), "sweep.values");

    c.snr_db = optional_field<double>(j, "snr_db", as_number);
    c.snapshots = optional_field<std::size_t>(j, "snapshots", as_unsigned);
    c.runs = as_unsigned(required(j, "runs", "config"), "runs");
    c.base_seed = as_unsigned(required(j, "base_seed", "config"), "base_seed");
    c.output = as_string(required(j, "output", "config"), "output");
    if (const auto it = j.find("timing"); it != j.end()) {
        require_object(*it, "timing");
        reject_unknown(*it, {"warmup"}, "timing");
        c.timing_warmup = as_unsigned(required(*it, "warmup", "timing"), "timing.warmup");
    }
    if (const auto it = j.find("search"); it != j.end()) c.search = parse_search(*it);
    return c;
}

std::string serialize_run_config(const RunConfig& c) {
    json g;
    g["kind"] = std::string(to_string(c.geometry.kind));
    put(g, "M", c.geometry.M);
    put(g, "N", c.geometry.N);
    put(g, "spacing", c.geometry.spacing);
    put(g, "seed", c.geometry.seed);
    put(g, "x_positions", c.geometry.x_positions);
    put(g, "z_positions", c.geometry.z_positions);

    json j;
    j["geometry"] = g;
    if (c.sources) {
        json s = json::array();
        for (const Direction& d : *c.sources) s.push_back({{"azimuth_deg", d.azimuth_deg}, {"elevation_deg", d.elevation_deg}});
        j["sources"] = s;
    }
    j["methods"] = c.methods;
    j["sweep"] = {{"axis", std::string(to_string(c.axis))}, {"values", c.values}};
    put(j, "snr_db", c.snr_db);
    put(j, "snapshots", c.snapshots);
    j["runs"] = c.runs;
    j["base_seed"] = c.base_seed;
    j["output"] = c.output;
    if (c.timing_warmup) j["timing"] = {{"warmup", *c.timing_warmup}};
    if (c.search) {
        json s = json::object();
        put(s, "coarse_step_deg", c.search->coarse_step_deg);
        put(s, "fine_step_deg", c.search->fine_step_deg);
        put(s, "fine_halfwidth_deg", c.search->fine_halfwidth_deg);
        put(s, "opt_tolerance_deg", c.search->opt_tolerance_deg);
        j["search"] = s;
    }
    return j.dump(2);
}

EnsembleConfig to_ensemble_config(const RunConfig& c) {
    EnsembleConfig e;
    e.geometry = resolve_geometry(c.geometry);
    if (c.sources) {
        if (c.sources->empty()) throw UsageError("sources must not be empty; omit the field for spread sources");
        e.sources = *c.sources;
    }
    if (c.methods.empty()) throw UsageError("methods must not be empty");
    for (const std::string& name : c.methods) {
        try {
            e.methods.push_back(method_from_string(name));
        } catch (const krdoa::Error& err) {
            throw UsageError(err.what());
        }
    }
    if (c.values.empty()) throw UsageError("sweep.values must not be empty");
    for (const double v : c.values) {
        if (!std::isfinite(v)) throw UsageError("sweep.values must be finite");
        if (c.axis != SweepAxis::Snr && (v < 1.0 || v != std::floor(v))) {
            throw UsageError("sweep.values must be positive integers for a " + std::string(to_string(c.axis)) +
                             " sweep");
        }
    }
    e.axis = c.axis;
    e.values = c.values;
    e.snr_db = c.snr_db.value_or(0.0);
    e.snapshots = c.snapshots.value_or(100);
    if (e.snapshots == 0) throw UsageError("snapshots must be positive");
    if (c.runs == 0) throw UsageError("runs must be positive");
    e.runs = c.runs;
    e.base_seed = c.base_seed;
    e.warmup = c.timing_warmup.value_or(0);
    if (c.search) {
        SearchSettings& s = e.search;
        s.coarse_step_deg = c.search->coarse_step_deg.value_or(s.coarse_step_deg);
        s.fine_step_deg = c.search->fine_step_deg.value_or(s.fine_step_deg);
        s.fine_halfwidth_deg = c.search->fine_halfwidth_deg.value_or(s.fine_halfwidth_deg);
        s.opt_tolerance_deg = c.search->opt_tolerance_deg.value_or(s.opt_tolerance_deg);
        if (!(s.coarse_step_deg > 0.0 && s.fine_step_deg > 0.0 && s.fine_halfwidth_deg > 0.0 &&
              s.opt_tolerance_deg > 0.0)) {
            throw UsageError("search settings must be positive");
        }
    }
    if (c.output.empty()) throw UsageError("output must name a file");

    try {
        for (const double v : c.values) {
            const ArrayGeometry geom = c.axis == SweepAxis::Size ? e.geometry.build_square(static_cast<std::size_t>(v))
                                                                 : e.geometry.build();
            if (e.sources.empty()) {
                if (max_decoupled_sources(geom.M(), geom.N()) == 0) {
                    throw UsageError("a " + std::to_string(geom.M()) + "x" + std::to_string(geom.N()) +
                                     " array is too small for spread sources");
                }
            } else {
                const SourceSet check(e.sources);
            }
        }
    } catch (const krdoa::Error& err) {
        throw UsageError(err.what());
    }
    return e;
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace krdoa::cli
