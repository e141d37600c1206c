// SPDX-License-Identifier: Apache-2.0

#include "krdoa/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "krdoa/errors.hpp"

namespace krdoa {

namespace {

constexpr double kSpacingTolerance = 1e-12;
constexpr double kUniformTolerance = 1e-9;
constexpr double kMuRoundingSlack = 1e-6;

void validate_axis(std::span<const double> positions, const char* axis) {
    const std::string name(axis);
    if (positions.empty()) {
        throw DomainError("geometry", name + " axis has no sensors");
    }
    if (positions.front() != 0.0) {
        throw DomainError("geometry", name + " axis must start at position 0");
    }
    for (std::size_t k = 1; k < positions.size(); ++k) {
        const double gap = positions[k] - positions[k - 1];
        if (!(gap > 0.0)) {
            throw DomainError("geometry", name + " positions must be strictly increasing");
        }
        if (gap > kMaxAdjacentSpacing + kSpacingTolerance) {
            throw DomainError("geometry", name + " adjacent spacing exceeds half a wavelength");
        }
    }
}

bool requires_uniform(ArrayKind kind) {
    return kind == ArrayKind::URA || kind == ArrayKind::UPgA;
}

}  // namespace

std::string_view to_string(ArrayKind kind) {
    switch (kind) {
        case ArrayKind::URA: return "URA";
        case ArrayKind::NURA: return "NURA";
        case ArrayKind::UPgA: return "UPgA";
        case ArrayKind::NUPgA: return "NUPgA";
    }
    return "URA";
}

ArrayKind array_kind_from_string(std::string_view name) {
    for (auto kind : {ArrayKind::URA, ArrayKind::NURA, ArrayKind::UPgA, ArrayKind::NUPgA}) {
        if (to_string(kind) == name) return kind;
    }
    throw DomainError("geometry", "unknown array kind '" + std::string(name) + "'");
}

ArrayGeometry ArrayGeometry::create(ArrayKind kind, std::vector<double> x_positions,
                                    std::vector<double> z_positions) {
    validate_axis(x_positions, "x");
    validate_axis(z_positions, "z");
    auto uniform = [](std::span<const double> p) { return p.size() < 2 || uniform_spacing(p).has_value(); };
    if (requires_uniform(kind) && (!uniform(x_positions) || !uniform(z_positions))) {
        throw DomainError("geometry", std::string(to_string(kind)) + " requires uniform spacing on both axes");
    }
    return ArrayGeometry(kind, std::move(x_positions), std::move(z_positions));
}

std::optional<double> ArrayGeometry::x_spacing() const { return uniform_spacing(x_); }
std::optional<double> ArrayGeometry::z_spacing() const { return uniform_spacing(z_); }

std::optional<double> uniform_spacing(std::span<const double> positions) {
    if (positions.size() < 2) return std::nullopt;
    const double d = positions[1] - positions[0];
    for (std::size_t k = 1; k < positions.size(); ++k) {
        if (std::abs(positions[k] - static_cast<double>(k) * d) > kUniformTolerance) {
            return std::nullopt;
        }
    }
    return d;
}

ArrayGeometry make_ura(std::size_t M, std::size_t N, double spacing) {
    if (M == 0 || N == 0) throw DomainError("geometry", "array dimensions must be positive");
    if (!(spacing > 0.0)) throw DomainError("geometry", "spacing must be positive");
    std::vector<double> x(M), z(N);
    for (std::size_t m = 0; m < M; ++m) x[m] = static_cast<double>(m) * spacing;
    for (std::size_t n = 0; n < N; ++n) z[n] = static_cast<double>(n) * spacing;
    return ArrayGeometry::create(ArrayKind::URA, std::move(x), std::move(z));
}

ArrayGeometry make_nura(std::size_t M, std::size_t N, std::uint64_t seed) {
    if (M == 0 || N == 0) throw DomainError("geometry", "array dimensions must be positive");
    std::mt19937_64 rng(seed);
    // Explicit 53-bit mapping keeps the draw sequence independent of the
    // standard library's distribution implementation.
    auto spacing = [&rng] {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return 0.3 + 0.2 * u;
    };
    std::vector<double> x(M, 0.0), z(N, 0.0);
    for (std::size_t m = 1; m < M; ++m) x[m] = x[m - 1] + spacing();
    for (std::size_t n = 1; n < N; ++n) z[n] = z[n - 1] + spacing();
    return ArrayGeometry::create(ArrayKind::NURA, std::move(x), std::move(z));
}

std::string geometry_to_json(const ArrayGeometry& geom) {
    nlohmann::json j;
    j["kind"] = std::string(to_string(geom.kind()));
    j["x_positions"] = std::vector<double>(geom.x_positions().begin(), geom.x_positions().end());
    j["z_positions"] = std::vector<double>(geom.z_positions().begin(), geom.z_positions().end());
    return j.dump();
}

ArrayGeometry geometry_from_json(std::string_view json) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json);
        for (const auto& [key, value] : j.items()) {
            if (key != "kind" && key != "x_positions" && key != "z_positions") {
                throw DomainError("geometry", "unknown geometry field '" + key + "'");
            }
        }
        return ArrayGeometry::create(array_kind_from_string(j.at("kind").get<std::string>()),
                                     j.at("x_positions").get<std::vector<double>>(),
                                     j.at("z_positions").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw DomainError("geometry", std::string("malformed geometry JSON: ") + e.what());
    }
}

SourceSet::SourceSet(std::vector<Direction> directions) : directions_(std::move(directions)) {
    if (directions_.empty()) throw DomainError("geometry", "source set is empty");
    for (std::size_t p = 0; p < directions_.size(); ++p) {
        for (std::size_t q = 0; q < p; ++q) {
            if (directions_[p] == directions_[q]) {
                throw DomainError("geometry", "duplicate source direction");
            }
        }
        mu_h_.push_back(angle_to_mu(directions_[p].azimuth_deg));
        mu_v_.push_back(angle_to_mu(directions_[p].elevation_deg));
    }
}

double angle_to_mu(double angle_deg) {
    if (!(angle_deg >= 0.0 && angle_deg <= 180.0)) {
        throw DomainError("geometry", "angle " + std::to_string(angle_deg) + " outside [0, 180] degrees");
    }
    return kTwoPi * std::cos(deg_to_rad(angle_deg));
}

double mu_to_angle(double mu) {
    if (!std::isfinite(mu) || std::abs(mu) > kTwoPi + kMuRoundingSlack) {
        throw DomainError("geometry", "spatial frequency " + std::to_string(mu) + " outside the visible band");
    }
    return rad_to_deg(std::acos(std::clamp(mu / kTwoPi, -1.0, 1.0)));
}

CVector steering_vector_1d(std::span<const double> positions, double mu) {
    if (positions.empty()) throw DomainError("geometry", "empty position list");
    CVector a(static_cast<Eigen::Index>(positions.size()));
    for (std::size_t k = 0; k < positions.size(); ++k) {
        a(static_cast<Eigen::Index>(k)) = std::polar(1.0, -mu * positions[k]);
    }
    return a;
}

CVector steering_vector_2d(const ArrayGeometry& geom, double mu_h, double mu_v) {
    const CVector ah = steering_vector_1d(geom.x_positions(), mu_h);
    const CVector av = steering_vector_1d(geom.z_positions(), mu_v);
    CVector a(ah.size() * av.size());
    for (Eigen::Index m = 0; m < ah.size(); ++m) {
        a.segment(m * av.size(), av.size()) = ah(m) * av;
    }
    return a;
}

CMatrix khatri_rao(const CMatrix& left, const CMatrix& right) {
    if (left.cols() != right.cols()) {
        throw DomainError("geometry", "Khatri-Rao factors need equal column counts");
    }
    CMatrix out(left.rows() * right.rows(), left.cols());
    for (Eigen::Index p = 0; p < left.cols(); ++p) {
        for (Eigen::Index m = 0; m < left.rows(); ++m) {
            out.col(p).segment(m * right.rows(), right.rows()) = left(m, p) * right.col(p);
        }
    }
    return out;
}

SteeringMatrices steering_matrix(const ArrayGeometry& geom, const SourceSet& sources) {
    const auto P = static_cast<Eigen::Index>(sources.size());
    SteeringMatrices s;
    s.azimuth.resize(static_cast<Eigen::Index>(geom.M()), P);
    s.elevation.resize(static_cast<Eigen::Index>(geom.N()), P);
    for (Eigen::Index p = 0; p < P; ++p) {
        const auto idx = static_cast<std::size_t>(p);
        s.azimuth.col(p) = steering_vector_1d(geom.x_positions(), sources.mu_h(idx));
        s.elevation.col(p) = steering_vector_1d(geom.z_positions(), sources.mu_v(idx));
    }
    s.full = khatri_rao(s.azimuth, s.elevation);
    return s;
}

}  // namespace krdoa
