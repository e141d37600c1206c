// SPDX-License-Identifier: Apache-2.0

#ifndef KRDOA_GEOMETRY_HPP
#define KRDOA_GEOMETRY_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "krdoa/types.hpp"

namespace krdoa {

enum class ArrayKind { URA, NURA, UPgA, NUPgA };

std::string_view to_string(ArrayKind kind);
ArrayKind array_kind_from_string(std::string_view name);

/// Largest admissible distance between adjacent sensors, in wavelengths.
inline constexpr double kMaxAdjacentSpacing = 0.5;

/// Separable planar array. Sensor (m, n) sits at x_positions[m] along x and
/// z_positions[n] along z; all lengths are in wavelengths. Immutable once built.
///
/// Invariants: both position lists start at 0, are strictly increasing, and no
/// adjacent gap exceeds half a wavelength. URA/UPgA additionally require
/// uniform spacing on both axes.
class ArrayGeometry {
public:
    /// Validates and builds a geometry; throws DomainError on any violated invariant.
    static ArrayGeometry create(ArrayKind kind, std::vector<double> x_positions,
                                std::vector<double> z_positions);

    ArrayKind kind() const noexcept { return kind_; }
    std::size_t M() const noexcept { return x_.size(); }
    std::size_t N() const noexcept { return z_.size(); }
    std::size_t size() const noexcept { return x_.size() * z_.size(); }
    std::span<const double> x_positions() const noexcept { return x_; }
    std::span<const double> z_positions() const noexcept { return z_; }

    /// Common spacing along x, or nullopt when the x axis is non-uniform.
    std::optional<double> x_spacing() const;
    std::optional<double> z_spacing() const;

    friend bool operator==(const ArrayGeometry&, const ArrayGeometry&) = default;

private:
    ArrayGeometry(ArrayKind kind, std::vector<double> x, std::vector<double> z)
        : kind_(kind), x_(std::move(x)), z_(std::move(z)) {}

    ArrayKind kind_;
    std::vector<double> x_;
    std::vector<double> z_;
};

/// Uniform spacing of a position list (tolerance 1e-9 wavelengths), if any.
std::optional<double> uniform_spacing(std::span<const double> positions);

ArrayGeometry make_ura(std::size_t M, std::size_t N, double spacing = 0.5);

/// Structured non-uniform rectangular array: adjacent spacings drawn i.i.d.
/// uniform on [0.3, 0.5] wavelengths, x axis first, from a seeded mt19937_64.
ArrayGeometry make_nura(std::size_t M, std::size_t N, std::uint64_t seed);

/// JSON description {"kind", "x_positions", "z_positions"}.
std::string geometry_to_json(const ArrayGeometry& geom);
ArrayGeometry geometry_from_json(std::string_view json);

/// One source direction in degrees, azimuth from the x axis and elevation
/// from the z axis, both in [0, 180].
struct Direction {
    double azimuth_deg;
    double elevation_deg;

    friend bool operator==(const Direction&, const Direction&) = default;
};

/// Ground-truth source directions plus their spatial frequencies.
class SourceSet {
public:
    /// Throws DomainError for empty input, out-of-range angles or duplicate pairs.
    explicit SourceSet(std::vector<Direction> directions);

    std::size_t size() const noexcept { return directions_.size(); }
    std::span<const Direction> directions() const noexcept { return directions_; }
    const Direction& operator[](std::size_t p) const { return directions_[p]; }
    double mu_h(std::size_t p) const { return mu_h_[p]; }
    double mu_v(std::size_t p) const { return mu_v_[p]; }

private:
    std::vector<Direction> directions_;
    std::vector<double> mu_h_;
    std::vector<double> mu_v_;
};

/// mu = 2*pi*cos(angle); throws DomainError outside [0, 180] degrees.
double angle_to_mu(double angle_deg);

/// Inverse of angle_to_mu. |mu| up to 2*pi + 1e-6 is clamped onto the
/// valid range; anything further out throws DomainError.
double mu_to_angle(double mu);

/// Element k is exp(-j * mu * positions[k]).
CVector steering_vector_1d(std::span<const double> positions, double mu);

/// Kronecker product a_h(mu_h) (x) a_v(mu_v); element m*N + n.
CVector steering_vector_2d(const ArrayGeometry& geom, double mu_h, double mu_v);

struct SteeringMatrices {
    CMatrix full;        // MN x P, Khatri-Rao product of the factors
    CMatrix azimuth;     // M x P
    CMatrix elevation;   // N x P
};

SteeringMatrices steering_matrix(const ArrayGeometry& geom, const SourceSet& sources);

/// Column-wise Kronecker product of two matrices with equal column counts.
CMatrix khatri_rao(const CMatrix& left, const CMatrix& right);

}  // namespace krdoa

#endif  // KRDOA_GEOMETRY_HPP
