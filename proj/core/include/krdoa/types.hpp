// SPDX-License-Identifier: Apache-2.0

#ifndef KRDOA_TYPES_HPP
#define KRDOA_TYPES_HPP

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace krdoa {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace krdoa

#endif  // KRDOA_TYPES_HPP
