// SPDX-License-Identifier: Apache-2.0

#ifndef KRDOA_SCALAR_MIN_HPP
#define KRDOA_SCALAR_MIN_HPP

#include <cstddef>
#include <functional>

namespace krdoa {

struct ScalarMinimum {
    double x = 0.0;
    double value = 0.0;
    std::size_t evaluations = 0;
};

/// Bounded derivative-free minimisation on [lower, upper]: golden-section
/// steps with parabolic interpolation (Brent), stopping once the bracket
/// around the current best point is within `x_tolerance` absolute. The
/// returned point never leaves [lower, upper]; both bounds are also compared
/// so a minimum on the boundary is reported exactly.
ScalarMinimum minimize_bounded(const std::function<double(double)>& f, double lower, double upper,
                               double x_tolerance);

}  // namespace krdoa

#endif  // KRDOA_SCALAR_MIN_HPP
