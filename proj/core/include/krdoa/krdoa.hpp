// SPDX-License-Identifier: Apache-2.0

#ifndef KRDOA_KRDOA_HPP
#define KRDOA_KRDOA_HPP

#include "krdoa/assignment.hpp"
#include "krdoa/bench.hpp"
#include "krdoa/errors.hpp"
#include "krdoa/est1d.hpp"
#include "krdoa/est2d.hpp"
#include "krdoa/geometry.hpp"
#include "krdoa/scalar_min.hpp"
#include "krdoa/subspace.hpp"
#include "krdoa/synth.hpp"
#include "krdoa/types.hpp"
#include "krdoa/version.hpp"

#endif  // KRDOA_KRDOA_HPP
