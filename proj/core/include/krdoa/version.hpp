// SPDX-License-Identifier: Apache-2.0

#ifndef KRDOA_VERSION_HPP
#define KRDOA_VERSION_HPP

namespace krdoa {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace krdoa

#endif  // KRDOA_VERSION_HPP
