// SPDX-License-Identifier: Apache-2.0

#ifndef KRDOA_ASSIGNMENT_HPP
#define KRDOA_ASSIGNMENT_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace krdoa {

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method
/// with potentials, O(n^3)). Returns col_of_row: row i is matched to column
/// col_of_row[i].
std::vector<std::size_t> optimal_assignment(const Eigen::MatrixXd& cost);

}  // namespace krdoa

#endif  // KRDOA_ASSIGNMENT_HPP
