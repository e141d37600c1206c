// SPDX-License-Identifier: Apache-2.0

#include "krdoa/assignment.hpp"

#include <limits>

#include "krdoa/errors.hpp"

namespace krdoa {

std::vector<std::size_t> optimal_assignment(const Eigen::MatrixXd& cost) {
    if (cost.rows() != cost.cols()) throw DomainError("est2d", "assignment needs a square cost matrix");
    if (!cost.allFinite()) throw DomainError("est2d", "assignment costs must be finite");
    const auto n = static_cast<std::size_t>(cost.rows());
    if (n == 0) return {};

    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based shortest augmenting path formulation; index 0 is a sentinel.
    std::vector<double> row_potential(n + 1, 0.0);
    std::vector<double> col_potential(n + 1, 0.0);
    std::vector<std::size_t> row_of_col(n + 1, 0);
    std::vector<std::size_t> way(n + 1, 0);

    for (std::size_t row = 1; row <= n; ++row) {
        row_of_col[0] = row;
        std::size_t col0 = 0;
        std::vector<double> min_slack(n + 1, inf);
        std::vector<bool> visited(n + 1, false);
        do {
            visited[col0] = true;
            const std::size_t r = row_of_col[col0];
            double delta = inf;
            std::size_t next_col = 0;
            for (std::size_t c = 1; c <= n; ++c) {
                if (visited[c]) continue;
                const double slack = cost(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c - 1)) -
                                     row_potential[r] - col_potential[c];
                if (slack < min_slack[c]) {
                    min_slack[c] = slack;
                    way[c] = col0;
                }
                if (min_slack[c] < delta) {
                    delta = min_slack[c];
                    next_col = c;
                }
            }
            for (std::size_t c = 0; c <= n; ++c) {
                if (visited[c]) {
                    row_potential[row_of_col[c]] += delta;
                    col_potential[c] -= delta;
                } else {
                    min_slack[c] -= delta;
                }
            }
            col0 = next_col;
        } while (row_of_col[col0] != 0);
        do {
            const std::size_t prev = way[col0];
            row_of_col[col0] = row_of_col[prev];
            col0 = prev;
        } while (col0 != 0);
    }

    std::vector<std::size_t> col_of_row(n);
    for (std::size_t c = 1; c <= n; ++c) col_of_row[row_of_col[c] - 1] = c - 1;
    return col_of_row;
}

}  // namespace krdoa
