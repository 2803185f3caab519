#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace wfollow::tracker {

/// Marks a cell that may not be part of any matching.
inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

using Matching = std::vector<std::pair<std::size_t, std::size_t>>;

/// Rectangular linear assignment.
///
/// Returns (row, col) pairs sorted by row. The matching has maximum
/// cardinality over feasible cells and, among those, minimum total cost.
/// Cells equal to `infeasible_marker` (or NaN) are never selected.
Matching solve_assignment(const Eigen::MatrixXd& cost, double infeasible_marker = kInfeasible);

}  // namespace wfollow::tracker
