#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace rdmodal {

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method,
/// O(n^3)). Returns col[i], the column assigned to row i.
std::vector<std::size_t> solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace rdmodal
