#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace evcore {

inline constexpr std::ptrdiff_t kUnassigned = -1;

// Kuhn-Munkres on a rectangular weight matrix. Returns, for each row, the
// column it is matched to (kUnassigned if the row is left over), maximizing
// the total matched weight.
std::vector<std::ptrdiff_t> max_weight_assignment(const Eigen::MatrixXd& weights);

double assignment_weight(const Eigen::MatrixXd& weights, const std::vector<std::ptrdiff_t>& assignment);

}  // namespace evcore
