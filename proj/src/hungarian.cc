#include "evcore/hungarian.h"

#include <algorithm>
#include <limits>

namespace evcore {

std::vector<std::ptrdiff_t> max_weight_assignment(const Eigen::MatrixXd& weights) {
  const auto rows = static_cast<std::size_t>(weights.rows());
  const auto cols = static_cast<std::size_t>(weights.cols());
  std::vector<std::ptrdiff_t> result(rows, kUnassigned);
  if (rows == 0 || cols == 0) return result;

  // Square min-cost problem over cost = top - weight, padded with zero weight.
  const std::size_t n = std::max(rows, cols);
  const double top = weights.maxCoeff();
  auto cost = [&](std::size_t r, std::size_t c) {
    const double w = (r < rows && c < cols) ? weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) : 0.0;
    return top - w;
  };

  // Shortest augmenting path with potentials; 1-based with column 0 as a
  // virtual source.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t r = 1; r <= n; ++r) {
    match[0] = r;
    std::size_t col = 0;
    std::vector<double> min_to(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col] = true;
      const std::size_t row = match[col];
      double delta = inf;
      std::size_t next = 0;
      for (std::size_t c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double reduced = cost(row - 1, c - 1) - u[row] - v[c];
        if (reduced < min_to[c]) {
          min_to[c] = reduced;
          way[c] = col;
        }
        if (min_to[c] < delta) {
          delta = min_to[c];
          next = c;
        }
      }
      for (std::size_t c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          min_to[c] -= delta;
        }
      }
      col = next;
    } while (match[col] != 0);
    do {
      const std::size_t prev = way[col];
      match[col] = match[prev];
      col = prev;
    } while (col != 0);
  }
  for (std::size_t c = 1; c <= n; ++c) {
    const std::size_t r = match[c] - 1;
    if (r < rows && c - 1 < cols) result[r] = static_cast<std::ptrdiff_t>(c - 1);
  }
  return result;
}

double assignment_weight(const Eigen::MatrixXd& weights, const std::vector<std::ptrdiff_t>& assignment) {
  double total = 0.0;
  for (std::size_t r = 0; r < assignment.size(); ++r) {
    if (assignment[r] != kUnassigned) total += weights(static_cast<Eigen::Index>(r), assignment[r]);
  }
  return total;
}

}  // namespace evcore
