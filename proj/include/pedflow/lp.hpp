#pragma once

#include <cstddef>
#include <vector>

namespace pedflow {

// Dense linear program  max c_1.x, then c_2.x, ...  s.t.  A x <= b, x >= 0, with b >= 0.
//
// Objectives are optimized lexicographically: each later objective is maximized over the
// optimal face of the earlier ones. Intended for the tiny problems of a node solve.
struct LexLp {
  std::size_t variables = 0;
  std::vector<std::vector<double>> rows;  // each of length `variables`
  std::vector<double> rhs;                // one per row, nonnegative
  std::vector<std::vector<double>> objectives;
};

// Optimal x. Throws std::invalid_argument for a negative right-hand side and
// std::runtime_error if an objective is unbounded.
std::vector<double> solve_lexicographic(const LexLp& lp, double eps = 1e-12);

}  // namespace pedflow
