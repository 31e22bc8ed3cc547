#include "pedflow/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pedflow {

std::vector<double> solve_lexicographic(const LexLp& lp, double eps) {
  const std::size_t m = lp.rows.size();
  const std::size_t n = lp.variables;
  const std::size_t cols = n + m;  // structural then slack columns
  for (double b : lp.rhs) {
    if (b < 0.0) throw std::invalid_argument("LP right-hand side must be nonnegative");
  }

  // Tableau rows [a | I | b]; the slack basis is feasible because b >= 0.
  std::vector<std::vector<double>> t(m, std::vector<double>(cols + 1, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) t[r][c] = lp.rows[r][c];
    t[r][n + r] = 1.0;
    t[r][cols] = lp.rhs[r];
    basis[r] = n + r;
  }

  // Reduced-cost rows, stored as -c so that a negative entry means "improving".
  std::vector<std::vector<double>> z;
  for (const auto& c : lp.objectives) {
    std::vector<double> row(cols + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) row[k] = -c[k];
    z.push_back(std::move(row));
  }

  auto pivot = [&](std::size_t pr, std::size_t pc) {
    const double p = t[pr][pc];
    for (double& v : t[pr]) v /= p;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == pr || t[r][pc] == 0.0) continue;
      const double f = t[r][pc];
      for (std::size_t c = 0; c <= cols; ++c) t[r][c] -= f * t[pr][c];
    }
    for (auto& row : z) {
      if (row[pc] == 0.0) continue;
      const double f = row[pc];
      for (std::size_t c = 0; c <= cols; ++c) row[c] -= f * t[pr][c];
    }
    basis[pr] = pc;
  };

  std::vector<bool> frozen(cols, false);
  for (auto& obj : z) {
    // Bland's rule: lowest improving column, lowest-basis-index ratio tie-break.
    for (;;) {
      std::size_t pc = cols;
      for (std::size_t c = 0; c < cols; ++c) {
        if (!frozen[c] && obj[c] < -eps) {
          pc = c;
          break;
        }
      }
      if (pc == cols) break;
      std::size_t pr = m;
      double best = 0.0;
      for (std::size_t r = 0; r < m; ++r) {
        if (t[r][pc] <= eps) continue;
        const double ratio = t[r][cols] / t[r][pc];
        if (pr == m || ratio < best - eps || (std::abs(ratio - best) <= eps && basis[r] < basis[pr])) {
          pr = r;
          best = ratio;
        }
      }
      if (pr == m) throw std::runtime_error("LP objective is unbounded");
      pivot(pr, pc);
    }
    // Entering a column with a positive reduced cost would lose optimality of this objective.
    for (std::size_t c = 0; c < cols; ++c) {
      if (obj[c] > eps) frozen[c] = true;
    }
  }

  std::vector<double> x(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) x[basis[r]] = std::max(0.0, t[r][cols]);
  }
  return x;
}

}  // namespace pedflow
