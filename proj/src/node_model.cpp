#include "pedflow/node_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pedflow/lp.hpp"
#include "pedflow/ltm_link.hpp"
#include "pedflow/network.hpp"

namespace pedflow {
namespace {

constexpr double kTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Level l with sum_i min(d_i, l) = supply; +inf if all demands fit.
double water_level(std::vector<double> d, double supply) {
  const double total = std::accumulate(d.begin(), d.end(), 0.0);
  if (total <= supply * (1.0 + kTol) + kTol) return kInf;
  std::sort(d.begin(), d.end());
  double left = supply;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double share = left / static_cast<double>(d.size() - k);
    if (d[k] >= share) return share;
    left -= d[k];
  }
  return kInf;
}

}  // namespace

double NodeFlowProblem::sending(std::size_t i) const {
  double s = 0.0;
  for (std::size_t j = 0; j < outgoing; ++j) s += S(i, j);
  return s;
}

double NodeFlowProblem::supply(std::size_t j) const {
  const double reserve = look_ahead.empty() ? 0.0 : look_ahead[j];
  return std::max(0.0, receiving[j] - reserve);
}

std::vector<double> equal_priority_reductions(const NodeFlowProblem& p) {
  const std::size_t n = p.incoming, m = p.outgoing;
  std::vector<double> theta(n, 1.0);
  std::vector<bool> fixed(n, false);
  std::vector<double> left(m);
  for (std::size_t j = 0; j < m; ++j) left[j] = p.supply(j);
  for (std::size_t i = 0; i < n; ++i) {
    if (p.sending(i) <= 0.0) fixed[i] = true;
  }

  std::vector<double> candidate(n);
  std::vector<double> d;
  for (;;) {
    std::fill(candidate.begin(), candidate.end(), 1.0);
    bool any = false;
    for (std::size_t j = 0; j < m; ++j) {
      if (std::isinf(left[j])) continue;
      d.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (!fixed[i] && p.S(i, j) > 0.0) d.push_back(p.S(i, j));
      }
      if (d.empty()) continue;
      const double level = water_level(d, std::max(0.0, left[j]));
      if (std::isinf(level)) continue;
      for (std::size_t i = 0; i < n; ++i) {
        if (!fixed[i] && p.S(i, j) > 0.0) {
          candidate[i] = std::min(candidate[i], std::min(1.0, level / p.S(i, j)));
        }
      }
    }
    double lowest = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!fixed[i] && candidate[i] < lowest) lowest = candidate[i];
    }
    if (lowest >= 1.0 - kTol) break;
    for (std::size_t i = 0; i < n; ++i) {
      if (fixed[i] || candidate[i] > lowest + 1e-12) continue;
      fixed[i] = true;
      theta[i] = lowest;
      any = true;
      for (std::size_t j = 0; j < m; ++j) left[j] -= lowest * p.S(i, j);
    }
    if (!any) break;
  }
  return theta;
}

NodeFlowSolution solve_node(const NodeFlowProblem& p) {
  const std::size_t n = p.incoming, m = p.outgoing;
  NodeFlowSolution sol;
  for (std::size_t j = 0; j < m; ++j) {
    if (!p.look_ahead.empty() && p.look_ahead[j] > p.receiving[j]) sol.clamped.push_back(j);
  }
  sol.reduction = equal_priority_reductions(p);

  std::size_t active = 0;
  bool restricted = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (p.sending(i) <= 0.0) continue;
    ++active;
    if (sol.reduction[i] < 1.0) restricted = true;
  }

  if (active > 1 && restricted) {
    // x = theta_fair + up - down; maximize throughput, then minimize |up| + |down|.
    LexLp lp;
    lp.variables = 2 * n;
    std::vector<double> throughput(2 * n, 0.0), distance(2 * n, -1.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = p.sending(i);
      throughput[i] = s;
      throughput[n + i] = -s;
      if (s <= 0.0) continue;
      std::vector<double> up(2 * n, 0.0), down(2 * n, 0.0);
      up[i] = 1.0;
      down[n + i] = 1.0;
      lp.rows.push_back(up);
      lp.rhs.push_back(std::max(0.0, 1.0 - sol.reduction[i]));
      lp.rows.push_back(down);
      lp.rhs.push_back(std::max(0.0, sol.reduction[i]));
    }
    for (std::size_t j = 0; j < m; ++j) {
      const double supply = p.supply(j);
      if (std::isinf(supply)) continue;
      std::vector<double> row(2 * n, 0.0);
      double used = 0.0;
      bool touched = false;
      for (std::size_t i = 0; i < n; ++i) {
        const double s = p.S(i, j);
        if (s <= 0.0) continue;
        row[i] = s;
        row[n + i] = -s;
        used += sol.reduction[i] * s;
        touched = true;
      }
      if (!touched) continue;
      lp.rows.push_back(row);
      lp.rhs.push_back(std::max(0.0, supply - used));
    }
    lp.objectives = {throughput, distance};
    const auto x = solve_lexicographic(lp);
    for (std::size_t i = 0; i < n; ++i) {
      if (p.sending(i) <= 0.0) continue;
      sol.reduction[i] = std::clamp(sol.reduction[i] + x[i] - x[n + i], 0.0, 1.0);
    }
  }

  sol.flow.assign(n * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) sol.flow[i * m + j] = sol.reduction[i] * p.S(i, j);
  }
  return sol;
}

double look_ahead_term(const Link& out, const CumulativeCurve* opposite, double t, double dt) {
  if (opposite == nullptr) return 0.0;
  const double shift = out.length / out.free_flow_speed;
  const double hi = std::min(t + dt - shift, opposite->time());
  const double lo = t - shift;
  if (hi <= lo) return 0.0;
  return std::max(0.0, opposite->upstream_at(hi) - opposite->upstream_at(lo));
}

}  // namespace pedflow
