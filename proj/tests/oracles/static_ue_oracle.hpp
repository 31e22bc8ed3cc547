#pragma once

// Static user equilibrium on two parallel links with costs c_i(f) = tau_i (1 + alpha (f / C_i)^beta):
// bisection on the flow of link 1 until both costs agree (or one link carries everything).

#include <cmath>

namespace oracle {

struct ParallelLink {
  double tau, capacity;
};

inline double bpr(const ParallelLink& l, double alpha, double beta, double f) {
  return l.tau * (1.0 + alpha * std::pow(f / l.capacity, beta));
}

// Equilibrium flow on link 1 for total demand q.
inline double parallel_ue(ParallelLink a, ParallelLink b, double alpha, double beta, double q) {
  auto excess = [&](double f1) { return bpr(a, alpha, beta, f1) - bpr(b, alpha, beta, q - f1); };
  if (excess(q) <= 0.0) return q;
  if (excess(0.0) >= 0.0) return 0.0;
  double lo = 0.0, hi = q;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
