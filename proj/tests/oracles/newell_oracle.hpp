#pragma once

// Classic single-direction link transmission on a chain of links, written directly from
// Newell's cumulative-curve construction with integer lookbacks (no interpolation).
//
//   S_i(n) = min(U_i(n + 1 - F_i) - V_i(n), C_i)       F_i = L_i / (v_f dt)
//   R_i(n) = min(V_i(n + 1 - W_i) + N_i - U_i(n), C_i)  W_i = L_i / (omega dt), N_i = storage
//   transfer between consecutive links = min(S_i, R_{i+1}); origin queue feeds link 0,
//   the last link discharges freely.

#include <algorithm>
#include <cstddef>
#include <vector>

namespace oracle {

struct NewellLink {
  int free_steps = 1;  // L / (v_f dt)
  int wave_steps = 1;  // L / (omega dt)
  double capacity = 0.0;  // per step
  double storage = 0.0;
};

struct NewellResult {
  std::vector<std::vector<double>> U, V;  // [link][bin]
};

inline NewellResult newell_chain(const std::vector<NewellLink>& links,
                                 const std::vector<double>& demand_per_step, std::size_t steps) {
  const std::size_t k = links.size();
  NewellResult r;
  r.U.assign(k, std::vector<double>(steps + 1, 0.0));
  r.V.assign(k, std::vector<double>(steps + 1, 0.0));
  auto at = [](const std::vector<double>& c, long n) { return n < 0 ? 0.0 : c[static_cast<std::size_t>(n)]; };
  double queue = 0.0;
  for (std::size_t n = 0; n < steps; ++n) {
    const long t = static_cast<long>(n);
    if (n < demand_per_step.size()) queue += demand_per_step[n];
    std::vector<double> S(k), R(k);
    for (std::size_t i = 0; i < k; ++i) {
      S[i] = std::max(0.0, std::min(at(r.U[i], t + 1 - links[i].free_steps) - r.V[i][n], links[i].capacity));
      R[i] = std::max(0.0, std::min(at(r.V[i], t + 1 - links[i].wave_steps) + links[i].storage - r.U[i][n],
                                    links[i].capacity));
    }
    std::vector<double> in(k, 0.0), out(k, 0.0);
    in[0] = std::min(queue, R[0]);
    queue -= in[0];
    for (std::size_t i = 0; i + 1 < k; ++i) {
      out[i] = std::min(S[i], R[i + 1]);
      in[i + 1] = out[i];
    }
    out[k - 1] = S[k - 1];
    for (std::size_t i = 0; i < k; ++i) {
      r.U[i][n + 1] = r.U[i][n] + in[i];
      r.V[i][n + 1] = r.V[i][n] + out[i];
    }
  }
  return r;
}

}  // namespace oracle
