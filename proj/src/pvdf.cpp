#include "pedflow/pvdf.hpp"

#include <cmath>

#include "pedflow/diagnostics.hpp"
#include "pedflow/network.hpp"

namespace pedflow {

void validate(const PvdfParams& p) {
  if (!(p.alpha >= 0.0)) throw ValidationError("pvdf.alpha must be >= 0");
  if (!(p.beta >= 1.0)) throw ValidationError("pvdf.beta must be >= 1");
  if (p.mode == PvdfMode::asymmetric) {
    if (!(p.mu >= 0.0)) throw ValidationError("pvdf.mu must be >= 0");
    if (!(p.eta_r <= 0.0) || !(p.eta_c <= 0.0)) {
      throw ValidationError("pvdf.eta_r and pvdf.eta_c must be <= 0 (bounded bidirectional term)");
    }
  }
}

double link_cost(double tau, double capacity, const PvdfParams& p, double u, double u_opp) {
  double cost = tau * (1.0 + p.alpha * std::pow((u + u_opp) / capacity, p.beta));
  if (p.mode == PvdfMode::asymmetric && p.mu != 0.0) {
    const double dr = u / capacity - p.lambda_r;
    const double dc = u_opp / capacity - p.lambda_c;
    cost += tau * p.mu * std::exp(p.eta_r * dr * dr + p.eta_c * dc * dc);
  }
  return cost;
}

double link_cost(const Link& link, const PvdfParams& p, double u, double u_opp) {
  return link_cost(link.free_flow_time(), link.capacity, p, u, u_opp);
}

double instantaneous_route_time(std::span<const std::size_t> path_links,
                                std::span<const double> costs_at_k) {
  double total = 0.0;
  for (std::size_t a : path_links) total += costs_at_k[a];
  return total;
}

RouteTime experienced_route_time(std::span<const std::size_t> path_links,
                                 const LinkTimeFn& link_time, double depart, double horizon) {
  double t = depart;
  for (std::size_t a : path_links) {
    if (t > horizon) return {t - depart, false};
    const double c = link_time(a, t);
    if (!std::isfinite(c)) return {std::numeric_limits<double>::infinity(), false};
    t += c;
  }
  return {t - depart, t <= horizon};
}

}  // namespace pedflow
