#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace pedflow {

struct Link;

enum class PvdfMode { symmetric, asymmetric };

// Pedestrian volume-delay function parameters.
//
// symmetric:  tau * (1 + alpha * ((u + u_opp) / C)^beta)
// asymmetric: symmetric + tau * mu * exp(eta_r (u/C - lambda_r)^2 + eta_c (u_opp/C - lambda_c)^2)
//
// The bidirectional term is a bounded bump only for eta_r, eta_c <= 0; validate() enforces it.
struct PvdfParams {
  PvdfMode mode = PvdfMode::symmetric;
  double alpha = 0.15;
  double beta = 4.0;
  double mu = 0.0;
  double eta_r = 0.0;
  double lambda_r = 0.0;
  double eta_c = 0.0;
  double lambda_c = 0.0;
};

void validate(const PvdfParams& params);

double link_cost(double free_flow_time, double capacity, const PvdfParams& params, double u,
                 double u_opp);
// u and u_opp are inflow rates (ped/s) of the link and of its opposite direction.
double link_cost(const Link& link, const PvdfParams& params, double u, double u_opp);

// Sum of link costs frozen at the departure bin (pre-trip information).
// `costs_at_k` is indexed by link index.
double instantaneous_route_time(std::span<const std::size_t> path_links,
                                std::span<const double> costs_at_k);

struct RouteTime {
  double seconds = 0.0;
  bool complete = true;  // false when the trip would end past the horizon
};

// Traversal time of link `link` entered at time `t`.
using LinkTimeFn = std::function<double(std::size_t link, double t)>;

// Walks the path link by link, entering each link when the previous one is left.
RouteTime experienced_route_time(std::span<const std::size_t> path_links,
                                 const LinkTimeFn& link_time, double depart, double horizon);

}  // namespace pedflow
