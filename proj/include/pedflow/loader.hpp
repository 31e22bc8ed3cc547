#pragma once

#include <cstddef>
#include <vector>

#include "pedflow/fundamental_diagram.hpp"
#include "pedflow/ltm_link.hpp"
#include "pedflow/network.hpp"
#include "pedflow/turning_fractions.hpp"

namespace pedflow {

struct LoaderOptions {
  SpeedVariant variant = SpeedVariant::logistic;
  double gamma = 1.0;
  bool effective_storage = false;  // storage term rho * k_j instead of k_j
  bool trace_nodes = false;
};

// One movement of one solved node problem. `from_link` is -1 for an origin queue and
// `to_link` is -1 for a destination sink.
struct NodeTraceRow {
  int node = 0;
  double t = 0.0;
  int from_link = -1;
  int to_link = -1;
  double demand = 0.0;      // S_ij
  double receiving = 0.0;   // R_j (infinite for a sink)
  double look_ahead = 0.0;  // counterflow reservation on j
  double window_lo = 0.0;   // look-ahead window on the opposite link's upstream curve
  double window_hi = 0.0;
  double flow = 0.0;  // q_ij
};

// Per-destination trip accounting at the end of a loading.
struct TripBalance {
  double demanded = 0.0;   // released into origin queues
  double queued = 0.0;     // still waiting at origins
  double in_network = 0.0; // on links
  double arrived = 0.0;    // absorbed by the destination
};

struct LoadResult {
  const Network* network = nullptr;
  TimeGrid grid;
  LoaderOptions options;
  std::vector<CumulativeCurve> curves;  // per link
  std::vector<TripBalance> balance;     // per destination slot
  std::vector<double> link_transfer;    // per step: link-to-link flow summed over nodes
  std::vector<NodeTraceRow> trace;
  std::size_t clamped_supplies = 0;  // look-ahead larger than receiving flow

  double occupancy(std::size_t link, std::size_t step) const;
  double density(std::size_t link, std::size_t step) const;  // ped/m^2
  double density_ratio(std::size_t link, std::size_t step) const;
  double effective_speed(std::size_t link, std::size_t step) const;
  // Average inflow rate (ped/s) over [t0, t1].
  double inflow_rate(std::size_t link, double t0, double t1) const;
  // Time to traverse `link` when entering at t: at least L / v_hat(t) and no earlier than the
  // exit of the pedestrians ahead. +infinity if they have not left by the horizon.
  double traversal_time(std::size_t link, double t) const;
};

// Dynamic network loading: vertical queues at origins, LTM links, node model with
// look-ahead at every node, sinks at destinations. Throws RuntimeError on a conservation
// breach or when a pedestrian has no route to its destination.
LoadResult load_network(const Network& network, const TimeGrid& grid, const DemandTable& demand,
                        const TurningFractions& fractions, const LoaderOptions& options = {});

}  // namespace pedflow
