#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace pedflow {

struct Link;

// Pedestrians per destination commodity: (destination slot, count).
using CommodityFlows = std::vector<std::pair<std::size_t, double>>;

double total(const CommodityFlows& flows);

// Upstream (U) and downstream (V) cumulative counts of one link on a regular time grid,
// with a per-destination decomposition. Bin n holds the counts at time n * dt.
//
// Commodity series are allocated on first use, so a link only pays for the destinations
// that actually traverse it.
class CumulativeCurve {
 public:
  explicit CumulativeCurve(double dt, std::size_t reserve_steps = 0);

  double dt() const { return dt_; }
  std::size_t step() const { return up_.size() - 1; }
  double time() const { return static_cast<double>(step()) * dt_; }

  const std::vector<double>& upstream() const { return up_; }
  const std::vector<double>& downstream() const { return down_; }
  // Linear interpolation between bins; 0 before the start. Throws std::out_of_range for
  // instants after the latest committed bin.
  double upstream_at(double t) const;
  double downstream_at(double t) const;
  double occupancy() const { return up_.back() - down_.back(); }

  std::size_t commodity_capacity() const { return com_up_.size(); }
  const std::vector<std::size_t>& active_commodities() const { return active_; }
  double commodity_upstream(std::size_t slot, std::size_t n) const;
  double commodity_downstream(std::size_t slot, std::size_t n) const;
  double commodity_occupancy(std::size_t slot) const;
  // Commodity entries among the first `rank` pedestrians that entered (FIFO rank matching).
  double commodity_upstream_at_rank(std::size_t slot, double rank) const;
  // Time at which the upstream count first reached `rank`, interpolated.
  double time_of_upstream_rank(double rank) const;
  // Time at which the downstream count first reached `rank`; negative if not yet reached.
  double time_of_downstream_rank(double rank) const;

  // Appends bin step()+1. No feasibility checks; see advance().
  void push(const CommodityFlows& inflow, const CommodityFlows& outflow);

 private:
  std::vector<double>& series(std::vector<std::vector<double>>& table, std::size_t slot);

  double dt_;
  std::vector<double> up_, down_;
  std::vector<std::vector<double>> com_up_, com_down_;
  std::vector<std::size_t> active_;
};

struct FlowBounds {
  double sending = 0.0;    // pedestrians per step
  double receiving = 0.0;  // pedestrians per step
};

// S = min(U(t + dt - L / v_hat) - V(t), C dt) at the curve's latest bin t.
double sending_flow(const Link& link, const CumulativeCurve& curve, double effective_speed);

// R = min(V(t + dt - L / omega) + k L w - U(t), C dt) where k is the storage density
// (physical jam density by default).
double receiving_flow(const Link& link, const CumulativeCurve& curve, double storage_density);

// Destination mix of the next `sending` pedestrians at the downstream end, by FIFO rank.
CommodityFlows sending_composition(const CumulativeCurve& curve, double sending);

// Commits one step. Throws RuntimeError if inflow exceeds the receiving bound, outflow
// exceeds the sending bound, or a commodity leaves that is not on the link.
void advance(CumulativeCurve& curve, const CommodityFlows& inflow, const CommodityFlows& outflow,
             const FlowBounds& bounds);

}  // namespace pedflow
