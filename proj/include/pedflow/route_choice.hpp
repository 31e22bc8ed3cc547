#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pedflow/loader.hpp"
#include "pedflow/network.hpp"
#include "pedflow/pvdf.hpp"
#include "pedflow/turning_fractions.hpp"

namespace pedflow {

// Additive cost on a link for every departure at or after `start` (a soft closure).
struct LinkPenalty {
  std::size_t link = 0;  // link index
  double start = 0.0;    // s
  double cost = 0.0;     // s
};

// Instantaneous link costs per departure bin.
struct LinkCosts {
  std::size_t links = 0;
  std::size_t bins = 0;
  std::vector<double> value;  // [bin * links + link]

  double at(std::size_t link, std::size_t bin) const { return value[bin * links + link]; }
  std::span<const double> bin_costs(std::size_t bin) const {
    return {value.data() + bin * links, links};
  }
};

LinkCosts free_flow_costs(const Network& network, const TimeGrid& grid,
                          std::span<const LinkPenalty> penalties = {});
// pVDF of the inflow rates of each link and its opposite, averaged over each departure bin.
LinkCosts pvdf_costs(const Network& network, const TimeGrid& grid, const LoadResult& load,
                     const PvdfParams& params, std::span<const LinkPenalty> penalties = {});

// Backward shortest-path tree towards one destination.
struct ShortestTree {
  std::vector<std::size_t> next;  // link index per node; kNone at the destination or if unreachable
  std::vector<double> time;       // per node; +infinity if unreachable
};

// Ties are broken towards the smaller next-node id, then the smaller link id, which makes the
// extracted path the lexicographically smallest among the minimal ones. Throws
// RuntimeError on a non-finite or nonpositive cost.
ShortestTree shortest_paths(const Network& network, std::span<const double> costs,
                            std::size_t destination);
// Shortest-path successors towards every destination of `demand` for every departure bin.
SuccessorTable successor_table(const Network& network, const DemandTable& demand,
                               const LinkCosts& costs);

// Empty path if the origin cannot reach the tree's destination.
Path tree_path(const ShortestTree& tree, const Network& network, OdPair od);

enum class StopReason { gap_below_tol, max_iters };
const char* to_string(StopReason reason);

struct ConvergenceReport {
  std::vector<double> gaps;  // one per iteration
  StopReason reason = StopReason::max_iters;
};

struct AssignmentState {
  std::size_t iteration = 0;
  std::vector<OdPathFlows> flows;  // per OD
  LinkCosts costs;                 // costs after the latest loading
};

// Method of successive averages: f <- (1 - 1/n) f + (1/n) * all-or-nothing on `shortest`,
// where shortest[od][bin] is the current shortest path. New paths join the path set.
void update_flows(AssignmentState& state, const DemandTable& demand,
                  const std::vector<std::vector<Path>>& shortest, std::size_t iteration);

// (sum f u - sum q u_min) / sum q u_min, 0 without demand.
double relative_gap(double assigned_cost, double shortest_cost);

struct GapTerms {
  double assigned = 0.0;  // sum over paths and bins of f * dk * path cost
  double shortest = 0.0;  // sum over ODs and bins of q * dk * shortest cost
};
GapTerms gap_terms(const AssignmentState& state, const DemandTable& demand, const TimeGrid& grid,
                   const LinkCosts& costs, const std::vector<std::vector<double>>& shortest_time);

struct DueOptions {
  PvdfParams pvdf;
  std::size_t max_iters = 50;
  double gap_tol = 1e-3;
  LoaderOptions loader;
  std::vector<LinkPenalty> penalties;
};

struct DueResult {
  AssignmentState state;
  ConvergenceReport report;
  LoadResult load;           // loading of the final iteration
  TurningFractions fractions;
};

// Route choice and loading in alternation until the relative gap drops to gap_tol or
// max_iters iterations have run.
DueResult run_due(const Network& network, const TimeGrid& grid, const DemandTable& demand,
                  const DueOptions& options);

}  // namespace pedflow
