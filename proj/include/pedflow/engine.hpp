#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pedflow/config.hpp"
#include "pedflow/loader.hpp"
#include "pedflow/network.hpp"
#include "pedflow/route_choice.hpp"
#include "pedflow/time_space.hpp"

namespace pedflow {

struct ConservationReport {
  std::size_t checks = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Per-link 0 <= U - V <= k_j L w, non-decreasing U and V, commodity curves summing to the
// totals, and per-destination trip balance (demanded = queued + on links + arrived).
ConservationReport check_conservation(const Network& network, const LoadResult& load,
                                      double tolerance = 1e-6);

DueOptions due_options(const ScenarioConfig& config, const Network& network);

struct RunResult {
  DueResult due;
  ConservationReport conservation;
  double wall_seconds = 0.0;
};

// Validates the inputs (ValidationError), runs assignment and loading, checks conservation
// and, if `out_dir` is not empty, writes every export there. A conservation failure is
// reported in the result and in summary.json; it does not throw.
RunResult run_scenario(const ScenarioConfig& config, const Network& network,
                       const DemandProfile& demand, const std::string& out_dir);

// Files written by run_scenario: network.csv, demand.csv, config.txt, cumulative_curves.csv,
// link_state.csv, path_flows.csv, gap.csv, route_times.csv, summary.json, timing.json and,
// with debug.node_trace, node_trace.csv.
void write_exports(const std::string& out_dir, const ScenarioConfig& config, const Network& network,
                   const DemandProfile& demand, const RunResult& result);

// Reads a finished run directory and writes ts_density.csv, ts_flow.csv and shockwaves.csv
// for the path through `node_ids`. Throws ValidationError if the path is not in the network.
TimeSpaceMatrix export_time_space(const std::string& run_dir, const std::vector<int>& node_ids);

}  // namespace pedflow
