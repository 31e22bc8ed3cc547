#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pedflow/fundamental_diagram.hpp"
#include "pedflow/network.hpp"
#include "pedflow/pvdf.hpp"

namespace pedflow {

struct PenaltySpec {
  int link_id = 0;
  double start = 0.0;
  double cost = 0.0;
};

// Run configuration. Values not published with the scenarios are labeled defaults, not data.
struct ScenarioConfig {
  TimeGrid grid{1.0, 0.0, 1.0};  // horizon 0 lets a built-in scenario pick its own
  SpeedVariant variant = SpeedVariant::logistic;
  double gamma = 1.0;
  PvdfParams pvdf;
  std::size_t max_iters = 50;
  double gap_tol = 1e-3;
  bool effective_storage = false;
  std::vector<PenaltySpec> penalties;
  std::string output_dir;
  std::uint64_t seed = 0;  // reserved; the engine is deterministic
  bool node_trace = false;
  double bottleneck_width = 1.5;  // m, corridor scenarios only
};

// Flat "key = value" text; '#' starts a comment. Keys:
//   time.dt time.horizon time.departure_interval
//   fd.variant (logistic|power) fd.gamma
//   pvdf.mode (symmetric|asymmetric) pvdf.alpha pvdf.beta pvdf.mu pvdf.eta_r pvdf.lambda_r
//   pvdf.eta_c pvdf.lambda_c
//   due.max_iters due.gap_tol ltm.effective_storage (true|false)
//   penalty.<n> = <link_id>,<start_s>,<added_cost_s>
//   output.dir seed debug.node_trace corridor.bottleneck_width
// Unknown keys and malformed values throw ValidationError. Keys absent from the text keep
// the values already in `base`.
ScenarioConfig parse_config(std::istream& in, ScenarioConfig base = {});
ScenarioConfig read_config_file(const std::string& path, ScenarioConfig base = {});
void write_config(std::ostream& out, const ScenarioConfig& config);

// Range checks on every field (grid, FD exponent, pVDF, tolerance).
void validate(const ScenarioConfig& config);

}  // namespace pedflow
