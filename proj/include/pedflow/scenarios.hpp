#pragma once

#include <cstddef>
#include <string>

#include "pedflow/config.hpp"
#include "pedflow/fundamental_diagram.hpp"
#include "pedflow/network.hpp"

namespace pedflow {

struct Scenario {
  std::string name;
  Network network;
  DemandProfile demand;
  ScenarioConfig config;
};

// Segment geometry shared by the built-in scenarios.
struct SegmentSpec {
  double length = 2.0;  // m
  double width = 4.0;   // m
  FDParams fd;          // default speeds and jam density (not published values)
};

// n x n grid, node id = row * n + col + 1. Undirected edges are numbered in order of their
// lower node id (right neighbour first, then the one below); edge e yields link 2e+1 from
// the lower to the higher id and link 2e+2 back, paired.
Network grid_network(std::size_t n, const SegmentSpec& spec = {});

// Straight corridor of nodes 1..segments+1. Eastbound link i runs i -> i+1, westbound link
// segments+i runs i+1 -> i; each pair shares its geometry.
Network corridor_network(std::size_t segments, const SegmentSpec& spec = {});

// Presets 1-3 on the 3 x 3 grid:
//   1: 1 -> 9, ramp to 6 ped/s over 8 s, hold to 42 s, ramp down to 0 at 50 s
//   2: preset 1 plus 8 -> 4 with the same shape and a 4 ped/s peak
//   3: preset 1 plus a 1000 s penalty on link 4-7 from t = 20 s
// Throws ValidationError for other presets.
Scenario grid_scenario(int preset, const ScenarioConfig& base = {});

// Presets 4-6 on the 9-segment corridor:
//   4: 1 -> 10 at 4 ped/s until 80 s, link pair 9-10 narrowed to config.bottleneck_width
//   5: major 1 -> 10 as in 4 against minor 10 -> 1 at 2 ped/s until 50 s
//   6: both directions at 4 ped/s, westbound ends at 50 s and eastbound at 80 s
Scenario corridor_scenario(int preset, const ScenarioConfig& base = {});

// Horizons used when the base config leaves time.horizon unset.
inline constexpr double kGridHorizon = 120.0;
inline constexpr double kCorridorHorizon = 160.0;

}  // namespace pedflow
