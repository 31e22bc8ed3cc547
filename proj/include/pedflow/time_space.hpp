#pragma once

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include "pedflow/ltm_link.hpp"
#include "pedflow/network.hpp"

namespace pedflow {

// Density (ped/m^2) and flow (ped/m/s) per segment of a link sequence and time bin.
struct TimeSpaceMatrix {
  std::vector<std::size_t> links;  // link indices in travel order
  std::vector<double> start;       // m, upstream end of each segment along the sequence
  std::vector<double> length;      // m
  std::size_t bins = 0;
  double dt = 1.0;
  std::vector<double> density;  // [segment * bins + bin]
  std::vector<double> flow;     // [segment * bins + bin]

  std::size_t segments() const { return links.size(); }
  double& k(std::size_t seg, std::size_t bin) { return density[seg * bins + bin]; }
  double k(std::size_t seg, std::size_t bin) const { return density[seg * bins + bin]; }
  double& q(std::size_t seg, std::size_t bin) { return flow[seg * bins + bin]; }
  double q(std::size_t seg, std::size_t bin) const { return flow[seg * bins + bin]; }
  double centre(std::size_t seg) const { return start[seg] + 0.5 * length[seg]; }
};

// Density from occupancy at the start of each bin, flow from the mean of inflow and outflow
// over the bin. `curves` is indexed by link index. Throws ValidationError if the sequence is
// not a connected chain.
TimeSpaceMatrix build_time_space(const Network& network, const std::vector<CumulativeCurve>& curves,
                                 const std::vector<std::size_t>& links, std::size_t bins);

// Rows "segment,link,x_m" header then one row per bin with one column per segment.
void write_matrix_csv(std::ostream& out, const TimeSpaceMatrix& m, bool flows);

enum class WaveDirection { backward, stationary, forward };
const char* to_string(WaveDirection direction);

struct Shockwave {
  std::vector<std::pair<double, double>> trajectory;  // (t s, x m)
  double speed = 0.0;  // m/s, positive downstream
  WaveDirection direction = WaveDirection::stationary;
  int sign = 0;  // +1 when density rises downstream across the interface
  // Mean states on either side of the interface over the trajectory.
  double k_up = 0.0, q_up = 0.0, k_down = 0.0, q_down = 0.0;
  double rankine_hugoniot() const;  // (q_up - q_down) / (k_up - k_down)
};

struct ShockwaveOptions {
  double threshold = 0.5;          // ped/m^2 jump between adjacent segments
  double max_step_cells = 1.5;     // largest move of a tracked interface per bin, in cells
  std::size_t min_points = 5;      // shorter tracks are discarded
  double stationary_speed = 0.02;  // m/s
  double straightness = 0.75;      // cells; a track bending further is split into pieces
};

// Density jumps between adjacent segments, merged when neighbouring jumps share a sign,
// tracked across bins, cut into straight pieces and fitted with least-squares lines x(t).
// A queue tail that first grows and then dissolves yields a backward and a forward piece.
std::vector<Shockwave> detect_shockwaves(const TimeSpaceMatrix& m, const ShockwaveOptions& options = {});

}  // namespace pedflow
