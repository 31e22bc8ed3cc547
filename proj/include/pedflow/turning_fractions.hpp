#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pedflow/network.hpp"
#include "pedflow/pvdf.hpp"

namespace pedflow {

// Outgoing column that leaves the network at the commodity's destination.
inline constexpr std::size_t kSink = kNone - 1;

// (outgoing link index or kSink, fraction)
using TurnRow = std::vector<std::pair<std::size_t, double>>;

// Next link towards each destination per departure bin: next[slot][bin * nodes + node].
// kNone where the destination is unreachable or the node is the destination itself.
struct SuccessorTable {
  std::size_t nodes = 0;
  std::size_t bins = 0;
  std::vector<std::vector<std::size_t>> next;

  std::size_t at(std::size_t slot, std::size_t bin, std::size_t node) const {
    return next[slot][bin * nodes + node];
  }
};

// Destination-specific turning fractions phi_ij(t).
//
// Rows are keyed by (destination slot, incoming index, bin), where the incoming index is a
// link index or, for demand waiting at an origin, link_count + node index.
class TurningFractions {
 public:
  TurningFractions(const Network& network, const TimeGrid& grid, std::size_t destinations);

  std::size_t origin_index(std::size_t node) const { return links_ + node; }
  std::size_t bin(double t) const { return grid_.departure_bin(t); }

  void add(std::size_t slot, std::size_t incoming, std::size_t bin, std::size_t out, double weight);
  // Scales every row to sum to 1 and merges repeated outgoing entries.
  void normalize();
  void set_fallback(SuccessorTable successors);

  // Row for commodity `slot` arriving at `node` through `incoming` at time t. Empty rows
  // fall back to the shortest-path successor; at the destination itself the row is the sink.
  // Returns an empty span if the destination cannot be reached from `node`.
  std::span<const std::pair<std::size_t, double>> row(std::size_t slot, std::size_t incoming,
                                                     std::size_t node, std::size_t destination,
                                                     double t) const;

  // Destinations that received at least one explicit row.
  std::size_t sets() const;
  std::size_t explicit_rows() const { return rows_.size(); }

 private:
  std::uint64_t key(std::size_t slot, std::size_t incoming, std::size_t bin) const;

  std::size_t links_;
  std::size_t incoming_count_;
  std::size_t destinations_;
  TimeGrid grid_;
  std::size_t bins_;
  std::unordered_map<std::uint64_t, TurnRow> rows_;
  SuccessorTable fallback_;
  std::vector<std::vector<std::pair<std::size_t, double>>> fallback_rows_;  // [slot][bin*nodes+node]
};

// Path set of one OD pair with flows per departure bin (ped/s).
struct OdPathFlows {
  std::vector<Path> paths;
  std::vector<std::vector<double>> flow;  // [path][bin]
};

// Splits path flows into turning fractions per destination. Each departure bin is walked
// step by step along its path; `link_time(a, t)` gives the traversal time of link a entered
// at t and places every turn in the bin in which it happens.
TurningFractions paths_to_turning_fractions(const Network& network, const TimeGrid& grid,
                                            const DemandTable& demand,
                                            const std::vector<OdPathFlows>& flows,
                                            const LinkTimeFn& link_time);

}  // namespace pedflow
