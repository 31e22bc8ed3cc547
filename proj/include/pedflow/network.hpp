#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pedflow {

inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

enum class NodeKind { plain, origin, destination };

struct Node {
  int id = 0;
  double x = 0.0;  // meters, export only
  double y = 0.0;
  NodeKind kind = NodeKind::plain;
};

// One direction of a sidewalk segment. Paired directions reference each other via `opposite`.
struct Link {
  int id = 0;
  int from = 0;
  int to = 0;
  double length = 0.0;           // m
  double width = 0.0;            // m
  double free_flow_speed = 0.0;  // m/s
  double jam_density = 0.0;      // ped/m^2
  double wave_speed = 0.0;       // m/s
  double capacity = 0.0;         // ped/s
  std::optional<int> opposite;

  double free_flow_time() const { return length / free_flow_speed; }
  // Pedestrians the link can hold at physical jam density.
  double storage() const { return jam_density * length * width; }
};

// Capacity of a link at the apex of the unidirectional triangular diagram.
double default_capacity(double free_flow_speed, double wave_speed, double jam_density, double width);

// Directed sidewalk graph. Ids are external; all internal references use dense indices.
// Immutable once finalize() has run.
class Network {
 public:
  std::size_t add_node(const Node& node);
  std::size_t add_link(const Link& link);
  // Resolves endpoints and opposite pairing into indices and builds adjacency.
  // Throws ValidationError for references to unknown nodes or duplicate ids. Dangling
  // opposite references are left unresolved for validate_network() to report.
  void finalize();
  bool finalized() const { return finalized_; }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const Node& node(std::size_t index) const { return nodes_[index]; }
  const Link& link(std::size_t index) const { return links_[index]; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }

  std::size_t node_index(int id) const;  // kNone if unknown
  std::size_t link_index(int id) const;  // kNone if unknown
  // First link (lowest id) running from node id `from` to node id `to`; kNone if absent.
  std::size_t find_link(int from, int to) const;

  std::size_t from_index(std::size_t link) const { return link_from_[link]; }
  std::size_t to_index(std::size_t link) const { return link_to_[link]; }
  std::size_t opposite_index(std::size_t link) const { return link_opposite_[link]; }
  const std::vector<std::size_t>& outgoing(std::size_t node) const { return out_[node]; }
  const std::vector<std::size_t>& incoming(std::size_t node) const { return in_[node]; }

 private:
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::unordered_map<int, std::size_t> node_by_id_;
  std::unordered_map<int, std::size_t> link_by_id_;
  std::vector<std::size_t> link_from_, link_to_, link_opposite_;
  std::vector<std::vector<std::size_t>> out_, in_;
  bool finalized_ = false;
};

struct Violation {
  std::string what;
};

// Every invariant violation found in the network. Empty means loadable.
// Works on unfinalized networks as well, so dangling references are reported instead of thrown.
std::vector<Violation> validate_network(const Network& network);

struct TimeGrid {
  double dt = 1.0;                  // s
  double horizon = 0.0;             // s, integer multiple of dt
  double departure_interval = 1.0;  // s, integer multiple of dt

  std::size_t steps() const;
  std::size_t departure_bins() const;
  std::size_t departure_bin(double t) const;  // clamped to the last bin
  double departure_time(std::size_t bin) const { return static_cast<double>(bin) * departure_interval; }
};

std::vector<Violation> validate_time_grid(const TimeGrid& grid);
// Per-link condition dt <= L / max(v_f, omega).
std::vector<Violation> check_cfl(const Network& network, const TimeGrid& grid);

struct DemandEntry {
  int origin = 0;
  int destination = 0;
  double depart = 0.0;  // s, start of the departure bin
  double rate = 0.0;    // ped/s during the bin
};

struct DemandProfile {
  std::vector<DemandEntry> entries;
};

std::vector<Violation> validate_demand(const Network& network, const TimeGrid& grid,
                                       const DemandProfile& demand);

struct OdPair {
  std::size_t origin = 0;       // node index
  std::size_t destination = 0;  // node index
};

// Demand rates arranged per OD pair and departure bin.
class DemandTable {
 public:
  DemandTable(const Network& network, const TimeGrid& grid, const DemandProfile& demand);

  const std::vector<OdPair>& ods() const { return ods_; }
  std::size_t bins() const { return bins_; }
  double rate(std::size_t od, std::size_t bin) const { return rates_[od * bins_ + bin]; }
  // Distinct destination node indices in first-seen order; commodities are indexed by slot.
  const std::vector<std::size_t>& destinations() const { return destinations_; }
  std::size_t destination_slot(std::size_t node) const;  // kNone if not a destination
  std::size_t od_destination_slot(std::size_t od) const { return od_slot_[od]; }
  double total_demand(double departure_interval) const;

 private:
  std::vector<OdPair> ods_;
  std::size_t bins_ = 0;
  std::vector<double> rates_;
  std::vector<std::size_t> destinations_;
  std::vector<std::size_t> od_slot_;
  std::unordered_map<std::size_t, std::size_t> slot_by_node_;
};

struct Path {
  OdPair od;
  std::vector<std::size_t> links;  // link indices, origin to destination
  std::vector<int> node_ids(const Network& network) const;
};

// Node ids and link ids of a path as a printable "1-2-3" string.
std::string describe(const Network& network, const Path& path);

// Efficient loop-free paths (every link strictly reduces the free-flow time left to the
// destination), ordered by free-flow time and then by node sequence; at most max_paths.
// Throws ValidationError if origin == destination or the destination is unreachable.
std::vector<Path> enumerate_paths(const Network& network, OdPair od, std::size_t max_paths);

// Path from a node-id sequence; throws ValidationError if consecutive nodes are not linked.
Path path_from_nodes(const Network& network, const std::vector<int>& node_ids);

}  // namespace pedflow
