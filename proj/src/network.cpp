#include "pedflow/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>

#include "pedflow/diagnostics.hpp"

namespace pedflow {
namespace {

bool is_multiple(double value, double step) {
  if (step <= 0.0) return false;
  const double ratio = value / step;
  return std::abs(ratio - std::round(ratio)) < 1e-9 * std::max(1.0, std::abs(ratio));
}

std::string link_name(const Link& l) {
  std::ostringstream os;
  os << "link " << l.id << " (" << l.from << "->" << l.to << ")";
  return os.str();
}

// Rounded to nanoseconds so that equal sums of equal terms compare equal.
long long time_key(double seconds) { return std::llround(seconds * 1e9); }

// Free-flow travel time from every node to `destination`.
std::vector<double> free_flow_distances(const Network& net, std::size_t destination) {
  std::vector<double> dist(net.node_count(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[destination] = 0.0;
  heap.emplace(0.0, destination);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (std::size_t a : net.incoming(v)) {
      const std::size_t u = net.from_index(a);
      const double cand = d + net.link(a).free_flow_time();
      if (cand < dist[u]) {
        dist[u] = cand;
        heap.emplace(cand, u);
      }
    }
  }
  return dist;
}

}  // namespace

double default_capacity(double free_flow_speed, double wave_speed, double jam_density,
                        double width) {
  const double kc = jam_density * wave_speed / (free_flow_speed + wave_speed);
  return free_flow_speed * kc * width;
}

std::size_t Network::add_node(const Node& node) {
  finalized_ = false;
  nodes_.push_back(node);
  return nodes_.size() - 1;
}

std::size_t Network::add_link(const Link& link) {
  finalized_ = false;
  links_.push_back(link);
  return links_.size() - 1;
}

void Network::finalize() {
  node_by_id_.clear();
  link_by_id_.clear();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!node_by_id_.emplace(nodes_[i].id, i).second) {
      throw ValidationError("duplicate node id " + std::to_string(nodes_[i].id));
    }
  }
  for (std::size_t i = 0; i < links_.size(); ++i) {
    if (!link_by_id_.emplace(links_[i].id, i).second) {
      throw ValidationError("duplicate link id " + std::to_string(links_[i].id));
    }
  }
  link_from_.assign(links_.size(), kNone);
  link_to_.assign(links_.size(), kNone);
  link_opposite_.assign(links_.size(), kNone);
  out_.assign(nodes_.size(), {});
  in_.assign(nodes_.size(), {});
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    const auto f = node_by_id_.find(l.from);
    const auto t = node_by_id_.find(l.to);
    if (f == node_by_id_.end() || t == node_by_id_.end()) {
      throw ValidationError(link_name(l) + " references an unknown node");
    }
    link_from_[i] = f->second;
    link_to_[i] = t->second;
    out_[f->second].push_back(i);
    in_[t->second].push_back(i);
    if (l.opposite) {
      // Dangling or self pairings stay unresolved; validate_network reports them.
      const auto o = link_by_id_.find(*l.opposite);
      if (o != link_by_id_.end() && o->second != i) link_opposite_[i] = o->second;
    }
  }
  // Adjacency sorted by (neighbour id, link id) keeps every traversal deterministic.
  auto by_head = [this](std::size_t a, std::size_t b) {
    const int na = nodes_[link_to_[a]].id, nb = nodes_[link_to_[b]].id;
    return na != nb ? na < nb : links_[a].id < links_[b].id;
  };
  auto by_tail = [this](std::size_t a, std::size_t b) {
    const int na = nodes_[link_from_[a]].id, nb = nodes_[link_from_[b]].id;
    return na != nb ? na < nb : links_[a].id < links_[b].id;
  };
  for (auto& v : out_) std::sort(v.begin(), v.end(), by_head);
  for (auto& v : in_) std::sort(v.begin(), v.end(), by_tail);
  finalized_ = true;
}

std::size_t Network::node_index(int id) const {
  const auto it = node_by_id_.find(id);
  return it == node_by_id_.end() ? kNone : it->second;
}

std::size_t Network::link_index(int id) const {
  const auto it = link_by_id_.find(id);
  return it == link_by_id_.end() ? kNone : it->second;
}

std::size_t Network::find_link(int from, int to) const {
  const std::size_t f = node_index(from);
  if (f == kNone) return kNone;
  for (std::size_t a : out_[f]) {
    if (links_[a].to == to) return a;
  }
  return kNone;
}

std::vector<Violation> validate_network(const Network& network) {
  std::vector<Violation> out;
  auto report = [&out](std::string what) { out.push_back({std::move(what)}); };

  std::unordered_map<int, std::size_t> nodes, links;
  for (std::size_t i = 0; i < network.nodes().size(); ++i) {
    if (!nodes.emplace(network.nodes()[i].id, i).second) {
      report("duplicate node id " + std::to_string(network.nodes()[i].id));
    }
  }
  for (std::size_t i = 0; i < network.links().size(); ++i) {
    if (!links.emplace(network.links()[i].id, i).second) {
      report("duplicate link id " + std::to_string(network.links()[i].id));
    }
  }

  for (const Link& l : network.links()) {
    const std::string name = link_name(l);
    if (!nodes.contains(l.from) || !nodes.contains(l.to)) {
      report(name + " references an unknown node");
    }
    if (l.from == l.to) report(name + " is a self-loop");
    const std::pair<const char*, double> positive[] = {
        {"length", l.length},           {"width", l.width},
        {"free-flow speed", l.free_flow_speed}, {"jam density", l.jam_density},
        {"wave speed", l.wave_speed},   {"capacity", l.capacity}};
    for (const auto& [label, value] : positive) {
      if (!(value > 0.0) || !std::isfinite(value)) {
        report(name + " has nonpositive " + label);
      }
    }
    if (!l.opposite) continue;
    if (*l.opposite == l.id) {
      report(name + " is paired with itself");
      continue;
    }
    const auto o = links.find(*l.opposite);
    if (o == links.end()) {
      report(name + " has dangling opposite " + std::to_string(*l.opposite));
      continue;
    }
    const Link& p = network.links()[o->second];
    if (!p.opposite || *p.opposite != l.id) {
      report(name + " pairing with link " + std::to_string(p.id) + " is not symmetric");
    }
    if (p.from != l.to || p.to != l.from) {
      report(name + " and opposite link " + std::to_string(p.id) + " do not run in reverse");
    }
    // Report geometry mismatches once per pair.
    if (l.id < p.id) {
      if (l.length != p.length || l.width != p.width || l.jam_density != p.jam_density ||
          l.wave_speed != p.wave_speed) {
        report(name + " and opposite link " + std::to_string(p.id) +
               " differ in length, width, jam density or wave speed");
      }
    }
  }
  return out;
}

std::size_t TimeGrid::steps() const {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

std::size_t TimeGrid::departure_bins() const {
  return static_cast<std::size_t>(std::ceil(horizon / departure_interval - 1e-9));
}

std::size_t TimeGrid::departure_bin(double t) const {
  const std::size_t bins = departure_bins();
  if (bins == 0) return 0;
  const double b = std::floor(t / departure_interval + 1e-9);
  if (b <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(b), bins - 1);
}

std::vector<Violation> validate_time_grid(const TimeGrid& grid) {
  std::vector<Violation> out;
  if (!(grid.dt > 0.0)) out.push_back({"time step must be positive"});
  if (!(grid.horizon > 0.0)) out.push_back({"horizon must be positive"});
  if (grid.dt > 0.0 && !is_multiple(grid.horizon, grid.dt)) {
    out.push_back({"horizon is not an integer multiple of the time step"});
  }
  if (grid.dt > 0.0 && !is_multiple(grid.departure_interval, grid.dt)) {
    out.push_back({"departure interval is not an integer multiple of the time step"});
  }
  return out;
}

std::vector<Violation> check_cfl(const Network& network, const TimeGrid& grid) {
  std::vector<Violation> out;
  for (const Link& l : network.links()) {
    const double limit = l.length / std::max(l.free_flow_speed, l.wave_speed);
    if (grid.dt > limit * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << link_name(l) << " violates dt <= L/max(v_f, omega): dt = " << grid.dt
         << " s, limit = " << limit << " s";
      out.push_back({os.str()});
    }
  }
  return out;
}

std::vector<Violation> validate_demand(const Network& network, const TimeGrid& grid,
                                       const DemandProfile& demand) {
  std::vector<Violation> out;
  for (const DemandEntry& e : demand.entries) {
    std::ostringstream os;
    os << "demand " << e.origin << "->" << e.destination << " at " << e.depart << " s";
    const std::string name = os.str();
    const std::size_t r = network.node_index(e.origin);
    const std::size_t s = network.node_index(e.destination);
    if (r == kNone || s == kNone) {
      out.push_back({name + " references an unknown node"});
      continue;
    }
    if (r == s) out.push_back({name + " has identical origin and destination"});
    if (!(e.rate >= 0.0) || !std::isfinite(e.rate)) out.push_back({name + " has a negative rate"});
    if (e.depart < 0.0 || e.depart >= grid.horizon) {
      out.push_back({name + " departs outside the horizon"});
    } else if (!is_multiple(e.depart, grid.departure_interval)) {
      out.push_back({name + " does not start on a departure bin"});
    }
  }
  return out;
}

DemandTable::DemandTable(const Network& network, const TimeGrid& grid,
                         const DemandProfile& demand)
    : bins_(grid.departure_bins()) {
  std::unordered_map<long long, std::size_t> od_by_key;
  for (const DemandEntry& e : demand.entries) {
    const std::size_t r = network.node_index(e.origin);
    const std::size_t s = network.node_index(e.destination);
    if (r == kNone || s == kNone || r == s) {
      throw ValidationError("invalid OD pair " + std::to_string(e.origin) + "->" +
                            std::to_string(e.destination));
    }
    const long long key = static_cast<long long>(r) * 1000003LL + static_cast<long long>(s);
    auto [it, inserted] = od_by_key.emplace(key, ods_.size());
    if (inserted) {
      ods_.push_back({r, s});
      rates_.resize(rates_.size() + bins_, 0.0);
      auto [slot, fresh] = slot_by_node_.emplace(s, destinations_.size());
      if (fresh) destinations_.push_back(s);
      od_slot_.push_back(slot->second);
    }
    if (bins_ == 0) continue;
    rates_[it->second * bins_ + grid.departure_bin(e.depart)] += e.rate;
  }
}

std::size_t DemandTable::destination_slot(std::size_t node) const {
  const auto it = slot_by_node_.find(node);
  return it == slot_by_node_.end() ? kNone : it->second;
}

double DemandTable::total_demand(double departure_interval) const {
  double total = 0.0;
  for (double r : rates_) total += r * departure_interval;
  return total;
}

std::vector<int> Path::node_ids(const Network& network) const {
  std::vector<int> ids;
  if (links.empty()) return ids;
  ids.push_back(network.link(links.front()).from);
  for (std::size_t a : links) ids.push_back(network.link(a).to);
  return ids;
}

std::string describe(const Network& network, const Path& path) {
  std::string s;
  for (int id : path.node_ids(network)) {
    if (!s.empty()) s += '-';
    s += std::to_string(id);
  }
  return s;
}

std::vector<Path> enumerate_paths(const Network& network, OdPair od, std::size_t max_paths) {
  if (od.origin == od.destination) {
    throw ValidationError("degenerate OD pair: origin equals destination");
  }
  const std::vector<double> dist = free_flow_distances(network, od.destination);
  if (!std::isfinite(dist[od.origin])) {
    throw ValidationError("destination " + std::to_string(network.node(od.destination).id) +
                          " is unreachable from " + std::to_string(network.node(od.origin).id));
  }
  if (max_paths == 0) return {};

  // Best-first search over the efficient-link DAG. The heuristic is exact, so completed
  // paths come out in order of free-flow time.
  struct Partial {
    long long key;
    std::vector<int> seq;
    std::vector<std::size_t> links;
    double cost;
  };
  auto worse = [](const Partial& a, const Partial& b) {
    return a.key != b.key ? a.key > b.key : a.seq > b.seq;
  };
  std::priority_queue<Partial, std::vector<Partial>, decltype(worse)> open(worse);
  open.push({time_key(dist[od.origin]), {network.node(od.origin).id}, {}, 0.0});

  struct Done {
    long long key;
    std::vector<int> seq;
    std::vector<std::size_t> links;
  };
  std::vector<Done> done;
  while (!open.empty()) {
    if (done.size() >= max_paths && open.top().key > done.back().key) break;
    Partial p = open.top();
    open.pop();
    const std::size_t v =
        p.links.empty() ? od.origin : network.to_index(p.links.back());
    if (v == od.destination) {
      done.push_back({time_key(p.cost), p.seq, p.links});
      continue;
    }
    for (std::size_t a : network.outgoing(v)) {
      const std::size_t w = network.to_index(a);
      if (!(time_key(dist[w]) < time_key(dist[v]))) continue;
      Partial next = p;
      next.cost += network.link(a).free_flow_time();
      next.key = time_key(next.cost + dist[w]);
      next.seq.push_back(network.node(w).id);
      next.links.push_back(a);
      open.push(std::move(next));
    }
  }
  std::sort(done.begin(), done.end(), [](const Done& a, const Done& b) {
    return a.key != b.key ? a.key < b.key : a.seq < b.seq;
  });
  if (done.size() > max_paths) done.resize(max_paths);
  std::vector<Path> paths;
  paths.reserve(done.size());
  for (auto& d : done) paths.push_back({od, std::move(d.links)});
  return paths;
}

Path path_from_nodes(const Network& network, const std::vector<int>& node_ids) {
  if (node_ids.size() < 2) throw ValidationError("a path needs at least two nodes");
  Path p;
  p.od = {network.node_index(node_ids.front()), network.node_index(node_ids.back())};
  if (p.od.origin == kNone || p.od.destination == kNone) {
    throw ValidationError("path references an unknown node");
  }
  for (std::size_t i = 0; i + 1 < node_ids.size(); ++i) {
    const std::size_t a = network.find_link(node_ids[i], node_ids[i + 1]);
    if (a == kNone) {
      throw ValidationError("no link from node " + std::to_string(node_ids[i]) + " to " +
                            std::to_string(node_ids[i + 1]));
    }
    p.links.push_back(a);
  }
  return p;
}

}  // namespace pedflow
