#include "pedflow/route_choice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "pedflow/diagnostics.hpp"

namespace pedflow {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void apply_penalties(LinkCosts& costs, const TimeGrid& grid,
                     std::span<const LinkPenalty> penalties) {
  for (const LinkPenalty& p : penalties) {
    for (std::size_t k = 0; k < costs.bins; ++k) {
      if (grid.departure_time(k) + 1e-9 >= p.start) costs.value[k * costs.links + p.link] += p.cost;
    }
  }
}

double path_cost(const Path& path, std::span<const double> costs) {
  double c = 0.0;
  for (std::size_t a : path.links) c += costs[a];
  return c;
}

}  // namespace

LinkCosts free_flow_costs(const Network& net, const TimeGrid& grid,
                          std::span<const LinkPenalty> penalties) {
  LinkCosts c{net.link_count(), std::max<std::size_t>(1, grid.departure_bins()), {}};
  c.value.resize(c.links * c.bins);
  for (std::size_t k = 0; k < c.bins; ++k) {
    for (std::size_t a = 0; a < c.links; ++a) c.value[k * c.links + a] = net.link(a).free_flow_time();
  }
  apply_penalties(c, grid, penalties);
  return c;
}

LinkCosts pvdf_costs(const Network& net, const TimeGrid& grid, const LoadResult& load,
                     const PvdfParams& params, std::span<const LinkPenalty> penalties) {
  LinkCosts c{net.link_count(), std::max<std::size_t>(1, grid.departure_bins()), {}};
  c.value.resize(c.links * c.bins);
  std::vector<double> u(c.links);
  for (std::size_t k = 0; k < c.bins; ++k) {
    const double t0 = grid.departure_time(k);
    const double t1 = std::min(t0 + grid.departure_interval, grid.horizon);
    for (std::size_t a = 0; a < c.links; ++a) u[a] = load.inflow_rate(a, t0, t1);
    for (std::size_t a = 0; a < c.links; ++a) {
      const std::size_t opp = net.opposite_index(a);
      const double cost = link_cost(net.link(a), params, u[a], opp == kNone ? 0.0 : u[opp]);
      if (!std::isfinite(cost)) {
        throw RuntimeError("non-finite cost on link " + std::to_string(net.link(a).id));
      }
      c.value[k * c.links + a] = cost;
    }
  }
  apply_penalties(c, grid, penalties);
  return c;
}

ShortestTree shortest_paths(const Network& net, std::span<const double> costs,
                            std::size_t destination) {
  const std::size_t n = net.node_count();
  ShortestTree tree{std::vector<std::size_t>(n, kNone), std::vector<double>(n, kInf)};
  for (double c : costs) {
    if (!std::isfinite(c) || c <= 0.0) throw RuntimeError("link costs must be finite and positive");
  }
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  tree.time[destination] = 0.0;
  heap.emplace(0.0, destination);
  std::vector<bool> done(n, false);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (done[v]) continue;
    done[v] = true;
    for (std::size_t a : net.incoming(v)) {
      const std::size_t u = net.from_index(a);
      const double nd = d + costs[a];
      if (nd < tree.time[u]) {
        tree.time[u] = nd;
        heap.emplace(nd, u);
      }
    }
  }
  // Successor choice with deterministic ties; outgoing lists are sorted by neighbour id, then link id.
  for (std::size_t u = 0; u < n; ++u) {
    if (u == destination || !std::isfinite(tree.time[u])) continue;
    const double best = tree.time[u];
    const double tol = 1e-12 * std::max(1.0, best);
    for (std::size_t a : net.outgoing(u)) {
      const std::size_t w = net.to_index(a);
      if (!std::isfinite(tree.time[w])) continue;
      if (costs[a] + tree.time[w] <= best + tol) {
        tree.next[u] = a;
        break;
      }
    }
  }
  return tree;
}

Path tree_path(const ShortestTree& tree, const Network& net, OdPair od) {
  Path p{od, {}};
  std::size_t v = od.origin;
  while (v != od.destination) {
    const std::size_t a = tree.next[v];
    if (a == kNone || p.links.size() > net.link_count()) return {od, {}};
    p.links.push_back(a);
    v = net.to_index(a);
  }
  return p;
}

SuccessorTable successor_table(const Network& net, const DemandTable& demand, const LinkCosts& costs) {
  SuccessorTable table;
  table.nodes = net.node_count();
  table.bins = costs.bins;
  for (std::size_t dest : demand.destinations()) {
    std::vector<std::size_t> next(table.bins * table.nodes, kNone);
    for (std::size_t k = 0; k < table.bins; ++k) {
      const ShortestTree tree = shortest_paths(net, costs.bin_costs(k), dest);
      std::copy(tree.next.begin(), tree.next.end(), next.begin() + k * table.nodes);
    }
    table.next.push_back(std::move(next));
  }
  return table;
}

const char* to_string(StopReason reason) {
  return reason == StopReason::gap_below_tol ? "gap_below_tol" : "max_iters";
}

void update_flows(AssignmentState& state, const DemandTable& demand,
                  const std::vector<std::vector<Path>>& shortest, std::size_t iteration) {
  const double step = 1.0 / static_cast<double>(iteration);
  state.flows.resize(demand.ods().size());
  for (std::size_t od = 0; od < demand.ods().size(); ++od) {
    OdPathFlows& set = state.flows[od];
    for (auto& series : set.flow) {
      for (double& f : series) f *= 1.0 - step;
    }
    for (std::size_t k = 0; k < demand.bins(); ++k) {
      const double q = demand.rate(od, k);
      if (q <= 0.0) continue;
      const Path& best = shortest[od][k];
      if (best.links.empty()) {
        throw RuntimeError("OD pair has no path in departure bin " + std::to_string(k));
      }
      std::size_t p = 0;
      while (p < set.paths.size() && set.paths[p].links != best.links) ++p;
      if (p == set.paths.size()) {
        set.paths.push_back(best);
        set.flow.emplace_back(demand.bins(), 0.0);
      }
      set.flow[p][k] += step * q;
    }
  }
}

double relative_gap(double assigned, double shortest) {
  if (shortest <= 0.0) return 0.0;
  return (assigned - shortest) / shortest;
}

GapTerms gap_terms(const AssignmentState& state, const DemandTable& demand, const TimeGrid& grid,
                   const LinkCosts& costs, const std::vector<std::vector<double>>& shortest_time) {
  GapTerms g;
  const double dk = grid.departure_interval;
  for (std::size_t od = 0; od < state.flows.size(); ++od) {
    const OdPathFlows& set = state.flows[od];
    for (std::size_t k = 0; k < demand.bins(); ++k) {
      const double q = demand.rate(od, k);
      if (q <= 0.0) continue;
      g.shortest += q * dk * shortest_time[od][k];
      for (std::size_t p = 0; p < set.paths.size(); ++p) {
        const double f = set.flow[p][k];
        if (f > 0.0) g.assigned += f * dk * path_cost(set.paths[p], costs.bin_costs(k));
      }
    }
  }
  return g;
}

DueResult run_due(const Network& net, const TimeGrid& grid, const DemandTable& demand,
                  const DueOptions& options) {
  const std::size_t slots = demand.destinations().size();
  const std::size_t bins = demand.bins();
  const std::size_t ods = demand.ods().size();

  // Shortest trees per destination and bin, the successor table and per-OD paths/times.
  struct Routing {
    SuccessorTable successors;
    std::vector<std::vector<Path>> paths;
    std::vector<std::vector<double>> times;
  };
  auto route = [&](const LinkCosts& costs) {
    Routing r;
    r.successors.nodes = net.node_count();
    r.successors.bins = std::max<std::size_t>(1, bins);
    r.successors.next.assign(slots, {});
    r.paths.assign(ods, std::vector<Path>(bins));
    r.times.assign(ods, std::vector<double>(bins, kInf));
    for (std::size_t s = 0; s < slots; ++s) {
      auto& next = r.successors.next[s];
      next.assign(r.successors.bins * r.successors.nodes, kNone);
      for (std::size_t k = 0; k < r.successors.bins; ++k) {
        const ShortestTree tree = shortest_paths(net, costs.bin_costs(k), demand.destinations()[s]);
        std::copy(tree.next.begin(), tree.next.end(), next.begin() + k * r.successors.nodes);
        for (std::size_t od = 0; od < ods; ++od) {
          if (demand.od_destination_slot(od) != s || k >= bins) continue;
          if (demand.rate(od, k) <= 0.0) continue;
          r.paths[od][k] = tree_path(tree, net, demand.ods()[od]);
          r.times[od][k] = tree.time[demand.ods()[od].origin];
        }
      }
    }
    return r;
  };

  DueResult res{{}, {}, {}, TurningFractions(net, grid, slots)};
  res.state.flows.assign(ods, {});
  LinkCosts costs = free_flow_costs(net, grid, options.penalties);
  Routing routing = route(costs);
  const std::size_t max_iters = std::max<std::size_t>(1, options.max_iters);

  for (std::size_t n = 1; n <= max_iters; ++n) {
    update_flows(res.state, demand, routing.paths, n);

    LinkTimeFn link_time;
    if (n == 1) {
      link_time = [&net](std::size_t a, double) { return net.link(a).free_flow_time(); };
    } else {
      const LoadResult* prev = &res.load;
      link_time = [prev](std::size_t a, double t) { return prev->traversal_time(a, t); };
    }
    TurningFractions tf = paths_to_turning_fractions(net, grid, demand, res.state.flows, link_time);
    tf.set_fallback(routing.successors);
    LoadResult load = load_network(net, grid, demand, tf, options.loader);

    costs = pvdf_costs(net, grid, load, options.pvdf, options.penalties);
    routing = route(costs);
    const GapTerms g = gap_terms(res.state, demand, grid, costs, routing.times);
    const double gap = relative_gap(g.assigned, g.shortest);

    res.state.iteration = n;
    res.state.costs = costs;
    res.load = std::move(load);
    res.fractions = std::move(tf);
    res.report.gaps.push_back(gap);
    if (gap <= options.gap_tol) {
      res.report.reason = StopReason::gap_below_tol;
      break;
    }
  }
  return res;
}

}  // namespace pedflow
