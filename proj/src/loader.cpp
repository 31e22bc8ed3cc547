#include "pedflow/loader.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pedflow/diagnostics.hpp"
#include "pedflow/node_model.hpp"

namespace pedflow {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Commodity amounts of one row of a node problem routed to one column.
struct Split {
  std::size_t row;
  std::size_t col;
  std::size_t slot;
  double amount;
};

double step_of(double t, double dt) { return std::floor(t / dt + 1e-9); }

}  // namespace

double LoadResult::occupancy(std::size_t link, std::size_t step) const {
  const auto& c = curves[link];
  step = std::min(step, c.step());
  return c.upstream()[step] - c.downstream()[step];
}

double LoadResult::density(std::size_t link, std::size_t step) const {
  const Link& l = network->link(link);
  return occupancy(link, step) / (l.length * l.width);
}

double LoadResult::density_ratio(std::size_t link, std::size_t step) const {
  const std::size_t opp = network->opposite_index(link);
  const double k = density(link, step);
  const double k_opp = opp == kNone ? 0.0 : density(opp, step);
  return pedflow::density_ratio({k, k_opp});
}

double LoadResult::effective_speed(std::size_t link, std::size_t step) const {
  const FDParams p = fd_params(network->link(link), options.variant, options.gamma);
  return pedflow::effective_speed(p, density_ratio(link, step));
}

double LoadResult::inflow_rate(std::size_t link, double t0, double t1) const {
  const auto& c = curves[link];
  t1 = std::min(t1, c.time());
  if (t1 <= t0) return 0.0;
  return (c.upstream_at(t1) - c.upstream_at(t0)) / (t1 - t0);
}

double LoadResult::traversal_time(std::size_t link, double t) const {
  const auto& c = curves[link];
  const Link& l = network->link(link);
  const double tc = std::clamp(t, 0.0, c.time());
  const auto step = static_cast<std::size_t>(step_of(tc, c.dt()));
  const double v = effective_speed(link, step);
  const double free = v > 0.0 ? l.length / v : kInf;
  const double rank = c.upstream_at(tc);
  if (c.downstream_at(tc) >= rank) return free;
  const double exit = c.time_of_downstream_rank(rank);
  if (exit < 0.0) return kInf;
  return std::max(exit - tc, free);
}

LoadResult load_network(const Network& net, const TimeGrid& grid, const DemandTable& demand,
                        const TurningFractions& fractions, const LoaderOptions& options) {
  const std::size_t links = net.link_count();
  const std::size_t nodes = net.node_count();
  const std::size_t slots = demand.destinations().size();
  const std::size_t steps = grid.steps();
  const double dt = grid.dt;

  LoadResult res;
  res.network = &net;
  res.grid = grid;
  res.options = options;
  res.curves.reserve(links);
  for (std::size_t a = 0; a < links; ++a) res.curves.emplace_back(dt, steps);
  res.balance.assign(slots, {});
  res.link_transfer.assign(steps, 0.0);

  std::vector<FDParams> fd(links);
  for (std::size_t a = 0; a < links; ++a) fd[a] = fd_params(net.link(a), options.variant, options.gamma);

  // Origin vertical queues, dense per node that originates demand.
  std::vector<std::size_t> queue_of(nodes, kNone);
  std::vector<std::vector<double>> queues;
  for (const OdPair& od : demand.ods()) {
    if (queue_of[od.origin] == kNone) {
      queue_of[od.origin] = queues.size();
      queues.emplace_back(slots, 0.0);
    }
  }

  std::vector<double> sending(links), receiving(links), rho(links);
  std::vector<CommodityFlows> composition(links), inflow(links), outflow(links);
  std::vector<Split> splits;
  std::vector<std::size_t> rows_link;  // link index per row, kNone for the origin queue
  CommodityFlows origin_comp;
  std::vector<double> occ(links);

  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * dt;

    const std::size_t bin = grid.departure_bin(t);
    for (std::size_t od = 0; od < demand.ods().size(); ++od) {
      const double amount = demand.rate(od, bin) * dt;
      if (amount <= 0.0) continue;
      const std::size_t slot = demand.od_destination_slot(od);
      queues[queue_of[demand.ods()[od].origin]][slot] += amount;
      res.balance[slot].demanded += amount;
    }

    for (std::size_t a = 0; a < links; ++a) occ[a] = res.curves[a].occupancy();
    for (std::size_t a = 0; a < links; ++a) {
      const Link& l = net.link(a);
      const std::size_t opp = net.opposite_index(a);
      const double k = occ[a] / (l.length * l.width);
      double k_opp = 0.0;
      if (opp != kNone) {
        const Link& o = net.link(opp);
        k_opp = occ[opp] / (o.length * o.width);
      }
      rho[a] = density_ratio({k, k_opp});
      const double v = effective_speed(fd[a], rho[a]);
      sending[a] = occ[a] > 0.0 && v > 0.0 ? sending_flow(l, res.curves[a], v) : 0.0;
      const double storage = options.effective_storage ? rho[a] * l.jam_density : l.jam_density;
      receiving[a] = receiving_flow(l, res.curves[a], storage);
      composition[a] = sending_composition(res.curves[a], sending[a]);
      inflow[a].clear();
      outflow[a].clear();
    }

    for (std::size_t v = 0; v < nodes; ++v) {
      const auto& ins = net.incoming(v);
      const auto& outs = net.outgoing(v);
      rows_link.clear();
      for (std::size_t a : ins) {
        if (sending[a] > 0.0) rows_link.push_back(a);
      }
      const std::size_t q = queue_of[v];
      origin_comp.clear();
      if (q != kNone) {
        for (std::size_t s = 0; s < slots; ++s) {
          if (queues[q][s] > 0.0) origin_comp.emplace_back(s, queues[q][s]);
        }
        if (!origin_comp.empty()) rows_link.push_back(kNone);
      }
      if (rows_link.empty()) continue;

      const std::size_t m = outs.size() + 1;  // last column is the sink
      NodeFlowProblem prob(rows_link.size(), m);
      splits.clear();
      for (std::size_t r = 0; r < rows_link.size(); ++r) {
        const std::size_t a = rows_link[r];
        const CommodityFlows& comp = a == kNone ? origin_comp : composition[a];
        const std::size_t incoming = a == kNone ? fractions.origin_index(v) : a;
        for (const auto& [slot, amount] : comp) {
          const std::size_t dest = demand.destinations()[slot];
          const auto row = fractions.row(slot, incoming, v, dest, t);
          if (row.empty()) {
            throw RuntimeError("no route from node " + std::to_string(net.node(v).id) +
                               " to destination " + std::to_string(net.node(dest).id));
          }
          for (const auto& [out, frac] : row) {
            std::size_t col = m - 1;
            if (out != kSink) {
              const auto it = std::find(outs.begin(), outs.end(), out);
              if (it == outs.end()) {
                throw RuntimeError("turning fraction references link " +
                                   std::to_string(net.link(out).id) + " not leaving node " +
                                   std::to_string(net.node(v).id));
              }
              col = static_cast<std::size_t>(it - outs.begin());
            }
            prob.S(r, col) += amount * frac;
            splits.push_back({r, col, slot, amount * frac});
          }
        }
      }
      std::vector<std::pair<double, double>> windows(m, {0.0, 0.0});
      for (std::size_t j = 0; j < outs.size(); ++j) {
        const std::size_t b = outs[j];
        prob.receiving[j] = receiving[b];
        const std::size_t opp = net.opposite_index(b);
        const Link& lb = net.link(b);
        prob.look_ahead[j] = look_ahead_term(lb, opp == kNone ? nullptr : &res.curves[opp], t, dt);
        const double shift = lb.length / lb.free_flow_speed;
        windows[j] = {t - shift, t + dt - shift};
      }
      prob.receiving[m - 1] = kInf;
      prob.look_ahead[m - 1] = 0.0;

      const NodeFlowSolution sol = solve_node(prob);
      res.clamped_supplies += sol.clamped.size();

      for (std::size_t r = 0; r < rows_link.size(); ++r) {
        const double theta = sol.reduction[r];
        if (theta <= 0.0) continue;
        const std::size_t a = rows_link[r];
        if (a == kNone) {
          for (const auto& [slot, amount] : origin_comp) {
            queues[q][slot] = std::max(0.0, queues[q][slot] - theta * amount);
          }
        } else {
          for (const auto& [slot, amount] : composition[a]) outflow[a].emplace_back(slot, theta * amount);
        }
      }
      for (const Split& sp : splits) {
        const double moved = sol.reduction[sp.row] * sp.amount;
        if (moved <= 0.0) continue;
        const std::size_t a = rows_link[sp.row];
        if (sp.col == m - 1) {
          res.balance[sp.slot].arrived += moved;
        } else {
          inflow[outs[sp.col]].emplace_back(sp.slot, moved);
          if (a != kNone) res.link_transfer[n] += moved;
        }
      }

      if (options.trace_nodes) {
        for (std::size_t r = 0; r < rows_link.size(); ++r) {
          for (std::size_t j = 0; j < m; ++j) {
            if (prob.S(r, j) <= 0.0) continue;
            NodeTraceRow row;
            row.node = net.node(v).id;
            row.t = t;
            row.from_link = rows_link[r] == kNone ? -1 : net.link(rows_link[r]).id;
            row.to_link = j == m - 1 ? -1 : net.link(outs[j]).id;
            row.demand = prob.S(r, j);
            row.receiving = prob.receiving[j];
            row.look_ahead = prob.look_ahead[j];
            row.window_lo = windows[j].first;
            row.window_hi = windows[j].second;
            row.flow = sol.flow[r * m + j];
            res.trace.push_back(row);
          }
        }
      }
    }

    for (std::size_t a = 0; a < links; ++a) {
      advance(res.curves[a], inflow[a], outflow[a], {sending[a], receiving[a]});
    }
  }

  for (std::size_t a = 0; a < links; ++a) {
    for (std::size_t s : res.curves[a].active_commodities()) {
      res.balance[s].in_network += res.curves[a].commodity_occupancy(s);
    }
  }
  for (const auto& qv : queues) {
    for (std::size_t s = 0; s < slots; ++s) res.balance[s].queued += qv[s];
  }
  return res;
}

}  // namespace pedflow
