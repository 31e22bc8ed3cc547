#include "pedflow/engine.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "pedflow/diagnostics.hpp"
#include "pedflow/network_io.hpp"

namespace pedflow {
namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw RuntimeError("cannot write " + p.string());
  out << std::setprecision(15);
  return out;
}

std::string od_name(const Network& net, const OdPair& od) {
  return std::to_string(net.node(od.origin).id) + "-" + std::to_string(net.node(od.destination).id);
}

void fail_on(const std::vector<Violation>& v, const std::string& what) {
  if (v.empty()) return;
  std::string msg = what + ":";
  for (const auto& x : v) msg += "\n  " + x.what;
  throw ValidationError(msg);
}

}  // namespace

ConservationReport check_conservation(const Network& net, const LoadResult& load, double tol) {
  ConservationReport r;
  auto fail = [&](const std::string& msg) {
    if (r.violations.size() < 100) r.violations.push_back(msg);
  };
  for (std::size_t a = 0; a < net.link_count(); ++a) {
    const Link& l = net.link(a);
    const auto& c = load.curves[a];
    const auto& U = c.upstream();
    const auto& V = c.downstream();
    const double storage = l.storage();
    for (std::size_t n = 0; n < U.size(); ++n) {
      ++r.checks;
      const double occ = U[n] - V[n];
      if (occ < -tol || occ > storage + tol) {
        fail("link " + std::to_string(l.id) + " occupancy " + std::to_string(occ) + " outside [0, " +
             std::to_string(storage) + "] at step " + std::to_string(n));
      }
      if (n > 0 && (U[n] < U[n - 1] - tol || V[n] < V[n - 1] - tol)) {
        fail("link " + std::to_string(l.id) + " cumulative curve decreases at step " + std::to_string(n));
      }
    }
    double up = 0.0, down = 0.0;
    for (std::size_t s : c.active_commodities()) {
      up += c.commodity_upstream(s, c.step());
      down += c.commodity_downstream(s, c.step());
    }
    ++r.checks;
    if (std::abs(up - U.back()) > tol * std::max(1.0, U.back()) ||
        std::abs(down - V.back()) > tol * std::max(1.0, V.back())) {
      fail("link " + std::to_string(l.id) + " commodity curves do not sum to the totals");
    }
  }
  for (std::size_t s = 0; s < load.balance.size(); ++s) {
    const TripBalance& b = load.balance[s];
    ++r.checks;
    const double residual = b.demanded - b.queued - b.in_network - b.arrived;
    if (std::abs(residual) > tol * std::max(1.0, b.demanded)) {
      fail("destination slot " + std::to_string(s) + " loses " + std::to_string(residual) + " trips");
    }
  }
  return r;
}

DueOptions due_options(const ScenarioConfig& c, const Network& net) {
  DueOptions o;
  o.pvdf = c.pvdf;
  o.max_iters = c.max_iters;
  o.gap_tol = c.gap_tol;
  o.loader.variant = c.variant;
  o.loader.gamma = c.gamma;
  o.loader.effective_storage = c.effective_storage;
  o.loader.trace_nodes = c.node_trace;
  for (const PenaltySpec& p : c.penalties) {
    const std::size_t a = net.link_index(p.link_id);
    if (a == kNone) throw ValidationError("penalty references unknown link " + std::to_string(p.link_id));
    o.penalties.push_back({a, p.start, p.cost});
  }
  return o;
}

RunResult run_scenario(const ScenarioConfig& config, const Network& net, const DemandProfile& demand,
                       const std::string& out_dir) {
  validate(config);
  fail_on(validate_network(net), "invalid network");
  fail_on(validate_demand(net, config.grid, demand), "invalid demand");
  fail_on(check_cfl(net, config.grid), "time step too large");
  const DueOptions options = due_options(config, net);

  const auto t0 = std::chrono::steady_clock::now();
  const DemandTable table(net, config.grid, demand);
  RunResult res{run_due(net, config.grid, table, options), {}, 0.0};
  res.conservation = check_conservation(net, res.due.load);
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!out_dir.empty()) write_exports(out_dir, config, net, demand, res);
  return res;
}

void write_exports(const std::string& dir, const ScenarioConfig& config, const Network& net,
                   const DemandProfile& demand, const RunResult& res) {
  const fs::path root(dir);
  fs::create_directories(root);
  const LoadResult& load = res.due.load;
  const TimeGrid& grid = config.grid;
  const DemandTable table(net, grid, demand);

  write_network_file((root / "network.csv").string(), net);
  write_demand_file((root / "demand.csv").string(), demand);
  {
    auto out = open_out(root / "config.txt");
    write_config(out, config);
  }
  {
    auto out = open_out(root / "cumulative_curves.csv");
    out << "link,t,U,V\n";
    for (std::size_t a = 0; a < net.link_count(); ++a) {
      const auto& c = load.curves[a];
      for (std::size_t n = 0; n <= c.step(); ++n) {
        out << net.link(a).id << ',' << static_cast<double>(n) * grid.dt << ',' << c.upstream()[n]
            << ',' << c.downstream()[n] << '\n';
      }
    }
  }
  {
    auto out = open_out(root / "link_state.csv");
    out << "link,t,k,q,rho,v_hat\n";
    for (std::size_t a = 0; a < net.link_count(); ++a) {
      const auto& c = load.curves[a];
      for (std::size_t n = 0; n < c.step(); ++n) {
        const double q = 0.5 * ((c.upstream()[n + 1] - c.upstream()[n]) +
                                (c.downstream()[n + 1] - c.downstream()[n])) / grid.dt;
        out << net.link(a).id << ',' << static_cast<double>(n) * grid.dt << ',' << load.density(a, n)
            << ',' << q << ',' << load.density_ratio(a, n) << ',' << load.effective_speed(a, n) << '\n';
      }
    }
  }
  if (config.node_trace) {
    auto out = open_out(root / "node_trace.csv");
    out << "node,t,i,j,S_ij,R_j,look_ahead_j,window_lo,window_hi,q_ij\n";
    for (const NodeTraceRow& r : load.trace) {
      out << r.node << ',' << r.t << ',' << r.from_link << ',' << r.to_link << ',' << r.demand << ','
          << r.receiving << ',' << r.look_ahead << ',' << r.window_lo << ',' << r.window_hi << ','
          << r.flow << '\n';
    }
  }
  const auto& flows = res.due.state.flows;
  {
    auto out = open_out(root / "path_flows.csv");
    out << "od,path_id,path,k,flow\n";
    for (std::size_t od = 0; od < flows.size(); ++od) {
      for (std::size_t p = 0; p < flows[od].paths.size(); ++p) {
        const std::string name = describe(net, flows[od].paths[p]);
        for (std::size_t k = 0; k < flows[od].flow[p].size(); ++k) {
          const double f = flows[od].flow[p][k];
          if (f == 0.0) continue;
          out << od_name(net, table.ods()[od]) << ',' << p << ',' << name << ','
              << grid.departure_time(k) << ',' << f << '\n';
        }
      }
    }
  }
  {
    auto out = open_out(root / "gap.csv");
    out << "iteration,rel_gap\n";
    for (std::size_t i = 0; i < res.due.report.gaps.size(); ++i) {
      out << i + 1 << ',' << res.due.report.gaps[i] << '\n';
    }
  }
  {
    auto out = open_out(root / "route_times.csv");
    out << "od,path_id,k,instantaneous,experienced,complete\n";
    const LinkTimeFn link_time = [&load](std::size_t a, double t) { return load.traversal_time(a, t); };
    for (std::size_t od = 0; od < flows.size(); ++od) {
      for (std::size_t p = 0; p < flows[od].paths.size(); ++p) {
        const auto& links = flows[od].paths[p].links;
        for (std::size_t k = 0; k < flows[od].flow[p].size(); ++k) {
          if (flows[od].flow[p][k] <= 0.0) continue;
          const double inst = instantaneous_route_time(links, res.due.state.costs.bin_costs(k));
          const RouteTime exp = experienced_route_time(links, link_time, grid.departure_time(k), grid.horizon);
          out << od_name(net, table.ods()[od]) << ',' << p << ',' << grid.departure_time(k) << ','
              << inst << ',' << exp.seconds << ',' << (exp.complete ? 1 : 0) << '\n';
        }
      }
    }
  }
  {
    nlohmann::json j;
    double demanded = 0, arrived = 0, queued = 0, on_links = 0;
    nlohmann::json per_dest = nlohmann::json::array();
    for (std::size_t s = 0; s < load.balance.size(); ++s) {
      const TripBalance& b = load.balance[s];
      demanded += b.demanded;
      arrived += b.arrived;
      queued += b.queued;
      on_links += b.in_network;
      per_dest.push_back({{"destination", net.node(table.destinations()[s]).id},
                          {"loaded", b.demanded},
                          {"completed", b.arrived},
                          {"in_network", b.in_network},
                          {"queued_at_origin", b.queued}});
    }
    j["trips_loaded"] = demanded;
    j["trips_completed"] = arrived;
    j["trips_in_network"] = on_links;
    j["trips_queued_at_origin"] = queued;
    j["destinations"] = per_dest;
    j["horizon_s"] = grid.horizon;
    j["dt_s"] = grid.dt;
    j["iterations"] = res.due.report.gaps.size();
    j["final_gap"] = res.due.report.gaps.empty() ? 0.0 : res.due.report.gaps.back();
    j["stop_reason"] = to_string(res.due.report.reason);
    j["links"] = net.link_count();
    j["nodes"] = net.node_count();
    j["conservation_checks"] = res.conservation.checks;
    j["conservation_violations"] = res.conservation.violations.size();
    j["supply_clamps"] = load.clamped_supplies;
    auto out = open_out(root / "summary.json");
    out << j.dump(2) << '\n';
  }
  {
    nlohmann::json j;
    j["wall_clock_s"] = res.wall_seconds;
    auto out = open_out(root / "timing.json");
    out << j.dump(2) << '\n';
  }
}

TimeSpaceMatrix export_time_space(const std::string& run_dir, const std::vector<int>& node_ids) {
  const fs::path root(run_dir);
  const Network net = read_network_file((root / "network.csv").string());
  const Path path = path_from_nodes(net, node_ids);

  std::ifstream in(root / "cumulative_curves.csv");
  if (!in) throw ValidationError("run directory has no cumulative_curves.csv: " + run_dir);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> U(net.link_count()), V(net.link_count());
  double dt = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f[4];
    for (auto& x : f) std::getline(ss, x, ',');
    const std::size_t a = net.link_index(std::stoi(f[0]));
    if (a == kNone) throw ValidationError("cumulative_curves.csv references unknown link " + f[0]);
    const double t = std::stod(f[1]);
    if (U[a].size() == 1 && dt == 0.0) dt = t;
    U[a].push_back(std::stod(f[2]));
    V[a].push_back(std::stod(f[3]));
  }
  if (!(dt > 0.0)) dt = 1.0;
  std::vector<CumulativeCurve> curves;
  curves.reserve(net.link_count());
  std::size_t bins = 0;
  for (std::size_t a = 0; a < net.link_count(); ++a) {
    curves.emplace_back(dt, U[a].size());
    for (std::size_t n = 1; n < U[a].size(); ++n) {
      curves[a].push({{0, U[a][n] - U[a][n - 1]}}, {{0, V[a][n] - V[a][n - 1]}});
    }
    bins = std::max(bins, curves[a].step());
  }
  const TimeSpaceMatrix m = build_time_space(net, curves, path.links, bins);
  {
    auto out = open_out(root / "ts_density.csv");
    write_matrix_csv(out, m, false);
  }
  {
    auto out = open_out(root / "ts_flow.csv");
    write_matrix_csv(out, m, true);
  }
  {
    auto out = open_out(root / "shockwaves.csv");
    out << "id,t_start,t_end,x_start,x_end,speed_mps,direction,rankine_hugoniot_mps\n";
    const auto waves = detect_shockwaves(m);
    for (std::size_t i = 0; i < waves.size(); ++i) {
      const auto& w = waves[i];
      out << i << ',' << w.trajectory.front().first << ',' << w.trajectory.back().first << ','
          << w.trajectory.front().second << ',' << w.trajectory.back().second << ',' << w.speed << ','
          << to_string(w.direction) << ',' << w.rankine_hugoniot() << '\n';
    }
  }
  return m;
}

}  // namespace pedflow
