#include <doctest.h>

#include <cmath>

#include "oracles/static_ue_oracle.hpp"
#include "pedflow/diagnostics.hpp"
#include "pedflow/route_choice.hpp"
#include "pedflow/scenarios.hpp"

using namespace pedflow;

namespace {

std::vector<int> best_path(const Network& net, const LinkCosts& costs, std::size_t bin, int from,
                           int to) {
  const std::size_t dest = net.node_index(to);
  const ShortestTree tree = shortest_paths(net, costs.bin_costs(bin), dest);
  return tree_path(tree, net, {net.node_index(from), dest}).node_ids(net);
}

Link parallel_link(int id, double length, double capacity) {
  Link l;
  l.id = id;
  l.from = 1;
  l.to = 2;
  l.length = length;
  l.width = 4.0;
  l.free_flow_speed = 1.0;
  l.jam_density = 5.4;
  l.wave_speed = 0.5;
  l.capacity = capacity;
  return l;
}

}  // namespace

TEST_CASE("relative gap") {
  CHECK(relative_gap(10.0, 8.0) == doctest::Approx(0.25));
  CHECK(relative_gap(8.0, 8.0) == 0.0);
  CHECK(relative_gap(0.0, 0.0) == 0.0);
}

TEST_CASE("free-flow grid ties resolve to the lexicographically smallest path") {
  const Network net = grid_network(3);
  const LinkCosts costs = free_flow_costs(net, {1.0, 60.0, 1.0});
  CHECK(best_path(net, costs, 0, 1, 9) == std::vector<int>{1, 2, 3, 6, 9});
  CHECK(best_path(net, costs, 0, 9, 1) == std::vector<int>{9, 6, 3, 2, 1});
  CHECK(best_path(net, costs, 0, 8, 4) == std::vector<int>{8, 5, 4});
}

TEST_CASE("corridor has a single path") {
  const Network net = corridor_network(9);
  const LinkCosts costs = free_flow_costs(net, {1.0, 60.0, 1.0});
  CHECK(best_path(net, costs, 0, 1, 10) == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(enumerate_paths(net, {net.node_index(1), net.node_index(10)}, 10).size() == 1);
}

TEST_CASE("a penalty reroutes departures from its start time") {
  const Network net = grid_network(3);
  const std::size_t closed = net.find_link(4, 7);
  const std::vector<LinkPenalty> pen{{closed, 20.0, 1000.0}};
  const LinkCosts costs = free_flow_costs(net, {1.0, 60.0, 1.0}, pen);
  CHECK(best_path(net, costs, 19, 1, 7) == std::vector<int>{1, 4, 7});
  const auto detour = best_path(net, costs, 20, 1, 7);
  CHECK(detour == std::vector<int>{1, 2, 5, 8, 7});
  CHECK(costs.at(closed, 20) == doctest::Approx(net.link(closed).free_flow_time() + 1000.0));
}

TEST_CASE("shortest paths reject unusable costs") {
  const Network net = grid_network(2);
  std::vector<double> costs(net.link_count(), 1.0);
  costs[0] = 0.0;
  CHECK_THROWS_AS(shortest_paths(net, costs, 3), RuntimeError);
  costs[0] = std::nan("");
  CHECK_THROWS_AS(shortest_paths(net, costs, 3), RuntimeError);
}

TEST_CASE("MSA averages all-or-nothing assignments") {
  const Network net = grid_network(3);
  const TimeGrid grid{1.0, 10.0, 10.0};
  DemandProfile dem;
  dem.entries = {{1, 9, 0.0, 3.0}};
  const DemandTable table(net, grid, dem);
  const Path a = path_from_nodes(net, {1, 2, 3, 6, 9});
  const Path b = path_from_nodes(net, {1, 4, 7, 8, 9});
  AssignmentState st;
  update_flows(st, table, {{a}}, 1);
  update_flows(st, table, {{b}}, 2);
  update_flows(st, table, {{b}}, 3);
  REQUIRE(st.flows[0].paths.size() == 2);
  CHECK(st.flows[0].flow[0][0] == doctest::Approx(1.0));
  CHECK(st.flows[0].flow[1][0] == doctest::Approx(2.0));
}

TEST_CASE("zero demand converges immediately") {
  const Network net = grid_network(3);
  const TimeGrid grid{1.0, 20.0, 1.0};
  const DemandTable table(net, grid, DemandProfile{});
  const DueResult r = run_due(net, grid, table, {});
  CHECK(r.report.gaps == std::vector<double>{0.0});
  CHECK(r.report.reason == StopReason::gap_below_tol);
}

TEST_CASE("parallel links reach the static equilibrium split") {
  Network net;
  net.add_node({1, 0.0, 0.0, NodeKind::plain});
  net.add_node({2, 2.0, 0.0, NodeKind::plain});
  net.add_link(parallel_link(1, 2.0, 2.0));
  net.add_link(parallel_link(2, 3.0, 3.0));
  net.finalize();
  const TimeGrid grid{1.0, 200.0, 200.0};
  DemandProfile dem;
  dem.entries = {{1, 2, 0.0, 2.0}};
  const DemandTable table(net, grid, dem);
  DueOptions opt;
  opt.pvdf.alpha = 1.0;
  opt.pvdf.beta = 2.0;
  opt.gap_tol = 1e-4;
  opt.max_iters = 200;
  const DueResult r = run_due(net, grid, table, opt);
  const double f1 = oracle::parallel_ue({2.0, 2.0}, {3.0, 3.0}, 1.0, 2.0, 2.0);
  double got = 0.0;
  const auto& set = r.state.flows[0];
  for (std::size_t p = 0; p < set.paths.size(); ++p) {
    if (set.paths[p].links == std::vector<std::size_t>{0}) got = set.flow[p][0];
  }
  CHECK(got == doctest::Approx(f1).epsilon(0.02));
  CHECK(r.report.gaps.back() < 1e-2);
}

TEST_CASE("grid presets converge") {
  for (int preset : {1, 3}) {
    const Scenario sc = grid_scenario(preset);
    DueOptions opt;
    for (const auto& p : sc.config.penalties) {
      opt.penalties.push_back({sc.network.link_index(p.link_id), p.start, p.cost});
    }
    const DueResult r = run_due(sc.network, sc.config.grid, DemandTable(sc.network, sc.config.grid, sc.demand), opt);
    CHECK(r.report.reason == StopReason::gap_below_tol);
    CHECK(r.report.gaps.back() <= 1e-3);
  }
}
