#include <doctest.h>

#include "pedflow/route_choice.hpp"
#include "pedflow/scenarios.hpp"
#include "pedflow/turning_fractions.hpp"

using namespace pedflow;

namespace {

LinkTimeFn free_flow(const Network& net) {
  return [&net](std::size_t a, double) { return net.link(a).free_flow_time(); };
}

double fraction(std::span<const std::pair<std::size_t, double>> row, std::size_t out) {
  double sum = 0.0;
  for (const auto& [link, phi] : row) {
    if (link == out) sum += phi;
  }
  return sum;
}

}  // namespace

TEST_CASE("one fraction set per destination") {
  const Network net = grid_network(3);
  const TimeGrid grid{1.0, 60.0, 1.0};
  DemandProfile dem;
  dem.entries = {{1, 9, 0.0, 1.0}, {3, 9, 0.0, 1.0}, {7, 3, 0.0, 1.0}};
  const DemandTable table(net, grid, dem);
  REQUIRE(table.destinations().size() == 2);
  std::vector<OdPathFlows> flows;
  for (const OdPair& od : table.ods()) {
    OdPathFlows f;
    f.paths = enumerate_paths(net, od, 1);
    f.flow.assign(1, std::vector<double>(table.bins(), 0.0));
    f.flow[0][0] = 1.0;
    flows.push_back(std::move(f));
  }
  const TurningFractions tf = paths_to_turning_fractions(net, grid, table, flows, free_flow(net));
  CHECK(tf.sets() == 2);
}

TEST_CASE("a single path gets fraction 1 at every node it crosses") {
  const Network net = grid_network(3);
  const TimeGrid grid{1.0, 60.0, 1.0};
  DemandProfile dem;
  dem.entries = {{1, 9, 0.0, 2.0}};
  const DemandTable table(net, grid, dem);
  const Path path = path_from_nodes(net, {1, 2, 3, 6, 9});
  const TurningFractions tf =
      paths_to_turning_fractions(net, grid, table, {{{path}, {{2.0, 0.0}}}}, free_flow(net));
  const std::size_t dest = net.node_index(9);
  auto phi0 = tf.row(0, tf.origin_index(net.node_index(1)), net.node_index(1), dest, 0.5);
  CHECK(fraction(phi0, path.links[0]) == doctest::Approx(1.0));
  CHECK(phi0.size() == 1);
  // Departures from mid-bin reach the k-th turn after k + 1 free-flow link times.
  const double tau = net.link(path.links[0]).free_flow_time();
  for (std::size_t k = 0; k + 1 < path.links.size(); ++k) {
    const std::size_t node = net.to_index(path.links[k]);
    const auto row = tf.row(0, path.links[k], node, dest, 0.5 + tau * static_cast<double>(k + 1));
    CHECK(row.size() == 1);
    CHECK(fraction(row, path.links[k + 1]) == doctest::Approx(1.0));
  }
  const auto last = tf.row(0, path.links.back(), dest, dest, 0.5 + 4.0 * tau);
  REQUIRE(last.size() == 1);
  CHECK(last[0].first == kSink);
}

TEST_CASE("two equal paths split evenly at their diverge node") {
  const Network net = grid_network(3);
  const TimeGrid grid{1.0, 60.0, 1.0};
  DemandProfile dem;
  dem.entries = {{1, 9, 0.0, 2.0}};
  const DemandTable table(net, grid, dem);
  const Path a = path_from_nodes(net, {1, 2, 3, 6, 9});
  const Path b = path_from_nodes(net, {1, 4, 7, 8, 9});
  const TurningFractions tf = paths_to_turning_fractions(
      net, grid, table, {{{a, b}, {{1.0, 0.0}, {1.0, 0.0}}}}, free_flow(net));
  const std::size_t origin = net.node_index(1);
  const auto row = tf.row(0, tf.origin_index(origin), origin, net.node_index(9), 0.5);
  CHECK(fraction(row, a.links[0]) == doctest::Approx(0.5));
  CHECK(fraction(row, b.links[0]) == doctest::Approx(0.5));
}

TEST_CASE("empty rows fall back to the successor table") {
  const Network net = grid_network(3);
  const TimeGrid grid{1.0, 60.0, 1.0};
  DemandProfile dem;
  dem.entries = {{1, 9, 0.0, 1.0}};
  const DemandTable table(net, grid, dem);
  TurningFractions tf(net, grid, 1);
  const std::size_t dest = net.node_index(9);
  const std::size_t node5 = net.node_index(5);
  const std::size_t into5 = net.find_link(4, 5);
  CHECK(tf.row(0, into5, node5, dest, 3.0).empty());
  tf.set_fallback(successor_table(net, table, free_flow_costs(net, grid)));
  const auto row = tf.row(0, into5, node5, dest, 3.0);
  REQUIRE(row.size() == 1);
  // Ties between 5-6 and 5-8 go to the lower next-node id.
  CHECK(row[0].first == net.find_link(5, 6));
  CHECK(row[0].second == 1.0);
  const auto at_dest = tf.row(0, net.find_link(8, 9), dest, dest, 3.0);
  REQUIRE(at_dest.size() == 1);
  CHECK(at_dest[0].first == kSink);
}

TEST_CASE("normalize merges repeated entries") {
  const Network net = grid_network(2);
  const TimeGrid grid{1.0, 10.0, 1.0};
  TurningFractions tf(net, grid, 1);
  const std::size_t a = net.find_link(1, 2), b = net.find_link(1, 3);
  tf.add(0, tf.origin_index(0), 0, a, 1.0);
  tf.add(0, tf.origin_index(0), 0, a, 1.0);
  tf.add(0, tf.origin_index(0), 0, b, 2.0);
  tf.normalize();
  const auto row = tf.row(0, tf.origin_index(0), 0, net.node_index(4), 0.0);
  CHECK(row.size() == 2);
  CHECK(fraction(row, a) == doctest::Approx(0.5));
  CHECK(fraction(row, b) == doctest::Approx(0.5));
}
