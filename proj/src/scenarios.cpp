#include "pedflow/scenarios.hpp"

#include <cmath>
#include <functional>

#include "pedflow/diagnostics.hpp"

namespace pedflow {
namespace {

Link make_link(int id, int from, int to, const SegmentSpec& spec, double width, int opposite) {
  Link l;
  l.id = id;
  l.from = from;
  l.to = to;
  l.length = spec.length;
  l.width = width;
  l.free_flow_speed = spec.fd.free_flow_speed;
  l.jam_density = spec.fd.jam_density;
  l.wave_speed = spec.fd.wave_speed;
  l.capacity = default_capacity(spec.fd.free_flow_speed, spec.fd.wave_speed, spec.fd.jam_density, width);
  l.opposite = opposite;
  return l;
}

// One demand entry per departure bin from a rate profile.
void add_profile(DemandProfile& d, int origin, int destination, const TimeGrid& grid,
                 const std::function<double(double)>& rate) {
  for (std::size_t k = 0; k < grid.departure_bins(); ++k) {
    const double t = grid.departure_time(k);
    const double q = rate(t);
    if (q > 0.0) d.entries.push_back({origin, destination, t, q});
  }
}

// Ramp 0 -> peak over [0, 8), hold until 42, back to 0 at 50.
double grid_shape(double t, double peak) {
  if (t < 8.0) return peak * t / 8.0;
  if (t < 42.0) return peak;
  if (t < 50.0) return peak * (50.0 - t) / 8.0;
  return 0.0;
}

// Steps of peak/4 up at t = 1..3, hold from 4 until `end`, steps down over the next 3 s.
double corridor_shape(double t, double peak, double end) {
  const double step = peak / 4.0;
  if (t < 1.0) return 0.0;
  if (t < 4.0) return step * std::floor(t);
  if (t < end) return peak;
  if (t < end + 3.0) return peak - step * (std::floor(t - end) + 1.0);
  return 0.0;
}

ScenarioConfig with_horizon(const ScenarioConfig& base, double horizon) {
  ScenarioConfig c = base;
  if (!(c.grid.horizon > 0.0)) c.grid.horizon = horizon;
  return c;
}

}  // namespace

Network grid_network(std::size_t n, const SegmentSpec& spec) {
  Network net;
  const int size = static_cast<int>(n);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      net.add_node({r * size + c + 1, c * spec.length, r * spec.length, NodeKind::plain});
    }
  }
  int e = 0;
  auto edge = [&](int a, int b) {
    net.add_link(make_link(2 * e + 1, a, b, spec, spec.width, 2 * e + 2));
    net.add_link(make_link(2 * e + 2, b, a, spec, spec.width, 2 * e + 1));
    ++e;
  };
  for (int id = 1; id <= size * size; ++id) {
    const int r = (id - 1) / size, c = (id - 1) % size;
    if (c + 1 < size) edge(id, id + 1);
    if (r + 1 < size) edge(id, id + size);
  }
  net.finalize();
  return net;
}

Network corridor_network(std::size_t segments, const SegmentSpec& spec) {
  Network net;
  const int s = static_cast<int>(segments);
  for (int i = 1; i <= s + 1; ++i) net.add_node({i, (i - 1) * spec.length, 0.0, NodeKind::plain});
  for (int i = 1; i <= s; ++i) net.add_link(make_link(i, i, i + 1, spec, spec.width, s + i));
  for (int i = 1; i <= s; ++i) net.add_link(make_link(s + i, i + 1, i, spec, spec.width, i));
  net.finalize();
  return net;
}

Scenario grid_scenario(int preset, const ScenarioConfig& base) {
  if (preset < 1 || preset > 3) throw ValidationError("grid presets are 1, 2 and 3");
  Scenario sc;
  sc.name = "grid-" + std::to_string(preset);
  sc.config = with_horizon(base, kGridHorizon);
  Network net = grid_network(3);
  Network tagged;
  for (Node node : net.nodes()) {
    if (node.id == 1 || (preset == 2 && node.id == 8)) node.kind = NodeKind::origin;
    if (node.id == 9 || (preset == 2 && node.id == 4)) node.kind = NodeKind::destination;
    tagged.add_node(node);
  }
  for (const Link& l : net.links()) tagged.add_link(l);
  tagged.finalize();
  sc.network = std::move(tagged);

  const TimeGrid& g = sc.config.grid;
  add_profile(sc.demand, 1, 9, g, [](double t) { return grid_shape(t, 6.0); });
  if (preset == 2) add_profile(sc.demand, 8, 4, g, [](double t) { return grid_shape(t, 4.0); });
  if (preset == 3) sc.config.penalties = {{sc.network.link(sc.network.find_link(4, 7)).id, 20.0, 1000.0}};
  return sc;
}

Scenario corridor_scenario(int preset, const ScenarioConfig& base) {
  if (preset < 4 || preset > 6) throw ValidationError("corridor presets are 4, 5 and 6");
  Scenario sc;
  sc.name = "corridor-" + std::to_string(preset);
  sc.config = with_horizon(base, kCorridorHorizon);
  constexpr std::size_t kSegments = 9;
  SegmentSpec spec;
  Network net = corridor_network(kSegments, spec);
  Network tagged;
  for (Node node : net.nodes()) {
    if (node.id == 1) node.kind = NodeKind::origin;
    if (node.id == 10) node.kind = NodeKind::destination;
    tagged.add_node(node);
  }
  for (Link l : net.links()) {
    const bool bottleneck = (l.from == 9 && l.to == 10) || (l.from == 10 && l.to == 9);
    if (preset == 4 && bottleneck) {
      l.width = sc.config.bottleneck_width;
      l.capacity = default_capacity(l.free_flow_speed, l.wave_speed, l.jam_density, l.width);
    }
    tagged.add_link(l);
  }
  tagged.finalize();
  sc.network = std::move(tagged);

  const TimeGrid& g = sc.config.grid;
  add_profile(sc.demand, 1, 10, g, [](double t) { return corridor_shape(t, 4.0, 80.0); });
  if (preset == 5) add_profile(sc.demand, 10, 1, g, [](double t) { return corridor_shape(t, 2.0, 50.0); });
  if (preset == 6) add_profile(sc.demand, 10, 1, g, [](double t) { return corridor_shape(t, 4.0, 50.0); });
  return sc;
}

}  // namespace pedflow
