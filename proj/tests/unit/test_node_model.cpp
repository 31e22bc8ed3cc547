#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles/node_lp_oracle.hpp"
#include "pedflow/ltm_link.hpp"
#include "pedflow/network.hpp"
#include "pedflow/node_model.hpp"

using namespace pedflow;

namespace {

// Incoming rows a, b, c; outgoing columns a', b', c', d'.
NodeFlowProblem worked_example() {
  NodeFlowProblem p(3, 4);
  p.S(1, 0) = 1.0;  // b -> a'
  p.S(0, 1) = 1.0;  // a -> b'
  p.S(1, 3) = 0.5;  // b -> d'
  p.S(2, 3) = 1.0;  // c -> d'
  p.receiving = {3.0, 2.0, 2.0, 1.0};
  p.look_ahead = {1.0, 1.5, 1.0, 0.0};
  return p;
}

double total(const NodeFlowSolution& s) {
  double t = 0.0;
  for (double q : s.flow) t += q;
  return t;
}

oracle::NodeLp to_oracle(const NodeFlowProblem& p) {
  oracle::NodeLp o{p.incoming, p.outgoing, p.demand, {}};
  for (std::size_t j = 0; j < p.outgoing; ++j) o.A.push_back(p.supply(j));
  return o;
}

NodeFlowProblem random_problem(std::mt19937& rng) {
  std::uniform_int_distribution<int> size(1, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  NodeFlowProblem p(size(rng), size(rng));
  for (double& s : p.demand) s = u(rng) < 0.3 ? 0.0 : 3.0 * u(rng);
  for (std::size_t j = 0; j < p.outgoing; ++j) {
    p.receiving[j] = u(rng) < 0.1 ? std::numeric_limits<double>::infinity() : 4.0 * u(rng);
    p.look_ahead[j] = u(rng) < 0.5 ? 0.0 : 2.0 * u(rng);
  }
  return p;
}

}  // namespace

TEST_CASE("worked merge example") {
  const NodeFlowProblem p = worked_example();
  const NodeFlowSolution s = solve_node(p);
  const std::size_t m = p.outgoing;
  CHECK(std::abs(s.q(0, 1, m) - 0.5) < 1e-9);  // a -> b'
  CHECK(std::abs(s.q(1, 0, m) - 1.0) < 1e-9);  // b -> a'
  CHECK(std::abs(s.q(1, 3, m) - 0.5) < 1e-9);  // b -> d'
  CHECK(std::abs(s.q(2, 3, m) - 0.5) < 1e-9);  // c -> d'
  const auto fair = equal_priority_reductions(p);
  CHECK(fair[0] == doctest::Approx(0.5));
  CHECK(fair[1] == doctest::Approx(1.0));
  CHECK(fair[2] == doctest::Approx(0.5));
}

TEST_CASE("unconstrained node passes all demand") {
  NodeFlowProblem p(2, 2);
  p.S(0, 0) = 1.0;
  p.S(0, 1) = 2.0;
  p.S(1, 1) = 1.5;
  p.receiving = {5.0, 5.0};
  p.look_ahead = {1.0, 1.0};
  const NodeFlowSolution s = solve_node(p);
  for (std::size_t k = 0; k < p.demand.size(); ++k) CHECK(s.flow[k] == p.demand[k]);
  CHECK(s.reduction[0] == 1.0);
  CHECK(s.reduction[1] == 1.0);
}

TEST_CASE("single movement takes the minimum") {
  NodeFlowProblem p(1, 1);
  p.S(0, 0) = 5.0;
  p.receiving = {3.0};
  p.look_ahead = {1.0};
  CHECK(solve_node(p).flow[0] == doctest::Approx(2.0));
}

TEST_CASE("equal demands share a scarce supply equally") {
  NodeFlowProblem p(2, 1);
  p.S(0, 0) = 1.0;
  p.S(1, 0) = 1.0;
  p.receiving = {1.0};
  const NodeFlowSolution s = solve_node(p);
  CHECK(s.flow[0] == doctest::Approx(0.5));
  CHECK(s.flow[1] == doctest::Approx(0.5));
  oracle::NodeLp o = to_oracle(p);
  CHECK(oracle::max_throughput(o) == doctest::Approx(total(s)));
}

TEST_CASE("look-ahead beyond the receiving flow clamps supply and is reported") {
  NodeFlowProblem p(1, 2);
  p.S(0, 0) = 1.0;
  p.S(0, 1) = 1.0;
  p.receiving = {0.5, 3.0};
  p.look_ahead = {2.0, 0.0};
  const NodeFlowSolution s = solve_node(p);
  CHECK(s.clamped.size() == 1);
  CHECK(total(s) == 0.0);
}

TEST_CASE("invariance: more demand from a supply-constrained link changes nothing") {
  auto solve_with = [](double big) {
    NodeFlowProblem p(2, 1);
    p.S(0, 0) = 0.2;
    p.S(1, 0) = big;
    p.receiving = {1.0};
    return solve_node(p);
  };
  const auto a = solve_with(5.0);
  const auto b = solve_with(50.0);
  CHECK(a.flow[0] == doctest::Approx(b.flow[0]));
  CHECK(a.flow[1] == doctest::Approx(b.flow[1]));
  CHECK(a.flow[1] == doctest::Approx(0.8));
}

TEST_CASE("throughput is maximal where equal priority alone is not") {
  // One link can use 10 units, but only if its share into the scarce link is not rationed equally.
  NodeFlowProblem p(2, 2);
  p.S(0, 0) = 1.0;
  p.S(0, 1) = 9.0;
  p.S(1, 0) = 1.0;
  p.receiving = {1.0, 100.0};
  const NodeFlowSolution s = solve_node(p);
  CHECK(total(s) == doctest::Approx(oracle::max_throughput(to_oracle(p))));
  CHECK(total(s) == doctest::Approx(10.0));
}

TEST_CASE("random problems: optimal, proportional and feasible") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const NodeFlowProblem p = random_problem(rng);
    const NodeFlowSolution s = solve_node(p);
    CHECK(std::abs(total(s) - oracle::max_throughput(to_oracle(p))) < 1e-6);
    for (std::size_t i = 0; i < p.incoming; ++i) {
      const double si = p.sending(i);
      double qi = 0.0;
      for (std::size_t j = 0; j < p.outgoing; ++j) qi += s.q(i, j, p.outgoing);
      CHECK(qi <= si + 1e-9);
      if (qi > 1e-12) {
        for (std::size_t j = 0; j < p.outgoing; ++j) {
          CHECK(std::abs(s.q(i, j, p.outgoing) / qi - p.S(i, j) / si) < 1e-9);
        }
      }
    }
    for (std::size_t j = 0; j < p.outgoing; ++j) {
      double in = 0.0;
      for (std::size_t i = 0; i < p.incoming; ++i) in += s.q(i, j, p.outgoing);
      CHECK(in <= p.supply(j) + 1e-9);
    }
  }
}

TEST_CASE("look-ahead term reads the opposite link's recent inflow") {
  Link out;
  out.length = 2.0;
  out.free_flow_speed = 1.0;
  CHECK(look_ahead_term(out, nullptr, 5.0, 1.0) == 0.0);
  CumulativeCurve idle(1.0);
  for (int n = 0; n < 6; ++n) advance(idle, {}, {}, {0.0, 0.0});
  CHECK(look_ahead_term(out, &idle, 6.0, 1.0) == 0.0);
  // Opposite link fed 2 ped/s: window (t - 2, t - 1] holds 2 pedestrians.
  CumulativeCurve busy(1.0);
  for (int n = 0; n < 6; ++n) advance(busy, {{0, 2.0}}, {}, {0.0, 2.0});
  CHECK(look_ahead_term(out, &busy, 6.0, 1.0) == doctest::Approx(2.0));
  CHECK(look_ahead_term(out, &busy, 1.0, 1.0) == 0.0);  // window before the start
}
