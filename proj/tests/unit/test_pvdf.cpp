#include <doctest.h>

#include <cmath>
#include <vector>

#include "pedflow/diagnostics.hpp"
#include "pedflow/pvdf.hpp"

using namespace pedflow;

TEST_CASE("symmetric pVDF closed forms") {
  PvdfParams p;
  CHECK(link_cost(2.0, 4.0, p, 0.0, 0.0) == 2.0);
  p.alpha = 0.5;
  p.beta = 2.0;
  CHECK(link_cost(2.0, 4.0, p, 3.0, 1.0) == doctest::Approx(3.0));  // u + u' = C
  CHECK(link_cost(2.0, 4.0, p, 1.0, 2.0) == link_cost(2.0, 4.0, p, 2.0, 1.0));
  double prev = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double c = link_cost(2.0, 4.0, p, 0.3 * i, 0.1 * i);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("asymmetric term vanishes with mu = 0") {
  PvdfParams s, a;
  a.mode = PvdfMode::asymmetric;
  a.eta_r = -2.0;
  a.eta_c = -3.0;
  a.lambda_r = 0.4;
  a.lambda_c = 0.2;
  for (double u : {0.0, 1.0, 2.5}) {
    for (double v : {0.0, 0.7, 3.0}) CHECK(link_cost(1.5, 4.0, a, u, v) == link_cost(1.5, 4.0, s, u, v));
  }
}

TEST_CASE("asymmetric bell peaks at the lambda point") {
  PvdfParams a;
  a.mode = PvdfMode::asymmetric;
  a.alpha = 0.0;
  a.mu = 0.8;
  a.eta_r = -4.0;
  a.eta_c = -2.0;
  a.lambda_r = 0.3;
  a.lambda_c = 0.6;
  const double C = 5.0;
  const double u0 = a.lambda_r * C, v0 = a.lambda_c * C;
  const double h = 1e-4;
  const double du = (link_cost(1.0, C, a, u0 + h, v0) - link_cost(1.0, C, a, u0 - h, v0)) / (2 * h);
  const double dv = (link_cost(1.0, C, a, u0, v0 + h) - link_cost(1.0, C, a, u0, v0 - h)) / (2 * h);
  CHECK(std::abs(du) < 1e-8);
  CHECK(std::abs(dv) < 1e-8);
  CHECK(link_cost(1.0, C, a, u0, v0) == doctest::Approx(1.8));
  CHECK(link_cost(1.0, C, a, u0 + 1.0, v0) < 1.8);
}

TEST_CASE("parameter validation enforces the bounded bell") {
  PvdfParams p;
  CHECK_NOTHROW(validate(p));
  p.mode = PvdfMode::asymmetric;
  p.eta_r = 0.5;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p.eta_r = -0.5;
  p.mu = -1.0;
  CHECK_THROWS_AS(validate(p), ValidationError);
  PvdfParams q;
  q.beta = 0.5;
  CHECK_THROWS_AS(validate(q), ValidationError);
}

TEST_CASE("instantaneous route time sums costs at the departure bin") {
  const std::vector<double> costs{1.5, 2.0, 4.0};
  const std::vector<std::size_t> path{0, 2};
  CHECK(instantaneous_route_time(path, costs) == 5.5);
  const std::vector<std::size_t> single{1};
  CHECK(instantaneous_route_time(single, costs) == 2.0);
}

TEST_CASE("experienced time follows the traveller through time") {
  // Hand trace: link 0 always takes 10 s; link 1 takes 5 s when entered before t = 8, 10 s after.
  // Departing at 0 the traveller enters link 1 at t = 10 and needs 10 s there: 20 s in total,
  // while costs frozen at departure give 10 + 5 = 15 s.
  const LinkTimeFn fn = [](std::size_t a, double t) { return a == 0 ? 10.0 : (t < 8.0 ? 5.0 : 10.0); };
  const std::vector<std::size_t> path{0, 1};
  const RouteTime r = experienced_route_time(path, fn, 0.0, 100.0);
  CHECK(r.complete);
  CHECK(r.seconds == 20.0);
  const std::vector<double> frozen{fn(0, 0.0), fn(1, 0.0)};
  CHECK(instantaneous_route_time(path, frozen) == 15.0);
}

TEST_CASE("experienced equals instantaneous for time-invariant costs") {
  const LinkTimeFn fn = [](std::size_t a, double) { return 1.0 + static_cast<double>(a); };
  const std::vector<std::size_t> path{0, 1, 2};
  const std::vector<double> frozen{1.0, 2.0, 3.0};
  for (double k : {0.0, 7.0, 33.0}) {
    CHECK(experienced_route_time(path, fn, k, 100.0).seconds == instantaneous_route_time(path, frozen));
  }
  const std::vector<std::size_t> single{2};
  CHECK(experienced_route_time(single, fn, 50.0, 100.0).seconds == 3.0);
}

TEST_CASE("trips past the horizon are incomplete") {
  const LinkTimeFn fn = [](std::size_t, double) { return 30.0; };
  const std::vector<std::size_t> path{0, 1, 2};
  CHECK_FALSE(experienced_route_time(path, fn, 20.0, 60.0).complete);
  const LinkTimeFn never = [](std::size_t, double) { return INFINITY; };
  CHECK_FALSE(experienced_route_time(path, never, 0.0, 60.0).complete);
}
