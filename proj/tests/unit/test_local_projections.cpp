#include "hdlp/local_projections.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace hdlp;

namespace {

// y_t = 0.5 y_{t-1} + x_t + 0.3 x_{t-1} + e_t with iid shocks x_t; the
// response to x at horizon h is 1, 0.8, 0.4, 0.2, ... (0.8 * 0.5^{h-1}).
double truth(int h) { return h == 0 ? 1.0 : 0.8 * std::pow(0.5, h - 1); }

Dataset arx(std::uint64_t seed, Index T) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> n;
  Matrix v(T, 3);
  double y = 0.0, xprev = 0.0;
  for (Index t = 0; t < T; ++t) {
    const double x = n(g);
    y = 0.5 * y + x + 0.3 * xprev + 0.5 * n(g);
    v(t, 0) = y;
    v(t, 1) = x;
    v(t, 2) = n(g);  // irrelevant control
    xprev = x;
  }
  return Dataset::from_matrix(v, {"y", "x", "noise"});
}

LpSpec arx_spec(int h_max) {
  LpSpec s;
  s.response = "y";
  s.shock = "x";
  s.fast_controls = {"noise"};
  s.lags = 4;
  s.h_max = h_max;
  return s;
}

TuningConfig seeded(std::uint64_t seed) {
  TuningConfig t;
  t.seed = seed;
  return t;
}

}  // namespace

TEST_SUITE("local_projections") {

TEST_CASE("impulse responses of a known ARX process") {
  const auto irf = estimate_lp(arx(41, 3000), arx_spec(6), seeded(1));
  REQUIRE(irf.complete());
  CHECK(irf.states == std::vector<std::string>{"linear"});
  for (int h = 0; h <= 6; ++h) {
    const auto& e = irf.horizons[static_cast<std::size_t>(h)];
    CHECK(e.h == h);
    CHECK(std::abs(e.phi_hat[0] - truth(h)) < 4.0 * e.se[0]);
    CHECK(e.se[0] < 0.05);
    CHECK(e.ci_low[0] < e.phi_hat[0]);
    CHECK(e.N == 1 + 4 * 3);
  }
}

TEST_CASE("cumulated responses estimate the running sum") {
  LpSpec s = arx_spec(4);
  s.cumulate = true;
  const auto irf = estimate_lp(arx(42, 3000), s, seeded(2));
  double cum = 0.0;
  for (int h = 0; h <= 4; ++h) {
    cum += truth(h);
    const auto& e = irf.horizons[static_cast<std::size_t>(h)];
    CHECK(std::abs(e.phi_hat[0] - cum) < 4.0 * e.se[0]);
  }
}

TEST_CASE("fixed impact reports exactly one for the self response") {
  LpSpec s;
  s.response = "x";
  s.shock = "x";
  s.slow_controls = {"y"};
  s.lags = 2;
  s.h_max = 2;
  s.fix_impact = true;
  const auto irf = estimate_lp(arx(43, 300), s, seeded(3));
  const auto& e0 = irf.horizons[0];
  CHECK(e0.phi_hat[0] == 1.0);
  CHECK(e0.se[0] == 0.0);
  CHECK(e0.ci_low[0] == 1.0);
  CHECK(e0.ci_high[0] == 1.0);
  // iid shock: no response after impact
  CHECK(std::abs(irf.horizons[1].phi_hat[0]) < 4.0 * irf.horizons[1].se[0]);
}

TEST_CASE("state-dependent responses") {
  std::mt19937_64 g(44);
  std::normal_distribution<double> n;
  const Index T = 2000;
  Matrix v(T, 3);
  double state = 0.0;
  for (Index t = 0; t < T; ++t) {
    const double x = n(g);
    const double impact = state > 0.5 ? 2.0 : 0.5;  // state observed at t-1
    v(t, 0) = impact * x + 0.5 * n(g);
    v(t, 1) = x;
    state = (t / 50) % 2 == 0 ? 1.0 : 0.0;
    v(t, 2) = state;
  }
  const Dataset d = Dataset::from_matrix(v, {"y", "x", "S"});
  LpSpec s;
  s.response = "y";
  s.shock = "x";
  s.lags = 2;
  s.h_max = 1;
  s.state_dummies = {"S"};
  const auto irf = estimate_lp(d, s, seeded(4));
  REQUIRE(irf.complete());
  CHECK(irf.states == std::vector<std::string>{"S", "not_S"});
  const auto& e = irf.horizons[0];
  REQUIRE(e.phi_hat.size() == 2);
  CHECK(std::abs(e.phi_hat[0] - 2.0) < 4.0 * e.se[0]);
  CHECK(std::abs(e.phi_hat[1] - 0.5) < 4.0 * e.se[1]);
  CHECK(e.labels == std::vector<std::string>{"x@S", "x@not_S"});
}

TEST_CASE("thread count does not change results") {
  const auto d = arx(45, 400);
  LpOptions one, four;
  four.threads = 4;
  const auto a = estimate_lp(d, arx_spec(5), seeded(5), one);
  const auto b = estimate_lp(d, arx_spec(5), seeded(5), four);
  for (std::size_t h = 0; h < a.horizons.size(); ++h) {
    CHECK(a.horizons[h].phi_hat == b.horizons[h].phi_hat);
    CHECK(a.horizons[h].se == b.horizons[h].se);
    CHECK(a.horizons[h].lambda == b.horizons[h].lambda);
  }
}

TEST_CASE("grids share nodewise fits and isolate failures") {
  const auto d = arx(46, 400);
  LpSpec a = arx_spec(2), b = arx_spec(2), bad = arx_spec(2);
  b.cumulate = true;  // same regressors, different left-hand side
  bad.response = "missing";
  const auto grid = estimate_lp_grid(d, {a, bad, b}, seeded(6));
  REQUIRE(grid.results.size() == 2);
  CHECK(grid.results[0].nodewise.get() == grid.results[1].nodewise.get());
  REQUIRE(grid.errors.size() == 1);
  CHECK(grid.errors[0].first == 1);
}

TEST_CASE("a mismatched nodewise fit is rejected") {
  const auto d = arx(47, 300);
  LpOptions opt;
  auto nw = std::make_shared<NodewiseFit>(fit_nodewise_fixed(Matrix::Identity(5, 3), {0}, {0.0}));
  opt.nodewise = nw;
  CHECK_THROWS_AS(estimate_lp(d, arx_spec(1), seeded(7), opt), InvalidArgument);
}

TEST_CASE("a horizon that runs out of data fails alone") {
  const auto d = arx(48, 30);
  LpSpec s = arx_spec(18);
  const auto irf = estimate_lp(d, s, seeded(8));
  CHECK(!irf.failed[0]);
  CHECK(irf.failed[18]);
  CHECK(!irf.errors[18].empty());
  CHECK(!irf.complete());
}

}
