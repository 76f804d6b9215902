#include "hdlp/data.hpp"
#include "hdlp/synthetic.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace hdlp;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

bool same_with_nan(const Vector& a, const Vector& b, double tol = 1e-12) {
  if (a.size() != b.size()) return false;
  for (Index i = 0; i < a.size(); ++i) {
    if (std::isnan(a[i]) != std::isnan(b[i])) return false;
    if (!std::isnan(a[i]) && std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("data") {

TEST_CASE("transform codes on small series") {
  const double nan = std::nan("");
  CHECK(same_with_nan(apply_transform(vec({2, 4, 8}), 1), vec({2, 4, 8})));
  CHECK(same_with_nan(apply_transform(vec({1, 3, 6}), 2), vec({nan, 2, 3})));
  CHECK(same_with_nan(apply_transform(vec({1, 3, 6, 10}), 3), vec({nan, nan, 1, 1})));
  const double c = 3.7;
  CHECK(same_with_nan(apply_transform(vec({c, c, c}), 5), vec({nan, 0, 0})));
  CHECK(same_with_nan(apply_transform(vec({1, std::exp(1.0), std::exp(3.0)}), 4), vec({0, 1, 3})));
  CHECK(same_with_nan(apply_transform(vec({1, std::exp(1.0), std::exp(3.0)}), 6), vec({nan, nan, 1})));
}

TEST_CASE("second differences compose first differences") {
  std::mt19937_64 g(1);
  Vector x = test::gaussian_vector(g, 40).array().exp().matrix();
  const Vector d1 = apply_transform(x, 2);
  const Vector twice = apply_transform(d1.tail(39), 2);
  const Vector d2 = apply_transform(x, 3);
  CHECK(same_with_nan(d2.tail(38), twice.tail(38), 1e-12));
  const Vector l1 = apply_transform(x, 5);
  const Vector l2 = apply_transform(x, 6);
  CHECK(same_with_nan(l2.tail(38), apply_transform(l1.tail(39), 2).tail(38), 1e-12));
}

TEST_CASE("log of a non-positive value names series and index") {
  try {
    apply_transform(vec({1, 2, -1, 3}), 5, "GDP");
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.series() == "GDP");
    CHECK(e.index() == 2);
  }
  CHECK_THROWS_AS(apply_transform(vec({1, 2}), 7), ConfigError);
}

TEST_CASE("dataset validation") {
  Dataset d = Dataset::from_matrix(Matrix::Ones(5, 2), {"a", "b"});
  CHECK(d.column("b") == 1);
  CHECK_THROWS_AS(d.column("zzz"), ConfigError);
  d.values(2, 0) = std::nan("");
  CHECK_THROWS_AS(d.validate(), ConfigError);  // internal gap
  d.values(2, 0) = 1.0;
  d.values(0, 0) = std::nan("");
  CHECK_NOTHROW(d.validate());  // leading gap is fine
  d.transform_codes[1] = 7;
  CHECK_THROWS_AS(d.validate(), ConfigError);
}

TEST_CASE("apply_transforms is idempotent") {
  Dataset d = Dataset::from_matrix((Matrix(4, 2) << 1, 5, 2, 6, 4, 8, 7, 9).finished(), {"a", "b"});
  d.transform_codes = {2, 1};
  const Dataset once = apply_transforms(d);
  const Dataset twice = apply_transforms(once);
  CHECK(std::isnan(once.values(0, 0)));
  CHECK(once.values(3, 0) == 3.0);
  CHECK(twice.transform_codes == std::vector<int>{1, 1});
  CHECK(same_with_nan(once.values.col(0), twice.values.col(0)));
}

TEST_CASE("demean") {
  const auto r = demean((Matrix(2, 1) << 1, 3).finished());
  CHECK(r.values(0, 0) == -1.0);
  CHECK(r.values(1, 0) == 1.0);
  CHECK(r.means[0] == 2.0);
  const auto z = demean(Matrix::Zero(3, 2));
  CHECK(z.values.isZero());
  CHECK(z.means.isZero());
  std::mt19937_64 g(3);
  const Matrix m = test::gaussian_matrix(g, 30, 4);
  const Matrix once = demean(m).values;
  CHECK((demean(once).values - once).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(once.colwise().mean().cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("two series, one lag, no controls") {
  const Index n = 14;
  Matrix v(n, 2);
  for (Index t = 0; t < n; ++t) {
    v(t, 0) = static_cast<double>(t * t % 7) + 0.5 * static_cast<double>(t);
    v(t, 1) = static_cast<double>((3 * t) % 5) - 1.0;
  }
  const Dataset d = Dataset::from_matrix(v, {"y", "x"});
  LpSpec spec;
  spec.response = "y";
  spec.shock = "x";
  spec.lags = 1;
  spec.h_max = 2;
  const auto p = build_lp_design(d, spec, 0);
  CHECK(p.N() == 3);
  CHECK(p.T() == n - 1);
  // Columns: x_t, x_{t-1}, y_{t-1}, demeaned; oracle built by hand.
  Matrix raw(n - 1, 3);
  Vector y(n - 1);
  for (Index t = 1; t < n; ++t) {
    raw(t - 1, 0) = v(t, 1);
    raw(t - 1, 1) = v(t - 1, 1);
    raw(t - 1, 2) = v(t - 1, 0);
    y[t - 1] = v(t, 0);
  }
  raw.rowwise() -= raw.colwise().mean();
  y.array() -= y.mean();
  CHECK((p.X - raw).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((p.y - y).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(p.S() == 1);
  CHECK(p.column_labels[0] == "x");

  const auto p1 = build_lp_design(d, spec, 1);
  const auto p2 = build_lp_design(d, spec, 2);
  CHECK(p1.T() == p.T() - 1);
  CHECK(p2.T() == p1.T() - 1);
  // y_{t+1} for the first row (t = 1) is v(2, 0) before demeaning.
  Vector y1(n - 2);
  for (Index t = 1; t < n - 1; ++t) y1[t - 1] = v(t + 1, 0);
  y1.array() -= y1.mean();
  CHECK((p1.y - y1).cwiseAbs().maxCoeff() < 1e-12);

  spec.cumulate = true;
  const auto c1 = build_lp_design(d, spec, 1);
  Vector yc(n - 2);
  for (Index t = 1; t < n - 1; ++t) yc[t - 1] = v(t, 0) + v(t + 1, 0);
  yc.array() -= yc.mean();
  CHECK((c1.y - yc).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("design errors") {
  const Dataset d = Dataset::from_matrix(Matrix::Ones(12, 2), {"y", "x"});
  LpSpec spec;
  spec.response = "y";
  spec.shock = "nope";
  CHECK_THROWS_AS(build_lp_design(d, spec, 0), ConfigError);
  spec.shock = "x";
  spec.lags = 12;
  CHECK_THROWS_AS(build_lp_design(d, spec, 0), ConfigError);
  spec.lags = 2;
  spec.h_max = 3;
  CHECK_THROWS_AS(build_lp_design(d, spec, 1), ConfigError);  // only 9 rows left
}

TEST_CASE("macro-scale design has the documented dimensions") {
  const Dataset panel = apply_transforms(synthetic_macro_panel());
  CHECK(panel.cols() == 123);
  LpSpec spec;
  spec.response = "FFR";
  spec.shock = "FFR";
  spec.lags = 13;
  spec.h_max = 1;
  for (std::size_t j = 0; j < panel.names.size(); ++j) {
    if (panel.speed[j] == SpeedClass::slow) spec.slow_controls.push_back(panel.names[j]);
    if (panel.speed[j] == SpeedClass::fast) spec.fast_controls.push_back(panel.names[j]);
  }
  CHECK(spec.slow_controls.size() == 67);
  const auto p = build_lp_design(panel, spec, 1);
  CHECK(p.N() == 1654);
  spec.state_dummies = {"ZLB"};
  const auto rows = p.rows;
  const auto dummies = state_dummies_for(panel, spec, rows);
  const auto q = interact_states(p, dummies, {"zlb", "above"});
  CHECK(q.N() == 3309);
  CHECK(q.S() == 3);
  CHECK(q.of_interest == IndexList{0, 1});
}

TEST_CASE("state interactions") {
  std::mt19937_64 g(5);
  auto p = test::problem(test::centred(test::gaussian_matrix(g, 40, 4)), test::gaussian_vector(g, 40), 1);
  Vector I(40);
  for (Index t = 0; t < 40; ++t) I[t] = (t % 3 == 0) ? 1.0 : 0.0;
  const Vector notI = Vector::Ones(40) - I;
  const auto q = interact_states(p, {I, notI}, {"on", "off"});
  CHECK(q.N() == 2 * 4 + 1);
  CHECK(q.S() == 3);
  CHECK(q.states == std::vector<std::string>{"on", "off"});

  SUBCASE("state blocks sum back to the original design") {
    // Undo the demeaning of the interacted columns: raw block = dummy * x.
    for (Index c = 1; c < 4; ++c) {
      const Vector sum = (I.array() * p.X.col(c).array() + notI.array() * p.X.col(c).array()).matrix();
      CHECK((sum - p.X.col(c)).cwiseAbs().maxCoeff() < 1e-12);
    }
    // Interacted shock columns, re-centred, differ from the oracle only by a constant.
    Vector on = (I.array() * p.X.col(0).array()).matrix();
    on.array() -= on.mean();
    CHECK((q.X.col(0) - on).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("non-partitioning dummies are rejected") {
    CHECK_THROWS_AS(interact_states(p, {I, I}), ConfigError);
  }

  SUBCASE("sparse states are dropped with a warning") {
    Vector rare = Vector::Zero(40);
    rare[3] = rare[9] = 1.0;
    const auto r = interact_states(p, {rare, Vector::Ones(40) - rare}, {"rare", "common"});
    CHECK(r.dropped_states == std::vector<std::string>{"rare"});
    CHECK(r.T() == 38);
    CHECK(r.N() == 4);
    CHECK(!r.warnings.empty());
  }

  SUBCASE("a dummy identically one leaves the design unchanged") {
    const auto r = interact_states(p, {Vector::Ones(40), Vector::Zero(40)});
    CHECK(r.N() == p.N());
    CHECK((r.X - p.X).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("cross indicators give four partitioning states in order") {
  Vector U(4), R(4);
  U << 1, 1, 0, 0;
  R << 1, 0, 1, 0;
  const auto d = cross_indicators({U, R});
  REQUIRE(d.size() == 4);
  for (Index t = 0; t < 4; ++t) {
    CHECK(d[0][t] == U[t] * R[t]);
    CHECK(d[1][t] == U[t] * (1 - R[t]));
    CHECK(d[2][t] == (1 - U[t]) * R[t]);
    CHECK(d[3][t] == (1 - U[t]) * (1 - R[t]));
    CHECK(d[0][t] + d[1][t] + d[2][t] + d[3][t] == 1.0);
  }
}

}
