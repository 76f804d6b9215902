#include "hdlp/favar.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace hdlp;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix ar1_path(double rho, double c, Index T, std::uint64_t seed, double sd) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> n;
  Matrix y(T, 1);
  y(0, 0) = c / (1.0 - rho);
  for (Index t = 1; t < T; ++t) y(t, 0) = c + rho * y(t - 1, 0) + sd * n(g);
  return y;
}

}  // namespace

TEST_SUITE("favar") {

TEST_CASE("standardization") {
  const Matrix X = test::gaussian_matrix(50, 3, 1) * 4.0 + Matrix::Constant(50, 3, 2.0);
  const auto s = standardize(X);
  for (Index j = 0; j < 3; ++j) {
    CHECK(std::abs(s.values.col(j).mean()) < 1e-12);
    CHECK(s.values.col(j).squaredNorm() / 49.0 == doctest::Approx(1.0));
  }
  Matrix c = X;
  c.col(1).setConstant(3.0);
  CHECK_THROWS_AS(standardize(c), NumericError);
}

TEST_CASE("rank one panel has one component") {
  const Vector f = test::gaussian_vector(40, 2);
  Vector l(5);
  l << 1.0, -2.0, 0.5, 3.0, 1.5;
  const Matrix X = f * l.transpose();
  const auto pc = principal_components(X, 1);
  CHECK(pc.variance_share[0] == doctest::Approx(1.0));
  // loading proportional to l, signed so that the largest entry (3.0) is positive
  CHECK((pc.loadings.col(0) - l / l.norm()).norm() < 1e-10);
  CHECK_THROWS_AS(principal_components(X, 2), InvalidArgument);
}

TEST_CASE("scores are orthogonal and loadings orthonormal") {
  const Matrix X = test::centred(test::gaussian_matrix(100, 8, 3));
  const auto pc = principal_components(X, 3);
  const Matrix G = pc.scores.transpose() * pc.scores;
  CHECK(max_abs(G - Matrix(G.diagonal().asDiagonal())) < 1e-9);
  CHECK(max_abs(pc.loadings.transpose() * pc.loadings - Matrix::Identity(3, 3)) < 1e-12);
  CHECK(pc.variance_share[0] >= pc.variance_share[1]);
  CHECK(pc.variance_share[1] >= pc.variance_share[2]);
}

TEST_CASE("three factors span the true factor space") {
  const Matrix F = test::gaussian_matrix(300, 3, 4);
  const Matrix L = test::gaussian_matrix(60, 3, 5);
  const Matrix X = F * L.transpose() + 0.3 * test::gaussian_matrix(300, 60, 6);
  const Matrix C = extract_factors(standardize(X).values, 3);
  // each true factor is almost a linear combination of the estimated ones
  Eigen::ColPivHouseholderQR<Matrix> qr(C);
  for (Index j = 0; j < 3; ++j) {
    const Vector fit = C * qr.solve(F.col(j));
    const Vector a = fit.array() - fit.mean(), b = F.col(j).array() - F.col(j).mean();
    CHECK(a.dot(b) / (a.norm() * b.norm()) > 0.95);
  }
}

TEST_CASE("factor rotation oracles") {
  const Matrix Cs = test::gaussian_matrix(80, 2, 7);
  const Vector R = test::gaussian_vector(80, 8);
  // C built from C* and R: the rotation removes exactly the R component
  Matrix C = Cs * Matrix::Identity(2, 2);
  C.col(0) += 0.7 * R;
  C.col(1) -= 0.2 * R;
  Vector b;
  const Matrix F = rotate_factors(C, Cs, R, &b);
  CHECK(b[0] == doctest::Approx(0.7));
  CHECK(b[1] == doctest::Approx(-0.2));
  CHECK(max_abs(F - Cs) < 1e-10);
  // when C does not load on R the rotation is the identity
  const Matrix G = rotate_factors(Cs, Cs, R, &b);
  CHECK(b.cwiseAbs().maxCoeff() < 1e-10);
  CHECK(max_abs(G - Cs) < 1e-10);
}

TEST_CASE("AR(1) unit-shock response is rho^h") {
  for (double rho : {0.3, 0.8, -0.5}) {
    const Matrix y = ar1_path(rho, 1.0, 400, 9, 1.0);
    const VarModel var = fit_var(y, 1);
    const Matrix irf = var_irf_unit_shock(var, 12);
    const double r = var.A[0](0, 0);
    CHECK(irf(0, 0) == 1.0);
    for (int h = 0; h <= 12; ++h) CHECK(std::abs(irf(h, 0) - std::pow(r, h)) < 1e-10);
    CHECK(std::abs(r - rho) < 0.1);
  }
}

TEST_CASE("OLS VAR recovers known coefficients") {
  std::mt19937_64 g(10);
  std::normal_distribution<double> n;
  Matrix A(2, 2);
  A << 0.5, 0.1, -0.2, 0.3;
  Matrix Y = Matrix::Zero(3000, 2);
  for (Index t = 1; t < 3000; ++t) {
    Vector e(2);
    e << n(g), n(g);
    Y.row(t) = (A * Y.row(t - 1).transpose() + e).transpose();
  }
  const VarModel var = fit_var(Y, 1);
  CHECK(max_abs(var.A[0] - A) < 0.06);
  CHECK(var.residuals.rows() == 2999);
  CHECK(var.companion().rows() == 2);
  CHECK(max_abs(var.sigma - Matrix::Identity(2, 2)) < 0.1);
}

TEST_CASE("unit impact and recursive ordering") {
  const Matrix Y = test::gaussian_matrix(200, 3, 11);
  const Matrix irf = var_irf_unit_shock(Y, 2, 6);
  CHECK(irf(0, 2) == 1.0);
  // policy ordered last: nothing else moves on impact
  for (Index i = 0; i < 2; ++i) CHECK(irf(0, i) == 0.0);
  // one step later the response is the last column of A_1
  const VarModel var = fit_var(Y, 2);
  for (Index i = 0; i < 3; ++i) CHECK(irf(1, i) == doctest::Approx(var.A[0](i, 2)));
}

TEST_CASE("diagonal VAR decouples") {
  Matrix Y(500, 2);
  Y.col(0) = ar1_path(0.6, 0.0, 500, 12, 1.0);
  Y.col(1) = ar1_path(0.4, 0.0, 500, 13, 1.0);
  VarModel var = fit_var(Y, 1);
  var.A[0](0, 1) = var.A[0](1, 0) = 0.0;
  var.sigma = Matrix::Identity(2, 2);
  const Matrix irf = var_irf_unit_shock(var, 5);
  for (int h = 0; h <= 5; ++h) {
    CHECK(irf(h, 0) == 0.0);
    CHECK(irf(h, 1) == doctest::Approx(std::pow(var.A[0](1, 1), h)));
  }
}

TEST_CASE("singular residual covariance falls back to the unit vector") {
  VarModel var;
  var.p = 1;
  var.intercept = Vector::Zero(2);
  var.A = {Matrix::Identity(2, 2) * 0.5};
  var.sigma = Matrix::Zero(2, 2);
  var.residuals = Matrix::Zero(10, 2);
  Warnings w;
  const Matrix irf = var_irf_unit_shock(var, 3, &w);
  CHECK(irf(0, 1) == 1.0);
  CHECK(irf(0, 0) == 0.0);
  CHECK(irf(3, 1) == doctest::Approx(0.125));
  CHECK(!w.empty());
}

TEST_CASE("mapping to observables") {
  Matrix irf(4, 2);  // one factor plus policy
  irf << 1, 1, 1, 0, 1, 0, 1, 0;
  Matrix L(1, 2);  // factors x series
  L << 1.0, 2.0;
  const Matrix out = map_to_observables(irf, L, {true, false});
  CHECK(out.col(0) == (Vector(4) << 1, 2, 3, 4).finished());
  CHECK(out.col(1) == (Vector(4) << 2, 2, 2, 2).finished());
}

TEST_CASE("zero residuals collapse the bootstrap bands") {
  // deterministic AR(1) path: every bootstrap sample reproduces it
  Matrix Y(120, 1);
  double v = 5.0;
  for (Index t = 0; t < 120; ++t) {
    Y(t, 0) = v;
    v = 0.5 + 0.7 * v;
  }
  VarModel var = fit_var(Y, 1);
  var.residuals.setZero();
  const VarBands b = bootstrap_var_irf(Y, var, 8, 20, 0.1, 1);
  CHECK(b.draws == 20);
  CHECK(max_abs(b.lower - b.irf) < 1e-10);
  CHECK(max_abs(b.upper - b.irf) < 1e-10);
  for (int h = 0; h <= 8; ++h) CHECK(std::abs(b.irf(h, 0) - std::pow(0.7, h)) < 1e-10);
}

TEST_CASE("bootstrap bands bracket the estimate and are reproducible") {
  const Matrix Y = ar1_path(0.5, 0.0, 300, 14, 1.0);
  const VarModel var = fit_var(Y, 1);
  const auto a = bootstrap_var_irf(Y, var, 5, 199, 0.1, 3);
  const auto b = bootstrap_var_irf(Y, var, 5, 199, 0.1, 3, 4);
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
  for (int h = 1; h <= 5; ++h) {
    CHECK(a.lower(h, 0) <= a.irf(h, 0));
    CHECK(a.upper(h, 0) >= a.irf(h, 0));
  }
  // one draw: both quantiles equal that draw
  const auto one = bootstrap_var_irf(Y, var, 5, 1, 0.1, 3);
  CHECK(one.lower == one.upper);
}

TEST_CASE("full FAVAR on a simulated panel") {
  std::mt19937_64 g(15);
  std::normal_distribution<double> n;
  const Index T = 300;
  Matrix F = Matrix::Zero(T, 2);
  Vector R = Vector::Zero(T);
  for (Index t = 1; t < T; ++t) {
    F(t, 0) = 0.7 * F(t - 1, 0) + n(g);
    F(t, 1) = 0.5 * F(t - 1, 1) + n(g);
    R[t] = 0.6 * R[t - 1] + 0.3 * F(t, 0) + n(g);
  }
  const Matrix L = test::gaussian_matrix(12, 2, 16);
  Matrix X(T, 13);
  X.leftCols(12) = F * L.transpose() + 0.3 * test::gaussian_matrix(T, 12, 17);
  X.col(12) = R;
  std::vector<std::string> names;
  for (int i = 0; i < 12; ++i) names.push_back("x" + std::to_string(i));
  names.push_back("R");
  Dataset d = Dataset::from_matrix(X, names);
  FavarConfig c;
  c.n_factors = 2;
  c.var_lags = 2;
  c.h_max = 6;
  c.draws = 49;
  c.policy = "R";
  for (int i = 0; i < 6; ++i) c.slow.push_back(names[static_cast<std::size_t>(i)]);
  const auto r = estimate_favar(d, c);
  CHECK(r.irf(0, 12) == 1.0);
  CHECK(r.irf.rows() == 7);
  CHECK(r.irf.cols() == 13);
  CHECK(r.draws + r.failures == 49);
  CHECK((r.lower.array() <= r.upper.array()).all());
  // permuting the non-policy columns permutes the responses
  Matrix Xp = X;
  Xp.col(0).swap(Xp.col(1));
  auto names_p = names;
  std::swap(names_p[0], names_p[1]);
  const auto rp = estimate_favar(Dataset::from_matrix(Xp, names_p), c);
  CHECK(max_abs(rp.irf.col(0) - r.irf.col(1)) < 1e-8);
  CHECK(max_abs(rp.irf.col(12) - r.irf.col(12)) < 1e-8);

  FavarConfig bad = c;
  bad.slow = {"x0"};
  CHECK_THROWS_AS(estimate_favar(d, bad), ConfigError);
}

}
