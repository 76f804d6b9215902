#include "hdlp/favar.hpp"
#include "hdlp/parallel.hpp"
#include "hdlp/random.hpp"
#include "hdlp/simulation.hpp"
#include "hdlp/stats.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace hdlp {

void FavarConfig::validate() const {
  if (n_factors < 1) throw ConfigError("FAVAR needs at least one factor");
  if (var_lags < 1) throw ConfigError("FAVAR VAR lags must be positive");
  if (h_max < 0) throw ConfigError("h_max must be non-negative");
  if (draws < 1) throw ConfigError("bootstrap draws must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (policy.empty()) throw ConfigError("FAVAR needs a policy series");
}

Standardized standardize(const Matrix& X) {
  if (X.rows() < 2) throw InvalidArgument("standardization needs at least two rows");
  Standardized out;
  out.means = X.colwise().mean().transpose();
  out.values = X.rowwise() - out.means.transpose();
  out.sds = (out.values.colwise().squaredNorm() / static_cast<double>(X.rows() - 1)).cwiseSqrt().transpose();
  for (Index j = 0; j < X.cols(); ++j) {
    if (!(out.sds[j] > 0.0)) throw NumericError("column " + std::to_string(j) + " is constant");
    out.values.col(j) /= out.sds[j];
  }
  return out;
}

PrincipalComponents principal_components(const Matrix& X, int k) {
  if (k < 1) throw InvalidArgument("number of components must be positive");
  Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double tol = s.size() ? s[0] * 1e-12 * static_cast<double>(std::max(X.rows(), X.cols())) : 0.0;
  Index rank = 0;
  while (rank < s.size() && s[rank] > tol) ++rank;
  if (k > rank)
    throw InvalidArgument("requested " + std::to_string(k) + " components but the data have rank " +
                          std::to_string(rank));
  PrincipalComponents pc;
  pc.loadings = svd.matrixV().leftCols(k);
  pc.scores = svd.matrixU().leftCols(k) * s.head(k).asDiagonal();
  const double total = s.squaredNorm();
  pc.variance_share = s.head(k).array().square() / total;
  for (int c = 0; c < k; ++c) {
    Index arg;
    pc.loadings.col(c).cwiseAbs().maxCoeff(&arg);
    if (pc.loadings(arg, c) < 0.0) {
      pc.loadings.col(c) *= -1.0;
      pc.scores.col(c) *= -1.0;
    }
  }
  return pc;
}

Matrix extract_factors(const Matrix& X, int k) { return principal_components(X, k).scores; }

Matrix rotate_factors(const Matrix& C, const Matrix& C_star, const Vector& R_s, Vector* b_R) {
  if (C.rows() != C_star.rows() || C.rows() != R_s.size()) throw InvalidArgument("factor inputs differ in length");
  Matrix Z(C.rows(), C_star.cols() + 1);
  Z << C_star, R_s;
  Eigen::ColPivHouseholderQR<Matrix> qr(Z);
  if (qr.rank() < Z.cols()) throw NumericError("slow factors and policy series are collinear");
  const Matrix beta = qr.solve(C);
  const Vector b = beta.row(beta.rows() - 1).transpose();
  if (b_R) *b_R = b;
  return C - R_s * b.transpose();
}

Matrix VarModel::companion() const {
  const Index n = dim();
  Matrix F = Matrix::Zero(n * p, n * p);
  for (int i = 0; i < p; ++i) F.block(0, i * n, n, n) = A[static_cast<std::size_t>(i)];
  if (p > 1) F.block(n, 0, n * (p - 1), n * (p - 1)) = Matrix::Identity(n * (p - 1), n * (p - 1));
  return F;
}

VarModel fit_var(const Matrix& Y, int p) {
  const Index T = Y.rows(), n = Y.cols();
  if (p < 1) throw InvalidArgument("VAR lag order must be positive");
  const Index rows = T - p, k = 1 + n * p;
  if (rows <= k) throw NumericError("too few observations for a VAR(" + std::to_string(p) + ")");
  Matrix Z(rows, k);
  Z.col(0).setOnes();
  for (int i = 1; i <= p; ++i) Z.middleCols(1 + (i - 1) * n, n) = Y.middleRows(p - i, rows);
  const Matrix lhs = Y.bottomRows(rows);
  Eigen::ColPivHouseholderQR<Matrix> qr(Z);
  if (qr.rank() < k) throw NumericError("VAR regressors are collinear");
  const Matrix B = qr.solve(lhs);  // k x n

  VarModel var;
  var.p = p;
  var.intercept = B.row(0).transpose();
  for (int i = 0; i < p; ++i) var.A.push_back(B.middleRows(1 + i * n, n).transpose());
  var.residuals = lhs - Z * B;
  var.sigma = var.residuals.transpose() * var.residuals / static_cast<double>(rows);
  return var;
}

Matrix var_irf_unit_shock(const VarModel& var, int h_max, Warnings* warnings) {
  const Index n = var.dim();
  // The policy shock is ordered last, so the last Cholesky column is zero
  // except on the diagonal; the unit-normalized impact vector is e_n.
  Vector impact = Vector::Zero(n);
  Eigen::LLT<Matrix> llt(var.sigma);
  if (llt.info() == Eigen::Success && llt.matrixL()(n - 1, n - 1) > 0.0) {
    const Matrix L = llt.matrixL();
    impact = L.col(n - 1) / L(n - 1, n - 1);
  } else {
    if (warnings) warnings->push_back("residual covariance is singular; using the unit-impact limit e_n");
    impact[n - 1] = 1.0;
  }
  std::vector<Vector> psi{impact};
  Matrix out(h_max + 1, n);
  out.row(0) = impact.transpose();
  for (int h = 1; h <= h_max; ++h) {
    Vector r = Vector::Zero(n);
    for (int i = 1; i <= std::min(h, var.p); ++i) r.noalias() += var.A[static_cast<std::size_t>(i - 1)] * psi[static_cast<std::size_t>(h - i)];
    out.row(h) = r.transpose();
    psi.push_back(std::move(r));
  }
  return out;
}

Matrix var_irf_unit_shock(const Matrix& Y, int p, int h_max, Warnings* warnings) {
  const VarModel var = fit_var(Y, p);
  if (warnings && !(spectral_radius(var.companion()) < 1.0))
    warnings->push_back("estimated VAR is not stable");
  return var_irf_unit_shock(var, h_max, warnings);
}

Matrix map_to_observables(const Matrix& irf_fac, const Matrix& Lambda, const std::vector<bool>& cumulate) {
  if (irf_fac.cols() != Lambda.rows() + 1) throw InvalidArgument("factor responses and loadings do not conform");
  if (!cumulate.empty() && cumulate.size() != static_cast<std::size_t>(Lambda.cols()))
    throw InvalidArgument("one cumulation flag per series required");
  Matrix out = irf_fac.leftCols(Lambda.rows()) * Lambda;  // the zero row drops the policy column
  for (Index j = 0; j < out.cols(); ++j)
    if (!cumulate.empty() && cumulate[static_cast<std::size_t>(j)])
      for (Index h = 1; h < out.rows(); ++h) out(h, j) += out(h - 1, j);
  return out;
}

namespace {

std::vector<Index> complete_rows(const Matrix& values) {
  std::vector<Index> rows;
  for (Index t = 0; t < values.rows(); ++t)
    if (values.row(t).allFinite()) rows.push_back(t);
  return rows;
}

Matrix take_rows(const Matrix& m, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = m.row(rows[i]);
  return out;
}

}  // namespace

VarBands bootstrap_var_irf(const Matrix& Y, const VarModel& var, int h_max, int draws, double alpha,
                           std::uint64_t seed, unsigned threads, const IrfMap& observe) {
  if (draws < 1) throw InvalidArgument("bootstrap draws must be at least 1");
  const int p = var.p;
  const Index T = Y.rows(), n = var.dim();
  if (Y.cols() != n || T <= p) throw InvalidArgument("bootstrap sample does not match the VAR");
  const auto map = [&](const Matrix& m) { return observe ? observe(m) : m; };
  VarBands out;
  out.irf = map(var_irf_unit_shock(var, h_max));

  // Residual bootstrap with the first p observations as fixed initial values.
  const Index n_res = var.residuals.rows();
  std::vector<Matrix> sims(static_cast<std::size_t>(draws));
  std::vector<char> ok(sims.size(), 0);
  parallel_for(sims.size(), threads, [&](std::size_t b) {
    for (int attempt = 0; attempt < 10; ++attempt) {
      CounterRng rng(derive_seed(derive_seed(seed, b), static_cast<std::uint64_t>(attempt)));
      Matrix Ystar(T, n);
      Ystar.topRows(p) = Y.topRows(p);
      for (Index t = p; t < T; ++t) {
        Vector next = var.intercept + var.residuals.row(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n_res)))).transpose();
        for (int i = 1; i <= p; ++i) next.noalias() += var.A[static_cast<std::size_t>(i - 1)] * Ystar.row(t - i).transpose();
        Ystar.row(t) = next.transpose();
      }
      if (!Ystar.allFinite()) continue;
      try {
        const VarModel vb = fit_var(Ystar, p);
        if (!(spectral_radius(vb.companion()) < 1.0)) continue;
        sims[b] = map(var_irf_unit_shock(vb, h_max));
        ok[b] = 1;
        return;
      } catch (const Error&) {
      }
    }
  });

  std::vector<const Matrix*> good;
  for (std::size_t b = 0; b < sims.size(); ++b) {
    if (ok[b])
      good.push_back(&sims[b]);
    else
      ++out.failures;
  }
  out.draws = static_cast<int>(good.size());
  if (good.empty()) throw NumericError("every bootstrap draw failed");
  out.lower.resize(out.irf.rows(), out.irf.cols());
  out.upper.resize(out.irf.rows(), out.irf.cols());
  std::vector<double> cell(good.size());
  for (Index h = 0; h < out.irf.rows(); ++h)
    for (Index j = 0; j < out.irf.cols(); ++j) {
      for (std::size_t b = 0; b < good.size(); ++b) cell[b] = (*good[b])(h, j);
      std::sort(cell.begin(), cell.end());
      out.lower(h, j) = quantile_sorted(cell, alpha / 2.0);
      out.upper(h, j) = quantile_sorted(cell, 1.0 - alpha / 2.0);
    }
  return out;
}

FavarResult estimate_favar(const Dataset& data, const FavarConfig& config) {
  config.validate();
  data.validate();
  const Index policy = data.column(config.policy);
  std::vector<Index> slow;
  for (const auto& s : config.slow) {
    const Index c = data.column(s);
    if (c != policy && std::find(slow.begin(), slow.end(), c) == slow.end()) slow.push_back(c);
  }
  if (static_cast<int>(slow.size()) < config.n_factors)
    throw ConfigError("FAVAR needs at least as many slow series as factors");

  FavarResult res;
  res.names = data.names;
  for (int code : data.transform_codes) res.cumulated.push_back(code == 2 || code == 5);

  const Dataset transformed = apply_transforms(data);
  const auto rows = complete_rows(transformed.values);
  const Matrix X = take_rows(transformed.values, rows);
  const Index T = X.rows(), P = X.cols(), k = config.n_factors;
  res.T = T;
  if (T <= static_cast<Index>(1 + (k + 1) * config.var_lags) + 1)
    throw ConfigError("too few complete observations for the FAVAR");

  const Standardized all = standardize(X);
  Matrix Xs(T, static_cast<Index>(slow.size()));
  for (std::size_t i = 0; i < slow.size(); ++i) Xs.col(static_cast<Index>(i)) = all.values.col(slow[i]);
  const Matrix C = extract_factors(all.values, config.n_factors);
  const Matrix C_star = extract_factors(Xs, config.n_factors);
  const Vector R = X.col(policy);
  const Vector R_s = all.values.col(policy);
  const Matrix F = rotate_factors(C, C_star, R_s);

  Matrix Y(T, k + 1);
  Y << F, R;
  const VarModel var = fit_var(Y, config.var_lags);
  if (!(spectral_radius(var.companion()) < 1.0)) res.warnings.push_back("estimated FAVAR is not stable");

  // Loadings of the standardized panel on F, rescaled to the data's units.
  Eigen::ColPivHouseholderQR<Matrix> fqr(F);
  if (fqr.rank() < k) throw NumericError("rotated factors are collinear");
  res.Lambda = fqr.solve(all.values) * all.sds.asDiagonal();

  const auto observe = [&](const Matrix& irf_fac) {
    Matrix ir = map_to_observables(irf_fac, res.Lambda, res.cumulated);
    // The policy series responds directly through the VAR.
    ir.col(policy) = irf_fac.col(k);
    if (res.cumulated[static_cast<std::size_t>(policy)])
      for (Index h = 1; h < ir.rows(); ++h) ir(h, policy) += ir(h - 1, policy);
    return ir;
  };
  res.irf_factors = var_irf_unit_shock(var, config.h_max, &res.warnings);
  res.irf = observe(res.irf_factors);

  const VarBands bands = bootstrap_var_irf(Y, var, config.h_max, config.draws, config.alpha, config.seed,
                                           config.threads, observe);
  res.lower = bands.lower;
  res.upper = bands.upper;
  res.draws = bands.draws;
  res.failures = bands.failures;
  if (res.failures > 0)
    res.warnings.push_back(std::to_string(res.failures) + " bootstrap draw(s) unstable after 10 attempts");
  return res;
}

}  // namespace hdlp
