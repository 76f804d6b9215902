#include "hdlp/lasso.hpp"
#include "hdlp/random.hpp"
#include "hdlp/stats.hpp"

#include <algorithm>
#include <cmath>

namespace hdlp {

void TuningConfig::validate() const {
  if (!(quantile_level > 0.0 && quantile_level < 1.0)) throw ConfigError("tuning quantile level must lie in (0, 1)");
  if (draws < 100) throw ConfigError("tuning needs at least 100 multiplier draws");
  if (block_length < 0) throw ConfigError("block length must be positive (0 selects it automatically)");
  if (iterations < 0) throw ConfigError("plug-in iterations must be non-negative");
  if (!(scale > 0.0)) throw ConfigError("lambda scale must be positive");
  if (method == LambdaMethod::rate && !(rate_constant > 0.0)) throw ConfigError("rate constant must be positive");
  if (method == LambdaMethod::fixed && !(fixed_lambda >= 0.0)) throw ConfigError("fixed lambda must be non-negative");
  if (solver.max_sweeps < 1 || !(solver.tolerance > 0.0)) throw ConfigError("invalid solver options");
}

Matrix MultiplierBank::take(Index blocks) {
  std::lock_guard lock(mutex_);
  if (values_.rows() < blocks) {
    const Index old = values_.rows();
    Matrix grown(blocks, draws_);
    grown.topRows(old) = values_;
    for (int b = 0; b < draws_; ++b) {
      const auto key = derive_seed(seed_, static_cast<std::uint64_t>(b));
      for (Index k = old; k < blocks; ++k) grown(k, b) = gaussian_at(key, static_cast<std::uint64_t>(k));
    }
    values_ = std::move(grown);
  }
  return values_.topRows(blocks);
}

Index andrews_bandwidth_from_ar1(const std::vector<double>& rho, const std::vector<double>& sigma2, Index T) {
  if (rho.size() != sigma2.size()) throw InvalidArgument("rho and sigma2 lengths differ");
  if (T < 10) throw InvalidArgument("bandwidth selection needs T >= 10");
  double num = 0.0, den = 0.0;
  for (std::size_t s = 0; s < rho.size(); ++s) {
    const double r = rho[s], s4 = sigma2[s] * sigma2[s];
    num += 4.0 * r * r * s4 / (std::pow(1.0 - r, 6) * (1.0 + r) * (1.0 + r));
    den += s4 / std::pow(1.0 - r, 4);
  }
  if (!(den > 0.0)) return 1;
  const double alpha = num / den;
  const double q = std::ceil(1.1447 * std::cbrt(alpha * static_cast<double>(T)));
  return std::clamp<Index>(static_cast<Index>(q), 1, T - 1);
}

Index andrews_bandwidth(const Matrix& w, Warnings* warnings) {
  const Index T = w.rows();
  if (T < 10) throw InvalidArgument("bandwidth selection needs T >= 10");
  std::vector<double> rho, sigma2;
  bool clamped = false;
  for (Index s = 0; s < w.cols(); ++s) {
    const auto x = w.col(s);
    const auto lag = x.head(T - 1);
    const auto lead = x.tail(T - 1);
    const double sxx = lag.squaredNorm();
    if (!(sxx > 0.0)) continue;
    double r = lead.dot(lag) / sxx;
    if (std::abs(r) > 0.97) {
      r = std::copysign(0.97, r);
      clamped = true;
    }
    const double s2 = (lead - r * lag).squaredNorm() / static_cast<double>(T - 1);
    rho.push_back(r);
    sigma2.push_back(s2);
  }
  if (clamped && warnings) warnings->push_back("AR(1) coefficient clamped to +-0.97 in bandwidth selection");
  return andrews_bandwidth_from_ar1(rho, sigma2, T);
}

LambdaChoice plugin_lambda(const Matrix& X, const Vector& resid, const TuningConfig& cfg, MultiplierBank* bank) {
  cfg.validate();
  const Index T = X.rows(), N = X.cols();
  if (resid.size() != T) throw InvalidArgument("residual length does not match the design rows");
  LambdaChoice out;
  if (N == 0) return out;

  const Matrix W = X.array().colwise() * resid.array();
  if (W.isZero(0.0)) {
    out.warnings.push_back("design or residual proxy is identically zero; lambda set to 0");
    out.history.push_back(0.0);
    return out;
  }
  Index L = cfg.block_length > 0 ? cfg.block_length : andrews_bandwidth(W, &out.warnings);
  L = std::min(L, T);
  out.block_length = L;

  // Sum scores within blocks: the multiplier is constant on a block, so
  // sum_t xi_t w_t = sum_b xi_b (sum_{t in b} w_t).
  const Index nb = (T + L - 1) / L;
  Matrix A = Matrix::Zero(nb, N);
  for (Index t = 0; t < T; ++t) A.row(t / L) += W.row(t);

  Matrix Z(nb, cfg.draws);
  if (cfg.multiplier) {
    for (int b = 0; b < cfg.draws; ++b)
      for (Index k = 0; k < nb; ++k) Z(k, b) = cfg.multiplier(static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(k));
  } else if (bank && bank->seed() == cfg.seed && bank->draws() == cfg.draws) {
    Z = bank->take(nb);
  } else {
    MultiplierBank local(cfg.seed, cfg.draws);
    Z = local.take(nb);
  }

  std::vector<double> maxima(static_cast<std::size_t>(cfg.draws));
  constexpr Index chunk = 250;
  for (Index c0 = 0; c0 < cfg.draws; c0 += chunk) {
    const Index n = std::min<Index>(chunk, cfg.draws - c0);
    const Matrix G = A.transpose() * Z.middleCols(c0, n);
    const Vector m = G.cwiseAbs().colwise().maxCoeff().transpose();
    for (Index i = 0; i < n; ++i) maxima[static_cast<std::size_t>(c0 + i)] = m[i];
  }
  out.lambda = cfg.scale * quantile(std::move(maxima), cfg.quantile_level) / static_cast<double>(T);
  out.history.push_back(out.lambda);
  return out;
}

LambdaChoice tune_lambda(const FwlTransform& fwl, const TuningConfig& cfg, MultiplierBank* bank) {
  cfg.validate();
  const Matrix& X = fwl.penalized_design();
  const Index T = X.rows();
  LambdaChoice out;
  switch (cfg.method) {
    case LambdaMethod::fixed:
      out.lambda = cfg.fixed_lambda;
      out.history.push_back(out.lambda);
      return out;
    case LambdaMethod::rate: {
      const double n = std::max<double>(2.0, static_cast<double>(X.cols()));
      out.lambda = cfg.rate_constant * std::sqrt(std::log(n) / static_cast<double>(T));
      out.history.push_back(out.lambda);
      return out;
    }
    case LambdaMethod::plugin:
      break;
  }

  out = plugin_lambda(X, fwl.response(), cfg, bank);
  Vector warm;
  for (int it = 0; it < cfg.iterations && out.lambda > 0.0; ++it) {
    const LassoFit fit = fwl.solve(out.lambda, cfg.solver, warm.size() ? &warm : nullptr);
    warm = fit.beta_minus_S;
    LambdaChoice next = plugin_lambda(X, fit.residuals, cfg, bank);
    next.history.insert(next.history.begin(), out.history.begin(), out.history.end());
    next.warnings.insert(next.warnings.begin(), out.warnings.begin(), out.warnings.end());
    out = std::move(next);
  }
  return out;
}

LambdaChoice tune_lambda(const PenalizedProblem& problem, const TuningConfig& cfg, MultiplierBank* bank) {
  const FwlTransform fwl(problem);
  return tune_lambda(fwl, cfg, bank);
}

}  // namespace hdlp
