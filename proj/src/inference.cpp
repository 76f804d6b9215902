#include "hdlp/inference.hpp"
#include "hdlp/parallel.hpp"
#include "hdlp/stats.hpp"

#include <cmath>
#include <limits>

namespace hdlp {

namespace {

Matrix drop_column(const Matrix& X, Index j) {
  const Index N = X.cols();
  Matrix out(X.rows(), N - 1);
  out.leftCols(j) = X.leftCols(j);
  out.rightCols(N - 1 - j) = X.rightCols(N - 1 - j);
  return out;
}

struct NodeResult {
  Vector gamma;
  double lambda = 0.0;
  Warnings warnings;
};

NodewiseFit assemble(const Matrix& X, const IndexList& nodes, std::vector<NodeResult>& parts) {
  const Index T = X.rows(), N = X.cols(), S = static_cast<Index>(nodes.size());
  NodewiseFit nw;
  nw.nodes = nodes;
  nw.gamma.resize(S, N - 1);
  nw.Gamma_hat.resize(S, N);
  nw.tau_sq.resize(S);
  for (Index i = 0; i < S; ++i) {
    auto& part = parts[static_cast<std::size_t>(i)];
    const Index j = nodes[static_cast<std::size_t>(i)];
    nw.gamma.row(i) = part.gamma.transpose();
    nw.Gamma_hat.row(i).head(j) = -part.gamma.head(j).transpose();
    nw.Gamma_hat(i, j) = 1.0;
    nw.Gamma_hat.row(i).tail(N - 1 - j) = -part.gamma.tail(N - 1 - j).transpose();
    nw.lambdas.push_back(part.lambda);
    for (auto& w : part.warnings) nw.warnings.push_back("node " + std::to_string(j) + ": " + w);
  }
  nw.V_hat = X * nw.Gamma_hat.transpose();
  for (Index i = 0; i < S; ++i) {
    const double tau = nw.V_hat.col(i).squaredNorm() / static_cast<double>(T) +
                       nw.lambdas[static_cast<std::size_t>(i)] * nw.gamma.row(i).lpNorm<1>();
    if (!(tau >= 1e-12))
      throw NumericError("nodewise tau^2 below 1e-12 for column " + std::to_string(nodes[static_cast<std::size_t>(i)]) +
                         "; it is numerically spanned by the other columns");
    nw.tau_sq[i] = tau;
  }
  nw.Theta_hat = nw.tau_sq.cwiseInverse().asDiagonal() * nw.Gamma_hat;
  return nw;
}

void check_nodes(const Matrix& X, const IndexList& nodes) {
  if (nodes.empty()) throw InvalidArgument("nodewise fit needs at least one column");
  if (X.cols() < 2) throw InvalidArgument("nodewise fit needs at least two columns");
  for (auto j : nodes)
    if (j < 0 || j >= X.cols()) throw InvalidArgument("nodewise column out of range");
}

}  // namespace

NodewiseFit fit_nodewise(const Matrix& X, const IndexList& nodes, const TuningConfig& tuning, MultiplierBank* bank,
                         unsigned threads) {
  check_nodes(X, nodes);
  std::vector<NodeResult> parts(nodes.size());
  parallel_for(nodes.size(), threads, [&](std::size_t i) {
    const Index j = nodes[i];
    PenalizedProblem p;
    p.X = drop_column(X, j);
    p.y = X.col(j);
    const FwlTransform fwl(p);
    LambdaChoice choice = tune_lambda(fwl, tuning, bank);
    LassoFit fit = fwl.solve(choice.lambda, tuning.solver);
    parts[i].gamma = std::move(fit.beta_minus_S);
    parts[i].lambda = choice.lambda;
    parts[i].warnings = std::move(choice.warnings);
    for (auto& w : fit.warnings) parts[i].warnings.push_back(std::move(w));
  });
  return assemble(X, nodes, parts);
}

NodewiseFit fit_nodewise_fixed(const Matrix& X, const IndexList& nodes, const std::vector<double>& lambdas,
                               const SolverOptions& solver) {
  check_nodes(X, nodes);
  if (lambdas.size() != nodes.size()) throw InvalidArgument("one penalty per node required");
  std::vector<NodeResult> parts(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    PenalizedProblem p;
    p.X = drop_column(X, nodes[i]);
    p.y = X.col(nodes[i]);
    LassoFit fit = fwl_split_solve(p, lambdas[i], solver);
    parts[i].gamma = std::move(fit.beta_minus_S);
    parts[i].lambda = lambdas[i];
    parts[i].warnings = std::move(fit.warnings);
  }
  return assemble(X, nodes, parts);
}

Vector desparsify(const LassoFit& fit, const NodewiseFit& nw, const PenalizedProblem& problem) {
  const Vector beta = fit.coefficients();
  if (beta.size() != problem.N() || nw.Theta_hat.cols() != problem.N())
    throw InvalidArgument("lasso fit, nodewise fit and problem disagree on the number of columns");
  const Vector resid = problem.y - problem.X * beta;
  const Vector score = problem.X.transpose() * resid / static_cast<double>(problem.T());
  Vector out(nw.S());
  for (Index i = 0; i < nw.S(); ++i) out[i] = beta[nw.nodes[static_cast<std::size_t>(i)]];
  return out + nw.Theta_hat * score;
}

Matrix hac_covariance_scores(const Matrix& w, Index Q, HacNormalization norm) {
  const Index T = w.rows();
  if (T < 2 || Q < 1 || Q > T - 1) throw InvalidArgument("HAC bandwidth must lie in [1, T-1]");
  const double inv_T = 1.0 / static_cast<double>(T);
  Matrix omega = w.transpose() * w / static_cast<double>(T);
  for (Index l = 1; l < Q; ++l) {
    const double scale = norm == HacNormalization::full_sample ? inv_T : 1.0 / static_cast<double>(T - l);
    const Matrix xi = w.bottomRows(T - l).transpose() * w.topRows(T - l) * scale;
    const double weight = 1.0 - static_cast<double>(l) / static_cast<double>(Q);
    omega += weight * (xi + xi.transpose());
  }
  return 0.5 * (omega + omega.transpose());
}

Matrix hac_covariance(const Matrix& V_hat, const Vector& u_hat, Index Q, HacNormalization norm) {
  if (V_hat.rows() != u_hat.size()) throw InvalidArgument("nodewise residuals and lasso residuals differ in length");
  const Matrix w = V_hat.array().colwise() * u_hat.array();
  return hac_covariance_scores(w, Q, norm);
}

Interval confidence_interval(double phi_hat, double omega, double tau_sq, Index T, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (!(tau_sq > 0.0) || T < 1) throw InvalidArgument("tau^2 and T must be positive");
  Interval out;
  if (!(omega > 1e-14)) {
    out.degenerate = true;
    out.se = std::numeric_limits<double>::infinity();
    out.low = -out.se;
    out.high = out.se;
    return out;
  }
  out.se = std::sqrt(omega / (tau_sq * tau_sq) / static_cast<double>(T));
  const double z = normal_quantile(1.0 - alpha / 2.0);
  out.low = phi_hat - z * out.se;
  out.high = phi_hat + z * out.se;
  return out;
}

HorizonEstimate infer(const PenalizedProblem& problem, const TuningConfig& tuning, const NodewiseFit* precomputed,
                      const InferenceOptions& options, MultiplierBank* bank) {
  problem.check_shapes();
  IndexList nodes = problem.of_interest;
  if (nodes.empty())
    for (Index j = 0; j < problem.S(); ++j) nodes.push_back(j);
  if (nodes.empty()) throw InvalidArgument("problem has no columns of interest");

  HorizonEstimate est;
  est.T = problem.T();
  est.N = problem.N();
  est.alpha = options.alpha;
  for (auto j : nodes)
    est.labels.push_back(static_cast<std::size_t>(j) < problem.column_labels.size()
                             ? problem.column_labels[static_cast<std::size_t>(j)]
                             : "x" + std::to_string(j));

  NodewiseFit local;
  const NodewiseFit* nw = precomputed;
  if (!nw) {
    local = fit_nodewise(problem.X, nodes, tuning, bank);
    nw = &local;
  } else if (nw->nodes != nodes || nw->Gamma_hat.cols() != problem.N()) {
    throw InvalidArgument("precomputed nodewise fit does not match the problem's columns");
  }

  // The standard comparator penalizes every column in the initial fit.
  PenalizedProblem penalized;
  const PenalizedProblem* target = &problem;
  if (options.penalize_interest && problem.S() > 0) {
    penalized.X = problem.X;
    penalized.y = problem.y;
    target = &penalized;
  }
  const FwlTransform fwl(*target);
  const LambdaChoice choice = tune_lambda(fwl, tuning, bank);
  const LassoFit fit = fwl.solve(choice.lambda, tuning.solver);
  est.lambda = choice.lambda;
  est.diagnostics = fit.diagnostics;
  est.warnings = choice.warnings;
  est.warnings.insert(est.warnings.end(), fit.warnings.begin(), fit.warnings.end());

  est.phi_hat = desparsify(fit, *nw, problem);
  const Matrix V = precomputed ? nw->residuals_for(problem.X) : nw->V_hat;
  const Matrix w = V.array().colwise() * fit.residuals.array();
  est.bandwidth = options.bandwidth > 0 ? std::min(options.bandwidth, est.T - 1) : andrews_bandwidth(w, &est.warnings);
  est.omega_hat = hac_covariance_scores(w, est.bandwidth, options.hac);
  est.tau_sq = nw->tau_sq;

  const Index S = nw->S();
  est.se.resize(S);
  est.ci_low.resize(S);
  est.ci_high.resize(S);
  est.degenerate.assign(static_cast<std::size_t>(S), false);
  for (Index i = 0; i < S; ++i) {
    const Interval ci = confidence_interval(est.phi_hat[i], est.omega_hat(i, i), est.tau_sq[i], est.T, options.alpha);
    est.se[i] = ci.se;
    est.ci_low[i] = ci.low;
    est.ci_high[i] = ci.high;
    est.degenerate[static_cast<std::size_t>(i)] = ci.degenerate;
    if (ci.degenerate) est.warnings.push_back("degenerate long-run variance for " + est.labels[static_cast<std::size_t>(i)]);
  }
  return est;
}

Combination linear_combination(const HorizonEstimate& est, const Vector& r) {
  if (r.size() != est.phi_hat.size()) throw InvalidArgument("combination weights do not match the estimates");
  const Vector scaled = r.cwiseQuotient(est.tau_sq);
  const double var = scaled.dot(est.omega_hat * scaled) / static_cast<double>(est.T);
  Combination out;
  out.estimate = r.dot(est.phi_hat);
  // confidence_interval takes omega / tau^4; pass the combined variance with tau = 1.
  out.interval = confidence_interval(out.estimate, var * static_cast<double>(est.T), 1.0, est.T, est.alpha);
  out.se = out.interval.se;
  return out;
}

}  // namespace hdlp
