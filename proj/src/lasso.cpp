#include "hdlp/lasso.hpp"

#include <algorithm>
#include <cmath>

namespace hdlp {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

Vector LassoFit::coefficients() const {
  Vector b(beta_S.size() + beta_minus_S.size());
  b << beta_S, beta_minus_S;
  return b;
}

double lasso_objective(const PenalizedProblem& problem, const Vector& beta, double lambda) {
  const Vector r = problem.y - problem.X * beta;
  const Index S = problem.S();
  return r.squaredNorm() / static_cast<double>(problem.T()) +
         2.0 * lambda * beta.tail(problem.N() - S).lpNorm<1>();
}

double kkt_gap(const PenalizedProblem& problem, const Vector& beta, double lambda) {
  const Vector r = problem.y - problem.X * beta;
  const Vector grad = problem.X.transpose() * r / static_cast<double>(problem.T());
  double gap = 0.0;
  for (Index j = 0; j < problem.N(); ++j) {
    double v;
    if (j < problem.S())
      v = std::abs(grad[j]);
    else if (beta[j] != 0.0)
      v = std::abs(grad[j] - lambda * (beta[j] > 0.0 ? 1.0 : -1.0));
    else
      v = std::max(0.0, std::abs(grad[j]) - lambda);
    gap = std::max(gap, v);
  }
  return gap;
}

// --- coordinate descent ------------------------------------------------------

CoordinateDescent::CoordinateDescent(const Matrix& X, const Vector& y, Index n_unpenalized)
    : X_(X), y_(y), n_unpenalized_(n_unpenalized), inv_T_(1.0 / static_cast<double>(X.rows())) {
  if (y.size() != X.rows()) throw InvalidArgument("response length does not match the design rows");
  const Index N = X.cols();
  xty_ = X.transpose() * y * inv_T_;
  diag_ = X.colwise().squaredNorm().transpose() * inv_T_;
  const double top = N > 0 ? diag_.maxCoeff() : 0.0;
  degenerate_.assign(static_cast<std::size_t>(N), false);
  for (Index j = 0; j < N; ++j) {
    if (diag_[j] <= 1e-14 * top || diag_[j] == 0.0) {
      degenerate_[static_cast<std::size_t>(j)] = true;
      ++dropped_;
    }
  }
  gram_.resize(static_cast<std::size_t>(N));
  have_gram_.assign(static_cast<std::size_t>(N), false);
}

const Vector& CoordinateDescent::gram_column(Index j) {
  const auto k = static_cast<std::size_t>(j);
  if (!have_gram_[k]) {
    gram_[k] = X_.transpose() * X_.col(j) * inv_T_;
    have_gram_[k] = true;
  }
  return gram_[k];
}

bool CoordinateDescent::polish(Vector& beta, double lambda) {
  const Index N = X_.cols();
  IndexList active;
  for (Index j = 0; j < N; ++j)
    if (!degenerate_[static_cast<std::size_t>(j)] && (j < n_unpenalized_ || beta[j] != 0.0)) active.push_back(j);
  if (active.empty()) return false;
  const auto A = static_cast<Index>(active.size());

  Matrix G(A, A);
  Vector rhs(A);
  for (Index k = 0; k < A; ++k) {
    const Vector& col = gram_column(active[static_cast<std::size_t>(k)]);
    for (Index i = 0; i < A; ++i) G(i, k) = col[active[static_cast<std::size_t>(i)]];
    const Index j = active[static_cast<std::size_t>(k)];
    rhs[k] = xty_[j] - (j < n_unpenalized_ ? 0.0 : lambda * (beta[j] > 0.0 ? 1.0 : -1.0));
  }
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success) return false;
  const Vector b = llt.solve(rhs);
  if (!b.allFinite()) return false;

  for (Index k = 0; k < A; ++k) {
    const Index j = active[static_cast<std::size_t>(k)];
    const double old = beta[j];
    if (j >= n_unpenalized_ && b[k] * old <= 0.0) return false;
    if (std::abs(b[k] - old) > 1e-4 * (1.0 + std::abs(old))) return false;
  }

  Vector grad = xty_;
  for (Index k = 0; k < A; ++k) grad -= gram_column(active[static_cast<std::size_t>(k)]) * b[k];
  const double slack = 1e-10 * std::max(1.0, lambda);
  for (Index j = n_unpenalized_; j < N; ++j) {
    if (degenerate_[static_cast<std::size_t>(j)] || beta[j] != 0.0) continue;
    if (std::abs(grad[j]) > lambda + slack) return false;
  }

  beta.setZero();
  for (Index k = 0; k < A; ++k) beta[active[static_cast<std::size_t>(k)]] = b[k];
  return true;
}

CoordinateDescent::Result CoordinateDescent::solve(double lambda, const SolverOptions& options,
                                                   const Vector* warm_start) {
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be non-negative");
  const Index N = X_.cols();
  Result out;
  out.beta = warm_start && warm_start->size() == N ? *warm_start : Vector::Zero(N);
  for (Index j = 0; j < N; ++j)
    if (degenerate_[static_cast<std::size_t>(j)]) out.beta[j] = 0.0;

  Vector grad = xty_;
  for (Index j = 0; j < N; ++j)
    if (out.beta[j] != 0.0) grad -= gram_column(j) * out.beta[j];

  Vector& beta = out.beta;
  auto update = [&](Index j) {
    if (degenerate_[static_cast<std::size_t>(j)]) return 0.0;
    const double z = grad[j] + diag_[j] * beta[j];
    const double next = (j < n_unpenalized_ ? z : soft_threshold(z, lambda)) / diag_[j];
    const double delta = next - beta[j];
    if (delta != 0.0) {
      grad -= gram_column(j) * delta;
      beta[j] = next;
    }
    return std::abs(delta);
  };

  auto fail = [&] {
    const PenalizedProblem view{X_, y_, n_unpenalized_, {}, {}, {}, {}, {}, {}};
    throw ConvergenceError("coordinate descent did not converge in " + std::to_string(options.max_sweeps) +
                               " sweeps",
                           beta, kkt_gap(view, beta, lambda));
  };

  IndexList active;
  for (;;) {
    double change = 0.0;
    for (Index j = 0; j < N; ++j) change = std::max(change, update(j));
    if (++out.sweeps >= options.max_sweeps && change >= options.tolerance) fail();
    if (change < options.tolerance) break;

    // Cycle on the current active set until it settles, then re-check all.
    for (;;) {
      active.clear();
      for (Index j = 0; j < N; ++j)
        if (j < n_unpenalized_ || beta[j] != 0.0) active.push_back(j);
      double inner = 0.0;
      for (auto j : active) inner = std::max(inner, update(j));
      if (++out.sweeps >= options.max_sweeps) fail();
      if (inner < options.tolerance) break;
    }
  }

  if (options.polish) out.polished = polish(beta, lambda);
  return out;
}

// --- direct solve ------------------------------------------------------------

namespace {

LassoFit make_fit(const PenalizedProblem& problem, const Vector& beta, double lambda) {
  LassoFit fit;
  const Index S = problem.S();
  fit.beta_S = beta.head(S);
  fit.beta_minus_S = beta.tail(problem.N() - S);
  fit.lambda = lambda;
  fit.residuals = problem.y - problem.X * beta;
  for (Index j = S; j < problem.N(); ++j)
    if (beta[j] != 0.0) fit.active_set.push_back(j);
  fit.objective = lasso_objective(problem, beta, lambda);
  fit.diagnostics.kkt_gap = kkt_gap(problem, beta, lambda);
  return fit;
}

}  // namespace

LassoFit fit_weighted_lasso(const PenalizedProblem& problem, double lambda, const SolverOptions& options,
                            const Vector* warm_start) {
  problem.check_shapes();
  CoordinateDescent cd(problem.X, problem.y, problem.S());
  const auto res = cd.solve(lambda, options, warm_start);
  LassoFit fit = make_fit(problem, res.beta, lambda);
  fit.diagnostics.sweeps = res.sweeps;
  fit.diagnostics.polished = res.polished;
  fit.diagnostics.dropped_columns = cd.dropped_columns();
  if (cd.dropped_columns() > 0)
    fit.warnings.push_back(std::to_string(cd.dropped_columns()) + " zero-variance column(s) dropped");
  return fit;
}

// --- FWL route ---------------------------------------------------------------

FwlTransform::FwlTransform(const PenalizedProblem& problem) : problem_(problem) {
  problem.check_shapes();
  const Index S = problem.S();
  const Index T = problem.T();
  if (S == 0) {
    X_pen_ = problem.X;
    y_res_ = problem.y;
    return;
  }
  const auto XS = problem.X.leftCols(S);
  qr_.compute(XS);
  // Rank check on the unpenalized block.
  Eigen::ColPivHouseholderQR<Matrix> piv(XS);
  if (piv.rank() < S) throw NumericError("unpenalized columns are rank deficient");
  const Matrix Q = qr_.householderQ() * Matrix::Identity(T, S);
  const auto Xm = problem.X.rightCols(problem.N() - S);
  X_pen_ = Xm - Q * (Q.transpose() * Xm);
  y_res_ = problem.y - Q * (Q.transpose() * problem.y);
}

Vector FwlTransform::recover_unpenalized(const Vector& beta_pen) const {
  const Index S = problem_.S();
  if (S == 0) return Vector(0);
  const Vector partial = problem_.y - problem_.X.rightCols(problem_.N() - S) * beta_pen;
  return qr_.solve(partial);
}

LassoFit FwlTransform::solve(double lambda, const SolverOptions& options, const Vector* warm_penalized) const {
  if (!solver_) solver_ = std::make_unique<CoordinateDescent>(X_pen_, y_res_, 0);
  const auto res = solver_->solve(lambda, options, warm_penalized);
  Vector beta(problem_.N());
  beta << recover_unpenalized(res.beta), res.beta;
  LassoFit fit = make_fit(problem_, beta, lambda);
  fit.diagnostics.sweeps = res.sweeps;
  fit.diagnostics.polished = res.polished;
  fit.diagnostics.dropped_columns = solver_->dropped_columns();
  if (solver_->dropped_columns() > 0)
    fit.warnings.push_back(std::to_string(solver_->dropped_columns()) +
                           " column(s) without variation outside the unpenalized block dropped");
  return fit;
}

LassoFit fwl_split_solve(const PenalizedProblem& problem, double lambda, const SolverOptions& options) {
  const FwlTransform fwl(problem);
  return fwl.solve(lambda, options);
}

}  // namespace hdlp
