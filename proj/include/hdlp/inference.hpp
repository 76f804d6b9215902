#pragma once

#include "hdlp/core.hpp"
#include "hdlp/data.hpp"
#include "hdlp/lasso.hpp"

#include <string>
#include <vector>

namespace hdlp {

/// Nodewise lasso regressions for the columns of interest. Row i of every
/// matrix belongs to column nodes[i] of the design.
struct NodewiseFit {
  IndexList nodes;
  /// S x (N-1): coefficients of x_j on X_{-j}, in column order with j skipped.
  Matrix gamma;
  /// S x N: one at (i, nodes[i]), minus gamma elsewhere.
  Matrix Gamma_hat;
  Vector tau_sq;
  /// diag(1 / tau_sq) * Gamma_hat.
  Matrix Theta_hat;
  /// T x S nodewise residuals X * Gamma_hat'.
  Matrix V_hat;
  std::vector<double> lambdas;
  Warnings warnings;

  Index S() const { return static_cast<Index>(nodes.size()); }
  /// Nodewise residuals on another sample of the same columns.
  Matrix residuals_for(const Matrix& X) const { return X * Gamma_hat.transpose(); }
};

/// Fully penalized lasso of each x_j (j in nodes) on the remaining columns
/// with its own tuned penalty. Throws NumericError when some tau_j^2 falls
/// below 1e-12.
NodewiseFit fit_nodewise(const Matrix& X, const IndexList& nodes, const TuningConfig& tuning,
                         MultiplierBank* bank = nullptr, unsigned threads = 1);

/// Same, with per-node penalties given (no tuning).
NodewiseFit fit_nodewise_fixed(const Matrix& X, const IndexList& nodes, const std::vector<double>& lambdas,
                               const SolverOptions& solver = {});

/// beta_S^(L) + Theta X'(y - X beta^(L)) / T for the nodewise columns.
Vector desparsify(const LassoFit& fit, const NodewiseFit& nw, const PenalizedProblem& problem);

enum class HacNormalization {
  full_sample,   // Xi(l) = (1/T) sum_t w_t w_{t-l}'; always positive semidefinite
  lag_adjusted,  // Xi(l) = (1/(T-l)) sum_t w_t w_{t-l}'
};

/// Newey-West long-run covariance of w_t = V_hat row t times u_hat[t] with
/// Bartlett weights 1 - |l|/Q.
Matrix hac_covariance(const Matrix& V_hat, const Vector& u_hat, Index Q,
                      HacNormalization norm = HacNormalization::full_sample);

/// Same, on a precomputed score matrix w (T x S).
Matrix hac_covariance_scores(const Matrix& w, Index Q, HacNormalization norm = HacNormalization::full_sample);

struct Interval {
  double low = 0.0;
  double high = 0.0;
  double se = 0.0;
  /// Long-run variance at or below 1e-14: the interval is the whole line.
  bool degenerate = false;
};

/// phi +- z_{1-alpha/2} sqrt(omega / tau_sq^2 / T).
Interval confidence_interval(double phi_hat, double omega, double tau_sq, Index T, double alpha);

struct InferenceOptions {
  double alpha = 0.05;
  HacNormalization hac = HacNormalization::full_sample;
  /// 0 selects the bandwidth from the scores.
  Index bandwidth = 0;
  /// Penalize the columns of interest too (the standard desparsified lasso).
  bool penalize_interest = false;
};

struct HorizonEstimate {
  int h = 0;
  std::vector<std::string> labels;
  Vector phi_hat;
  Matrix omega_hat;
  Vector tau_sq;
  Vector se;
  Vector ci_low;
  Vector ci_high;
  std::vector<bool> degenerate;
  Index bandwidth = 1;
  double lambda = 0.0;
  Index T = 0;
  Index N = 0;  // regressor columns
  double alpha = 0.05;
  SolverDiagnostics diagnostics;
  Warnings warnings;
};

/// Lasso fit, desparsification, long-run variance and intervals for the
/// problem's columns of interest. A precomputed nodewise fit (from another
/// sample of the same columns) is reused when supplied.
HorizonEstimate infer(const PenalizedProblem& problem, const TuningConfig& tuning,
                      const NodewiseFit* precomputed = nullptr, const InferenceOptions& options = {},
                      MultiplierBank* bank = nullptr);

struct Combination {
  double estimate = 0.0;
  double se = 0.0;
  Interval interval;
};

/// r'phi with variance r' Y^-2 Omega Y^-2 r / T.
Combination linear_combination(const HorizonEstimate& est, const Vector& r);

}  // namespace hdlp
