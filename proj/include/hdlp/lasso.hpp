#pragma once

#include "hdlp/core.hpp"
#include "hdlp/data.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>

namespace hdlp {

struct SolverOptions {
  /// Converged when no coefficient moves by more than this in a full sweep.
  double tolerance = 1e-8;
  int max_sweeps = 10000;
  /// Re-solve the stationarity equations on the final active set.
  bool polish = true;
};

struct SolverDiagnostics {
  int sweeps = 0;
  double kkt_gap = 0.0;
  bool polished = false;
  Index dropped_columns = 0;
};

/// Solution of  ||y - X b||^2 / T + 2 lambda ||W b||_1  with W zero on the
/// leading unpenalized block.
struct LassoFit {
  Vector beta_S;
  Vector beta_minus_S;
  double lambda = 0.0;
  Vector residuals;
  /// Columns (in full-problem numbering) with nonzero penalized coefficients.
  IndexList active_set;
  double objective = 0.0;
  SolverDiagnostics diagnostics;
  Warnings warnings;

  Vector coefficients() const;
};

double soft_threshold(double z, double t);

double lasso_objective(const PenalizedProblem& problem, const Vector& beta, double lambda);

/// Largest violation of the stationarity conditions at beta.
double kkt_gap(const PenalizedProblem& problem, const Vector& beta, double lambda);

/// Cyclic coordinate descent with covariance updates. Gram columns are
/// computed on first use and cached, so repeated solves on the same design
/// (lambda grids, plug-in iterations) share the work. Holds a reference to
/// X and y; both must outlive the solver.
class CoordinateDescent {
 public:
  CoordinateDescent(const Matrix& X, const Vector& y, Index n_unpenalized);

  struct Result {
    Vector beta;
    int sweeps = 0;
    bool polished = false;
  };

  /// Throws ConvergenceError after options.max_sweeps sweeps.
  Result solve(double lambda, const SolverOptions& options = {}, const Vector* warm_start = nullptr);

  Index dropped_columns() const { return dropped_; }

 private:
  const Vector& gram_column(Index j);
  bool polish(Vector& beta, double lambda);

  const Matrix& X_;
  const Vector& y_;
  Index n_unpenalized_;
  Index dropped_ = 0;
  double inv_T_;
  Vector xty_;   // X'y / T
  Vector diag_;  // diag(X'X) / T
  std::vector<bool> degenerate_;
  std::vector<Vector> gram_;
  std::vector<bool> have_gram_;
};

/// Direct weighted-lasso solve on the full problem (test route).
LassoFit fit_weighted_lasso(const PenalizedProblem& problem, double lambda,
                            const SolverOptions& options = {}, const Vector* warm_start = nullptr);

/// Frisch-Waugh-Lovell route: the unpenalized block is projected out, the
/// remaining lasso is solved on the residualized data and the unpenalized
/// coefficients are recovered by least squares.
class FwlTransform {
 public:
  explicit FwlTransform(const PenalizedProblem& problem);

  /// M X_{-S} and M y.
  const Matrix& penalized_design() const { return X_pen_; }
  const Vector& response() const { return y_res_; }

  /// Unpenalized coefficients given the penalized ones.
  Vector recover_unpenalized(const Vector& beta_pen) const;

  LassoFit solve(double lambda, const SolverOptions& options = {}, const Vector* warm_penalized = nullptr) const;

 private:
  const PenalizedProblem& problem_;
  Eigen::HouseholderQR<Matrix> qr_;
  Matrix X_pen_;
  Vector y_res_;
  mutable std::unique_ptr<CoordinateDescent> solver_;
};

LassoFit fwl_split_solve(const PenalizedProblem& problem, double lambda,
                         const SolverOptions& options = {});

// --- penalty selection -----------------------------------------------------

enum class LambdaMethod {
  plugin,  // simulated multiplier quantile, iterated on residuals
  rate,    // rate_constant * sqrt(log N / T)
  fixed,   // fixed_lambda
};

struct TuningConfig {
  LambdaMethod method = LambdaMethod::plugin;
  /// Quantile level 1 - alpha_lambda of the simulated maximum.
  double quantile_level = 0.95;
  int draws = 1000;
  /// Multiplier block length; 0 = Andrews bandwidth of x_{j,t} r_t.
  Index block_length = 0;
  int iterations = 2;
  /// Multiplies the simulated quantile (lambda = scale * q / T).
  double scale = 0.8;
  double rate_constant = 1.0;
  double fixed_lambda = 0.0;
  std::uint64_t seed = 0;
  /// Overrides the multiplier process: value for (draw, block). Leave empty
  /// to use the counter-based Gaussian stream.
  std::function<double(std::uint64_t draw, std::uint64_t block)> multiplier;
  SolverOptions solver;

  void validate() const;
};

/// Gaussian block multipliers for (seed, draw, block), generated once and
/// reused across calls with the same seed and draw count. Thread-safe.
class MultiplierBank {
 public:
  MultiplierBank(std::uint64_t seed, int draws) : seed_(seed), draws_(draws) {}
  /// blocks x draws matrix; row k holds block k of every draw.
  Matrix take(Index blocks);
  std::uint64_t seed() const { return seed_; }
  int draws() const { return draws_; }

 private:
  std::uint64_t seed_;
  int draws_;
  Matrix values_;
  std::mutex mutex_;
};

struct LambdaChoice {
  double lambda = 0.0;
  Index block_length = 1;
  /// Lambda after each plug-in pass (first entry uses the initial proxy).
  std::vector<double> history;
  Warnings warnings;
};

/// Andrews (1991) AR(1) plug-in bandwidth for the Bartlett kernel.
Index andrews_bandwidth(const Matrix& w, Warnings* warnings = nullptr);

/// The bandwidth formula given per-column AR(1) estimates.
Index andrews_bandwidth_from_ar1(const std::vector<double>& rho, const std::vector<double>& sigma2, Index T);

/// One plug-in pass: scale/T times the quantile of max_j |sum_t xi_t x_jt r_t|
/// over block-multiplier draws xi.
LambdaChoice plugin_lambda(const Matrix& X, const Vector& resid, const TuningConfig& cfg,
                           MultiplierBank* bank = nullptr);

/// Full penalty selection for a problem: the configured method, with the
/// plug-in iterated on lasso residuals. Problems with unpenalized columns
/// are tuned on their residualized form.
LambdaChoice tune_lambda(const PenalizedProblem& problem, const TuningConfig& cfg,
                         MultiplierBank* bank = nullptr);

/// Same, reusing an existing FWL transform of the problem.
LambdaChoice tune_lambda(const FwlTransform& fwl, const TuningConfig& cfg, MultiplierBank* bank = nullptr);

}  // namespace hdlp
