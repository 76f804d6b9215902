#pragma once

#include "hdlp/core.hpp"
#include "hdlp/data.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hdlp {

struct FavarConfig {
  int n_factors = 3;
  int var_lags = 13;
  int h_max = 48;
  int draws = 499;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::string policy;
  std::vector<std::string> slow;
  unsigned threads = 1;

  void validate() const;
};

struct Standardized {
  Matrix values;
  Vector means;
  Vector sds;
};

/// Columns scaled to mean 0 and variance 1 (divisor T - 1). Constant
/// columns raise NumericError.
Standardized standardize(const Matrix& X);

struct PrincipalComponents {
  Matrix scores;    // T x k
  Matrix loadings;  // P x k, orthonormal columns
  Vector variance_share;
};

/// First k principal components, each signed so that its largest-magnitude
/// loading is positive. Throws InvalidArgument when k exceeds the rank.
PrincipalComponents principal_components(const Matrix& X, int k);

Matrix extract_factors(const Matrix& X, int k);

/// F = C - R_s b_R where b_R is the R_s row of the OLS fit of C on [C*, R_s].
Matrix rotate_factors(const Matrix& C, const Matrix& C_star, const Vector& R_s, Vector* b_R = nullptr);

/// OLS VAR(p) with intercept.
struct VarModel {
  int p = 1;
  Vector intercept;
  std::vector<Matrix> A;  // A[i] multiplies y_{t-1-i}
  Matrix residuals;       // (T - p) x n
  Matrix sigma;           // residuals' residuals / (T - p)

  Index dim() const { return intercept.size(); }
  Matrix companion() const;
};

VarModel fit_var(const Matrix& Y, int p);

/// Responses to the last-ordered (policy) shock under Cholesky
/// identification, scaled so the policy variable moves by exactly one on
/// impact: (h_max + 1) x n.
Matrix var_irf_unit_shock(const VarModel& var, int h_max, Warnings* warnings = nullptr);
Matrix var_irf_unit_shock(const Matrix& Y, int p, int h_max, Warnings* warnings = nullptr);

/// irf_fac ((h+1) x (k+1)) times [Lambda; 0], then running sums for the
/// flagged series.
Matrix map_to_observables(const Matrix& irf_fac, const Matrix& Lambda, const std::vector<bool>& cumulate);

struct VarBands {
  Matrix irf;
  Matrix lower;
  Matrix upper;
  int draws = 0;
  int failures = 0;
};

using IrfMap = std::function<Matrix(const Matrix&)>;

/// Percentile bands for the unit policy-shock responses of `var` (fitted on
/// Y), passed through `observe` when given. Draw b resimulates Y from
/// resampled residuals with seed derive_seed(seed, b); explosive draws are
/// retried up to ten times and then counted as failures.
VarBands bootstrap_var_irf(const Matrix& Y, const VarModel& var, int h_max, int draws, double alpha,
                           std::uint64_t seed, unsigned threads = 1, const IrfMap& observe = {});

struct FavarResult {
  std::vector<std::string> names;
  /// (h_max + 1) x P point responses, in the units of the transformed series
  /// (levels after cumulation).
  Matrix irf;
  Matrix lower;
  Matrix upper;
  /// Factor and policy responses, (h_max + 1) x (k + 1).
  Matrix irf_factors;
  Matrix Lambda;
  std::vector<bool> cumulated;
  int draws = 0;
  int failures = 0;
  Index T = 0;
  Warnings warnings;
};

/// Full pipeline on an untransformed dataset (transform codes applied here).
FavarResult estimate_favar(const Dataset& data, const FavarConfig& config);

}  // namespace hdlp
