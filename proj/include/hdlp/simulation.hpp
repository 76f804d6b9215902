#pragma once

#include "hdlp/core.hpp"
#include "hdlp/inference.hpp"
#include "hdlp/lasso.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace hdlp {

/// VAR(4) with tapered Toeplitz coefficients:
/// (A_k)_{ij} = rho_k^{|i-j|+1} when |i-j| < P/2, else 0.
struct DgpSpec {
  Index P = 20;
  Index T = 200;
  std::array<double, 4> rho{0.2, 0.15, 0.1, 0.05};
  /// Negate A_2 and A_4.
  bool sign_switch = false;
  Index burn_in = 200;
  std::uint64_t seed = 0;

  /// Throws ConfigError for bad sizes or a non-stationary VAR.
  void validate() const;
  std::string label() const { return sign_switch ? "dgp2" : "dgp1"; }
};

std::array<Matrix, 4> build_coefficients(const DgpSpec& spec);

/// 4P x 4P companion matrix of a VAR(4).
Matrix companion_matrix(const std::array<Matrix, 4>& A);

double spectral_radius(const Matrix& M);

/// T x P sample after discarding the burn-in; starts from zeros.
Matrix generate(const DgpSpec& spec);

/// (B_h)_{1,1} for h = 0..h_max from B_h = sum_k A_k B_{h-k}, B_0 = I.
Vector true_irf(const DgpSpec& spec, int h_max);

/// Same quantity from powers of the companion matrix (independent route).
Vector true_irf_companion(const DgpSpec& spec, int h_max);

enum class Estimator { proposed, standard };
std::string to_string(Estimator e);

struct CoverageConfig {
  int reps = 100;
  int h_max = 10;
  int lags = 4;
  std::vector<Estimator> estimators{Estimator::proposed, Estimator::standard};
  TuningConfig tuning;
  HacNormalization hac = HacNormalization::full_sample;
  double alpha = 0.05;
  unsigned threads = 1;

  void validate() const;
};

struct CoverageCell {
  std::string dgp;
  Index P = 0;
  Index T = 0;
  Estimator estimator = Estimator::proposed;
  int horizon = 0;
  double coverage = 0.0;
  double mean_width = 0.0;
  int replications = 0;
  int failures = 0;
};

struct CoverageReport {
  /// Ordered by estimator (config order), then horizon 1..h_max.
  std::vector<CoverageCell> cells;
  /// First few failure messages, for diagnostics.
  std::vector<std::string> failure_messages;

  const CoverageCell& cell(Estimator e, int horizon) const;
};

/// Monte Carlo coverage of the h = 1..h_max responses of x_1 to its own
/// shock. Replication r draws its data from derive_seed(spec.seed, r).
CoverageReport run_coverage(const DgpSpec& spec, const CoverageConfig& config);

}  // namespace hdlp
