#include "hdlp/simulation.hpp"
#include "hdlp/local_projections.hpp"
#include "hdlp/parallel.hpp"
#include "hdlp/random.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace hdlp {

std::string to_string(Estimator e) { return e == Estimator::proposed ? "proposed" : "standard"; }

std::array<Matrix, 4> build_coefficients(const DgpSpec& spec) {
  std::array<Matrix, 4> A;
  const Index P = spec.P;
  for (int k = 0; k < 4; ++k) {
    A[k] = Matrix::Zero(P, P);
    for (Index i = 0; i < P; ++i)
      for (Index j = 0; j < P; ++j) {
        const auto d = std::abs(i - j);
        if (2 * d < P) A[k](i, j) = std::pow(spec.rho[k], static_cast<double>(d + 1));
      }
    if (spec.sign_switch && (k == 1 || k == 3)) A[k] = -A[k];
  }
  return A;
}

Matrix companion_matrix(const std::array<Matrix, 4>& A) {
  const Index P = A[0].rows();
  Matrix F = Matrix::Zero(4 * P, 4 * P);
  for (int k = 0; k < 4; ++k) F.block(0, k * P, P, P) = A[k];
  F.block(P, 0, 3 * P, 3 * P) = Matrix::Identity(3 * P, 3 * P);
  return F;
}

double spectral_radius(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(M, false);
  if (es.info() != Eigen::Success) throw NumericError("eigenvalue computation failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

void DgpSpec::validate() const {
  if (P < 1) throw ConfigError("DGP dimension P must be positive");
  if (T < 1) throw ConfigError("DGP length T must be positive");
  if (burn_in < 0) throw ConfigError("burn-in must be non-negative");
  const double r = spectral_radius(companion_matrix(build_coefficients(*this)));
  if (!(r < 1.0)) throw ConfigError("DGP is not stationary (companion spectral radius " + std::to_string(r) + ")");
}

Matrix generate(const DgpSpec& spec) {
  spec.validate();
  const auto A = build_coefficients(spec);
  const Index P = spec.P, total = spec.burn_in + spec.T;
  Matrix x = Matrix::Zero(total + 4, P);  // four zero rows of initial conditions
  CounterRng rng(spec.seed);
  Vector eps(P);
  for (Index t = 4; t < total + 4; ++t) {
    for (Index i = 0; i < P; ++i) eps[i] = rng.gaussian();
    Vector next = eps;
    for (int k = 0; k < 4; ++k) next.noalias() += A[k] * x.row(t - 1 - k).transpose();
    if (next.cwiseAbs().maxCoeff() > 1e8) throw NumericError("simulated VAR diverged");
    x.row(t) = next.transpose();
  }
  return x.bottomRows(spec.T);
}

Vector true_irf(const DgpSpec& spec, int h_max) {
  if (h_max < 0) throw InvalidArgument("h_max must be non-negative");
  const auto A = build_coefficients(spec);
  const Index P = spec.P;
  std::vector<Matrix> B{Matrix::Identity(P, P)};
  Vector out(h_max + 1);
  out[0] = 1.0;
  for (int h = 1; h <= h_max; ++h) {
    Matrix Bh = Matrix::Zero(P, P);
    for (int k = 1; k <= std::min(h, 4); ++k) Bh.noalias() += A[k - 1] * B[static_cast<std::size_t>(h - k)];
    out[h] = Bh(0, 0);
    B.push_back(std::move(Bh));
  }
  return out;
}

Vector true_irf_companion(const DgpSpec& spec, int h_max) {
  if (h_max < 0) throw InvalidArgument("h_max must be non-negative");
  const Matrix F = companion_matrix(build_coefficients(spec));
  Matrix power = Matrix::Identity(F.rows(), F.cols());
  Vector out(h_max + 1);
  for (int h = 0; h <= h_max; ++h) {
    out[h] = power(0, 0);
    power = power * F;
  }
  return out;
}

void CoverageConfig::validate() const {
  if (reps < 1) throw ConfigError("replications must be at least 1");
  if (h_max < 1) throw ConfigError("coverage h_max must be at least 1");
  if (lags < 1) throw ConfigError("lags must be positive");
  if (estimators.empty()) throw ConfigError("no estimators selected");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  tuning.validate();
}

const CoverageCell& CoverageReport::cell(Estimator e, int horizon) const {
  for (const auto& c : cells)
    if (c.estimator == e && c.horizon == horizon) return c;
  throw InvalidArgument("no coverage cell for that estimator and horizon");
}

namespace {

struct RepOutcome {
  // [estimator][h-1]
  std::vector<std::vector<signed char>> hit;  // 1 hit, 0 miss, -1 failed
  std::vector<std::vector<double>> width;
  std::string message;
};

}  // namespace

CoverageReport run_coverage(const DgpSpec& spec, const CoverageConfig& config) {
  spec.validate();
  config.validate();
  const Vector truth = true_irf(spec, config.h_max);
  const std::size_t E = config.estimators.size();
  const auto H = static_cast<std::size_t>(config.h_max);

  std::vector<std::string> names;
  for (Index i = 0; i < spec.P; ++i) names.push_back("x" + std::to_string(i + 1));
  LpSpec lp;
  lp.response = "x1";
  lp.shock = "x1";
  lp.slow_controls.assign(names.begin() + 1, names.end());
  lp.lags = config.lags;
  lp.h_max = config.h_max;
  lp.alpha = config.alpha;
  lp.fix_impact = true;

  std::vector<RepOutcome> outcomes(static_cast<std::size_t>(config.reps));
  parallel_for(outcomes.size(), config.threads, [&](std::size_t r) {
    RepOutcome& out = outcomes[r];
    out.hit.assign(E, std::vector<signed char>(H, -1));
    out.width.assign(E, std::vector<double>(H, 0.0));
    try {
      DgpSpec rep = spec;
      rep.seed = derive_seed(spec.seed, r);
      const Dataset data = Dataset::from_matrix(generate(rep), names);
      TuningConfig tuning = config.tuning;
      tuning.seed = derive_seed(rep.seed, 0x7475'6e65ULL);
      std::shared_ptr<const NodewiseFit> nodewise;
      for (std::size_t e = 0; e < E; ++e) {
        LpOptions opt;
        opt.hac = config.hac;
        opt.penalize_interest = config.estimators[e] == Estimator::standard;
        opt.nodewise = nodewise;
        const ImpulseResponse irf = estimate_lp(data, lp, tuning, opt);
        nodewise = irf.nodewise;
        for (std::size_t h = 1; h <= H; ++h) {
          if (irf.failed[h]) {
            if (out.message.empty()) out.message = irf.errors[h];
            continue;
          }
          const auto& est = irf.horizons[h];
          const double th = truth[static_cast<Index>(h)];
          out.hit[e][h - 1] = est.ci_low[0] <= th && th <= est.ci_high[0] ? 1 : 0;
          out.width[e][h - 1] = est.ci_high[0] - est.ci_low[0];
        }
      }
    } catch (const Error& e) {
      out.message = e.what();
    }
  });

  CoverageReport report;
  for (std::size_t e = 0; e < E; ++e)
    for (std::size_t h = 0; h < H; ++h) {
      CoverageCell c;
      c.dgp = spec.label();
      c.P = spec.P;
      c.T = spec.T;
      c.estimator = config.estimators[e];
      c.horizon = static_cast<int>(h + 1);
      int hits = 0;
      double widths = 0.0;
      for (const auto& o : outcomes) {
        if (o.hit[e][h] < 0) {
          ++c.failures;
          continue;
        }
        ++c.replications;
        hits += o.hit[e][h];
        widths += o.width[e][h];
      }
      const double n = c.replications;
      c.coverage = c.replications ? hits / n : std::numeric_limits<double>::quiet_NaN();
      c.mean_width = c.replications ? widths / n : std::numeric_limits<double>::quiet_NaN();
      report.cells.push_back(c);
    }
  for (const auto& o : outcomes)
    if (!o.message.empty() && report.failure_messages.size() < 5) report.failure_messages.push_back(o.message);
  return report;
}

}  // namespace hdlp
