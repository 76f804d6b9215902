#include "hdlp/local_projections.hpp"
#include "hdlp/parallel.hpp"

namespace hdlp {

bool ImpulseResponse::complete() const {
  for (bool f : failed)
    if (f) return false;
  return true;
}

PenalizedProblem lp_problem(const Dataset& transformed, const LpSpec& spec, int h) {
  PenalizedProblem p = build_lp_design(transformed, spec, h);
  if (spec.state_dummies.empty()) return p;
  const auto dummies = state_dummies_for(transformed, spec, p.rows);
  std::vector<std::string> labels = spec.state_labels;
  if (labels.empty() && spec.state_dummies.size() == 1 && !spec.cross_states)
    labels = {spec.state_dummies[0], "not_" + spec.state_dummies[0]};
  return interact_states(p, dummies, labels);
}

namespace {

HorizonEstimate fixed_impact(const PenalizedProblem& p, double alpha) {
  HorizonEstimate est;
  const auto S = static_cast<Index>(p.of_interest.size());
  for (auto j : p.of_interest) est.labels.push_back(p.column_labels[static_cast<std::size_t>(j)]);
  est.phi_hat = Vector::Ones(S);
  est.omega_hat = Matrix::Zero(S, S);
  est.tau_sq = Vector::Ones(S);
  est.se = Vector::Zero(S);
  est.ci_low = Vector::Ones(S);
  est.ci_high = Vector::Ones(S);
  est.degenerate.assign(static_cast<std::size_t>(S), false);
  est.bandwidth = 0;
  est.T = p.T();
  est.N = p.N();
  est.alpha = alpha;
  return est;
}

}  // namespace

ImpulseResponse estimate_lp(const Dataset& data, const LpSpec& spec, const TuningConfig& tuning,
                            const LpOptions& options) {
  tuning.validate();
  const Dataset transformed = apply_transforms(data);
  spec.validate(transformed);

  ImpulseResponse irf;
  irf.spec = spec;
  irf.estimator = options.estimator;

  const PenalizedProblem base = lp_problem(transformed, spec, 0);
  irf.states = base.states.empty() ? std::vector<std::string>{"linear"} : base.states;
  irf.dropped_states = base.dropped_states;
  irf.warnings = base.warnings;

  MultiplierBank bank(tuning.seed, tuning.draws);
  if (options.nodewise) {
    if (options.nodewise->nodes != base.of_interest || options.nodewise->Gamma_hat.cols() != base.N())
      throw InvalidArgument("supplied nodewise fit does not match the h = 0 design");
    irf.nodewise = options.nodewise;
  } else {
    irf.nodewise = std::make_shared<const NodewiseFit>(
        fit_nodewise(base.X, base.of_interest, tuning, &bank, options.threads));
  }
  for (const auto& w : irf.nodewise->warnings) irf.warnings.push_back("nodewise: " + w);

  InferenceOptions inf;
  inf.alpha = spec.alpha;
  inf.hac = options.hac;
  inf.bandwidth = options.bandwidth;
  inf.penalize_interest = options.penalize_interest;

  const auto H = static_cast<std::size_t>(spec.h_max) + 1;
  irf.horizons.resize(H);
  irf.failed.assign(H, false);
  irf.errors.assign(H, "");
  const bool self_impact = spec.fix_impact && spec.response == spec.shock;

  parallel_for(H, options.threads, [&](std::size_t hi) {
    const int h = static_cast<int>(hi);
    try {
      const PenalizedProblem p = h == 0 ? base : lp_problem(transformed, spec, h);
      if (p.column_labels != base.column_labels)
        throw NumericError("design columns at horizon " + std::to_string(h) + " differ from h = 0");
      HorizonEstimate est = h == 0 && self_impact ? fixed_impact(p, spec.alpha)
                                                  : infer(p, tuning, irf.nodewise.get(), inf, &bank);
      est.h = h;
      irf.horizons[hi] = std::move(est);
    } catch (const Error& e) {
      irf.failed[hi] = true;
      irf.errors[hi] = e.what();
      irf.horizons[hi].h = h;
    }
  });
  return irf;
}

LpGridResult estimate_lp_grid(const Dataset& data, const std::vector<LpSpec>& specs, const TuningConfig& tuning,
                              const LpOptions& options) {
  LpGridResult out;
  if (specs.empty()) return out;
  const Dataset transformed = apply_transforms(data);
  struct Cached {
    Matrix X;
    IndexList nodes;
    std::shared_ptr<const NodewiseFit> fit;
  };
  std::vector<Cached> cache;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    try {
      specs[i].validate(transformed);
      const PenalizedProblem base = lp_problem(transformed, specs[i], 0);
      LpOptions local = options;
      for (const auto& c : cache)
        if (c.nodes == base.of_interest && c.X.rows() == base.X.rows() && c.X.cols() == base.X.cols() &&
            c.X == base.X) {
          local.nodewise = c.fit;
          break;
        }
      ImpulseResponse irf = estimate_lp(transformed, specs[i], tuning, local);
      if (!local.nodewise) cache.push_back({base.X, base.of_interest, irf.nodewise});
      out.results.push_back(std::move(irf));
    } catch (const Error& e) {
      out.errors.emplace_back(i, e.what());
    }
  }
  return out;
}

}  // namespace hdlp
