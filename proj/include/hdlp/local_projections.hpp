#pragma once

#include "hdlp/data.hpp"
#include "hdlp/inference.hpp"
#include "hdlp/lasso.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hdlp {

struct LpOptions {
  HacNormalization hac = HacNormalization::full_sample;
  /// Fixed HAC bandwidth; 0 selects it per horizon.
  Index bandwidth = 0;
  /// Standard desparsified lasso: the shock columns are penalized as well.
  bool penalize_interest = false;
  unsigned threads = 1;
  /// Reuse this nodewise fit instead of fitting one on the h = 0 design.
  std::shared_ptr<const NodewiseFit> nodewise;
  std::string estimator = "hdlp";
};

/// Impulse responses over h = 0..h_max. horizons[h] is always present; when
/// that horizon failed, failed[h] is set and errors[h] says why.
struct ImpulseResponse {
  LpSpec spec;
  std::string estimator;
  /// One entry per reported coefficient ("linear" or the state names).
  std::vector<std::string> states;
  std::vector<std::string> dropped_states;
  std::vector<HorizonEstimate> horizons;
  std::vector<bool> failed;
  std::vector<std::string> errors;
  std::shared_ptr<const NodewiseFit> nodewise;
  Warnings warnings;

  bool complete() const;
};

/// The horizon-h design of a spec, with state interactions applied.
PenalizedProblem lp_problem(const Dataset& transformed, const LpSpec& spec, int h);

ImpulseResponse estimate_lp(const Dataset& data, const LpSpec& spec, const TuningConfig& tuning,
                            const LpOptions& options = {});

struct LpGridResult {
  std::vector<ImpulseResponse> results;
  /// (index into the spec list, message) for every spec that failed.
  std::vector<std::pair<std::size_t, std::string>> errors;
};

/// Runs several specs on one dataset. Specs whose h = 0 designs coincide
/// share a nodewise fit.
LpGridResult estimate_lp_grid(const Dataset& data, const std::vector<LpSpec>& specs, const TuningConfig& tuning,
                              const LpOptions& options = {});

}  // namespace hdlp
