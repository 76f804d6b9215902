#pragma once

#include "hdlp/data.hpp"
#include "hdlp/favar.hpp"
#include "hdlp/local_projections.hpp"
#include "hdlp/simulation.hpp"

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace hdlp {

/// Resolved configurations. `resolved` echoes the input with every default
/// filled in; feeding it back yields the same run. Thread counts are not
/// part of it since they never change results.

struct LpRun {
  std::vector<LpSpec> specs;
  TuningConfig tuning;
  LpOptions options;
  std::optional<FavarConfig> favar;
  std::vector<std::string> favar_series;
  nlohmann::json resolved;
};

struct FavarRun {
  FavarConfig favar;
  std::vector<std::string> series;
  nlohmann::json resolved;
};

struct SimulateRun {
  std::vector<DgpSpec> cells;
  CoverageConfig coverage;
  nlohmann::json resolved;
};

/// Parsers reject unknown keys and wrong types with ConfigError. A top-level
/// "seed" is mandatory.
LpRun parse_lp_run(const nlohmann::json& config, const Dataset& data, unsigned threads = 1);
FavarRun parse_favar_run(const nlohmann::json& config, const Dataset& data, unsigned threads = 1);
SimulateRun parse_simulate_run(const nlohmann::json& config, unsigned threads = 1);

TuningConfig parse_tuning(const nlohmann::json& section, std::uint64_t seed, nlohmann::json* resolved = nullptr);

struct RunOutput {
  nlohmann::json report;
  std::string csv;
  std::string svg;
  nlohmann::json resolved;
  Warnings warnings;
};

RunOutput run_lp(const Dataset& data, const LpRun& run);
RunOutput run_favar(const Dataset& data, const FavarRun& run);
RunOutput run_simulate(const SimulateRun& run);

/// Seed of simulation cell (dgp, P, T) under a run seed.
std::uint64_t cell_seed(std::uint64_t seed, const DgpSpec& spec);

}  // namespace hdlp
