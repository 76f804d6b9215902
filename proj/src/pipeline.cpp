#include "hdlp/pipeline.hpp"
#include "hdlp/io.hpp"
#include "hdlp/random.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hdlp {

using nlohmann::json;

namespace {

// Reads one JSON object, recording defaults into `out` and rejecting keys
// nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : path_(std::move(path)) {
    if (j.is_null()) {
      j_ = json::object();
    } else if (!j.is_object()) {
      throw ConfigError(where() + " must be a mapping");
    } else {
      j_ = j;
    }
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  template <class T>
  T get(const std::string& key, const T& fallback) {
    used_.insert(key);
    T v = has(key) ? convert<T>(key) : fallback;
    out[key] = v;
    return v;
  }

  template <class T>
  T require(const std::string& key) {
    used_.insert(key);
    if (!has(key)) throw ConfigError(where(key) + " is required");
    T v = convert<T>(key);
    out[key] = v;
    return v;
  }

  // A scalar or a list of scalars, always returned as a list.
  template <class T>
  std::vector<T> list(const std::string& key, const std::vector<T>& fallback) {
    used_.insert(key);
    std::vector<T> v = fallback;
    if (has(key)) {
      const json& raw = j_.at(key);
      try {
        v = raw.is_array() ? raw.get<std::vector<T>>() : std::vector<T>{raw.get<T>()};
      } catch (const json::exception&) {
        throw ConfigError(where(key) + " has the wrong type");
      }
    }
    out[key] = v;
    return v;
  }

  const json& raw(const std::string& key) {
    used_.insert(key);
    static const json null;
    return has(key) ? j_.at(key) : null;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!used_.count(key)) throw ConfigError("unknown key " + where(key));
  }

  std::string where(const std::string& key = {}) const {
    if (key.empty()) return path_.empty() ? "configuration" : "'" + path_ + "'";
    return "'" + (path_.empty() ? key : path_ + "." + key) + "'";
  }

  json out = json::object();

 private:
  template <class T>
  T convert(const std::string& key) const {
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(where(key) + " must be true or false");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError(where(key) + " must be an integer");
        if constexpr (std::is_unsigned_v<T>)
          if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)
            throw ConfigError(where(key) + " must be non-negative");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError(where(key) + " must be a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(where(key) + " must be a string");
      }
      return v.get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where(key) + " has the wrong type");
    }
  }

  json j_;
  std::string path_;
  std::set<std::string> used_;
};

std::uint64_t top_seed(Section& top) { return top.require<std::uint64_t>("seed"); }

HacNormalization parse_hac(const std::string& s, const std::string& where) {
  if (s == "full_sample") return HacNormalization::full_sample;
  if (s == "lag_adjusted") return HacNormalization::lag_adjusted;
  throw ConfigError(where + ": hac must be 'full_sample' or 'lag_adjusted', got '" + s + "'");
}

std::vector<std::string> by_speed(const Dataset& data, SpeedClass speed) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < data.names.size(); ++j)
    if (data.speed[j] == speed) out.push_back(data.names[j]);
  return out;
}

LpSpec parse_spec(const json& j, const std::string& path, const Dataset& data, json& out) {
  Section s(j, path);
  LpSpec spec;
  spec.response = s.require<std::string>("response");
  spec.shock = s.require<std::string>("shock");
  auto drop = [&](std::vector<std::string> v) {
    std::erase_if(v, [&](const std::string& n) { return n == spec.response || n == spec.shock; });
    return v;
  };
  // Controls default to the metadata speed classes.
  spec.slow_controls = s.list<std::string>("slow", drop(by_speed(data, SpeedClass::slow)));
  spec.fast_controls = s.list<std::string>("fast", drop(by_speed(data, SpeedClass::fast)));
  spec.lags = s.get<int>("lags", 4);
  spec.h_max = s.get<int>("h_max", 12);
  spec.state_dummies = s.list<std::string>("states", {});
  spec.cross_states = s.get<bool>("cross_states", false);
  spec.state_labels = s.list<std::string>("state_labels", {});
  spec.cumulate = s.get<bool>("cumulate", false);
  spec.alpha = s.get<double>("alpha", 0.05);
  spec.fix_impact = s.get<bool>("fix_impact", false);
  s.finish();
  spec.validate(data);
  out = s.out;
  return spec;
}

FavarConfig parse_favar_section(const json& j, const std::string& path, const Dataset& data, std::uint64_t seed,
                                unsigned threads, std::vector<std::string>& series, json& out) {
  Section s(j, path);
  FavarConfig c;
  c.n_factors = s.get<int>("n_factors", c.n_factors);
  c.var_lags = s.get<int>("var_lags", c.var_lags);
  c.h_max = s.get<int>("h_max", c.h_max);
  c.draws = s.get<int>("draws", c.draws);
  c.alpha = s.get<double>("alpha", c.alpha);
  c.policy = s.require<std::string>("policy");
  auto slow = by_speed(data, SpeedClass::slow);
  std::erase(slow, c.policy);
  c.slow = s.list<std::string>("slow", slow);
  series = s.list<std::string>("series", {});
  s.finish();
  c.seed = derive_seed(seed, 2);
  c.threads = threads;
  if (!data.has(c.policy)) throw ConfigError(s.where("policy") + ": series '" + c.policy + "' is not in the dataset");
  for (const auto& n : c.slow)
    if (!data.has(n)) throw ConfigError(s.where("slow") + ": series '" + n + "' is not in the dataset");
  for (const auto& n : series)
    if (!data.has(n)) throw ConfigError(s.where("series") + ": series '" + n + "' is not in the dataset");
  c.validate();
  out = s.out;
  return c;
}

Estimator parse_estimator(const std::string& s) {
  if (s == "proposed") return Estimator::proposed;
  if (s == "standard") return Estimator::standard;
  throw ConfigError("estimator must be 'proposed' or 'standard', got '" + s + "'");
}

// Keeps the first occurrence of each warning.
void dedupe(Warnings& w) {
  Warnings kept;
  std::set<std::string> seen;
  for (auto& m : w)
    if (seen.insert(m).second) kept.push_back(std::move(m));
  w = std::move(kept);
}

}  // namespace

TuningConfig parse_tuning(const json& section, std::uint64_t seed, json* resolved) {
  Section s(section, "tuning");
  TuningConfig t;
  const auto method = s.get<std::string>("method", "plugin");
  if (method == "plugin")
    t.method = LambdaMethod::plugin;
  else if (method == "rate")
    t.method = LambdaMethod::rate;
  else if (method == "fixed")
    t.method = LambdaMethod::fixed;
  else
    throw ConfigError("'tuning.method' must be plugin, rate or fixed, got '" + method + "'");
  t.quantile_level = s.get<double>("quantile_level", t.quantile_level);
  t.draws = s.get<int>("draws", t.draws);
  t.block_length = s.get<Index>("block_length", t.block_length);
  t.iterations = s.get<int>("iterations", t.iterations);
  t.scale = s.get<double>("scale", t.scale);
  t.rate_constant = s.get<double>("rate_constant", t.rate_constant);
  t.fixed_lambda = s.get<double>("fixed_lambda", t.fixed_lambda);
  t.solver.tolerance = s.get<double>("tolerance", t.solver.tolerance);
  t.solver.max_sweeps = s.get<int>("max_sweeps", t.solver.max_sweeps);
  t.solver.polish = s.get<bool>("polish", t.solver.polish);
  s.finish();
  t.seed = derive_seed(seed, 1);
  try {
    t.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("tuning: ") + e.what());
  }
  if (resolved) *resolved = s.out;
  return t;
}

LpRun parse_lp_run(const json& config, const Dataset& data, unsigned threads) {
  Section top(config, "");
  LpRun run;
  const auto seed = top_seed(top);
  top.get<unsigned>("threads", threads);  // accepted, not echoed
  top.out.erase("threads");
  json tuning_out;
  run.tuning = parse_tuning(top.raw("tuning"), seed, &tuning_out);
  top.out["tuning"] = tuning_out;

  Section lp(top.raw("lp"), "lp");
  const auto estimator = lp.get<std::string>("estimator", "hdlp");
  if (estimator != "hdlp" && estimator != "standard")
    throw ConfigError("'lp.estimator' must be 'hdlp' or 'standard', got '" + estimator + "'");
  run.options.estimator = estimator;
  run.options.penalize_interest = estimator == "standard";
  run.options.hac = parse_hac(lp.get<std::string>("hac", "full_sample"), "lp");
  run.options.bandwidth = lp.get<Index>("bandwidth", 0);
  if (run.options.bandwidth < 0) throw ConfigError("'lp.bandwidth' must be non-negative");
  run.options.threads = threads;
  const json& specs = lp.raw("specs");
  json specs_out = json::array();
  if (specs.is_null()) throw ConfigError("'lp.specs' is required (a list of response/shock specifications)");
  if (!specs.is_array() || specs.empty()) throw ConfigError("'lp.specs' must be a non-empty list");
  for (std::size_t i = 0; i < specs.size(); ++i) {
    json out;
    run.specs.push_back(parse_spec(specs[i], "lp.specs[" + std::to_string(i) + "]", data, out));
    specs_out.push_back(out);
  }
  lp.out["specs"] = specs_out;
  lp.finish();
  top.out["lp"] = lp.out;

  if (!top.raw("favar").is_null()) {
    json out;
    run.favar = parse_favar_section(top.raw("favar"), "favar", data, seed, threads, run.favar_series, out);
    top.out["favar"] = out;
  }
  top.finish();
  run.resolved = top.out;
  return run;
}

FavarRun parse_favar_run(const json& config, const Dataset& data, unsigned threads) {
  Section top(config, "");
  FavarRun run;
  const auto seed = top_seed(top);
  top.get<unsigned>("threads", threads);
  top.out.erase("threads");
  json out;
  run.favar = parse_favar_section(top.raw("favar"), "favar", data, seed, threads, run.series, out);
  top.out["favar"] = out;
  top.finish();
  run.resolved = top.out;
  return run;
}

std::uint64_t cell_seed(std::uint64_t seed, const DgpSpec& spec) {
  std::uint64_t s = derive_seed(seed, spec.sign_switch ? 2 : 1);
  s = derive_seed(s, static_cast<std::uint64_t>(spec.P));
  return derive_seed(s, static_cast<std::uint64_t>(spec.T));
}

SimulateRun parse_simulate_run(const json& config, unsigned threads) {
  Section top(config, "");
  SimulateRun run;
  const auto seed = top_seed(top);
  top.get<unsigned>("threads", threads);
  top.out.erase("threads");
  json tuning_out;
  run.coverage.tuning = parse_tuning(top.raw("tuning"), seed, &tuning_out);
  top.out["tuning"] = tuning_out;

  Section s(top.raw("simulate"), "simulate");
  const auto dgps = s.list<std::string>("dgp", {"dgp1"});
  const auto Ps = s.list<Index>("P", {20});
  const auto Ts = s.list<Index>("T", {200});
  DgpSpec base;
  const auto rho = s.list<double>("rho", {base.rho.begin(), base.rho.end()});
  if (rho.size() != 4) throw ConfigError("'simulate.rho' needs exactly four values");
  std::copy(rho.begin(), rho.end(), base.rho.begin());
  base.burn_in = s.get<Index>("burn_in", base.burn_in);
  auto& c = run.coverage;
  c.reps = s.get<int>("reps", c.reps);
  c.h_max = s.get<int>("h_max", c.h_max);
  c.lags = s.get<int>("lags", c.lags);
  c.alpha = s.get<double>("alpha", c.alpha);
  c.hac = parse_hac(s.get<std::string>("hac", "full_sample"), "simulate");
  const auto estimators = s.list<std::string>("estimators", {"proposed", "standard"});
  c.estimators.clear();
  for (const auto& e : estimators) c.estimators.push_back(parse_estimator(e));
  c.threads = threads;
  s.finish();
  top.out["simulate"] = s.out;
  top.finish();
  c.validate();

  for (const auto& d : dgps) {
    if (d != "dgp1" && d != "dgp2") throw ConfigError("'simulate.dgp' entries must be dgp1 or dgp2, got '" + d + "'");
    for (auto P : Ps)
      for (auto T : Ts) {
        DgpSpec spec = base;
        spec.sign_switch = d == "dgp2";
        spec.P = P;
        spec.T = T;
        spec.seed = cell_seed(seed, spec);
        spec.validate();
        run.cells.push_back(spec);
      }
  }
  run.resolved = top.out;
  return run;
}

RunOutput run_lp(const Dataset& data, const LpRun& run) {
  RunOutput out;
  out.resolved = run.resolved;
  const LpGridResult grid = estimate_lp_grid(data, run.specs, run.tuning, run.options);
  if (grid.results.empty()) {
    std::string msg = "every LP specification failed";
    if (!grid.errors.empty()) msg += ": " + grid.errors.front().second;
    throw NumericError(msg);
  }
  json errors = json::array();
  for (const auto& [i, msg] : grid.errors) {
    errors.push_back({{"spec", i}, {"error", msg}});
    out.warnings.push_back("spec " + std::to_string(i) + " failed: " + msg);
  }
  json irfs = json::array();
  for (const auto& irf : grid.results) {
    irfs.push_back(to_json(irf));
    for (const auto& w : irf.warnings) out.warnings.push_back(irf.spec.response + ": " + w);
    for (std::size_t h = 0; h < irf.failed.size(); ++h)
      if (irf.failed[h])
        out.warnings.push_back(irf.spec.response + " h=" + std::to_string(h) + " failed: " + irf.errors[h]);
  }
  out.report["irfs"] = irfs;
  out.report["errors"] = errors;

  std::ostringstream csv;
  write_irf_csv(csv, grid.results);
  std::optional<FavarResult> favar;
  if (run.favar) {
    favar = estimate_favar(data, *run.favar);
    out.report["favar"] = to_json(*favar, run.favar_series);
    for (const auto& w : favar->warnings) out.warnings.push_back("favar: " + w);
    std::ostringstream fcsv;
    write_favar_csv(fcsv, *favar, run.favar_series);
    const std::string rows = fcsv.str();
    csv << rows.substr(rows.find('\n') + 1);  // drop the repeated header
  }
  out.csv = csv.str();
  out.svg = irf_svg(grid.results, favar ? &*favar : nullptr, run.favar_series);
  dedupe(out.warnings);
  out.report["warnings"] = out.warnings;
  return out;
}

RunOutput run_favar(const Dataset& data, const FavarRun& run) {
  RunOutput out;
  out.resolved = run.resolved;
  const FavarResult favar = estimate_favar(data, run.favar);
  out.report = to_json(favar, run.series);
  std::ostringstream csv;
  write_favar_csv(csv, favar, run.series);
  out.csv = csv.str();
  out.svg = favar_svg(favar, run.series);
  for (const auto& w : favar.warnings) out.warnings.push_back(w);
  return out;
}

RunOutput run_simulate(const SimulateRun& run) {
  RunOutput out;
  out.resolved = run.resolved;
  std::vector<CoverageReport> reports;
  json js = json::array();
  for (const auto& cell : run.cells) {
    reports.push_back(run_coverage(cell, run.coverage));
    json j = to_json(reports.back());
    j["dgp"] = cell.label();
    j["P"] = cell.P;
    j["T"] = cell.T;
    j["seed"] = cell.seed;
    js.push_back(j);
    for (const auto& m : reports.back().failure_messages)
      out.warnings.push_back(cell.label() + " P=" + std::to_string(cell.P) + " T=" + std::to_string(cell.T) + ": " + m);
  }
  out.report["reports"] = js;
  dedupe(out.warnings);
  out.report["warnings"] = out.warnings;
  std::ostringstream csv;
  write_coverage_csv(csv, reports);
  out.csv = csv.str();
  out.svg = coverage_svg(reports, 1.0 - run.coverage.alpha);
  return out;
}

}  // namespace hdlp
