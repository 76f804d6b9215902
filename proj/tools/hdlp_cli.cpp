// Batch front end: hdlp {simulate|lp|favar} --config run.yaml [--seed N]
// [--threads N] [--out DIR]. Talks to the library only through hdlp.h.

#include "hdlp/hdlp.h"

#include <CLI11.hpp>
#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInternal = 1, kConfig = 2, kNumeric = 3, kIo = 4 };

struct Failure {
  int exit_code;
  std::string kind;
  std::string message;
  std::string series;
};

[[noreturn]] void fail(int code, const std::string& kind, const std::string& msg, const std::string& series = {}) {
  throw Failure{code, kind, msg, series};
}

void check(hdlp_status s) {
  if (s == HDLP_OK) return;
  int code = kInternal;
  switch (s) {
    case HDLP_ERR_INVALID_ARGUMENT:
    case HDLP_ERR_CONFIG: code = kConfig; break;
    case HDLP_ERR_NUMERIC: code = kNumeric; break;
    case HDLP_ERR_IO: code = kIo; break;
    default: break;
  }
  fail(code, hdlp_status_name(s), hdlp_last_error(), hdlp_last_error_series());
}

json scalar(const YAML::Node& n) {
  const std::string& s = n.Scalar();
  if (n.Tag() == "!") return s;  // quoted
  if (s == "true" || s == "True") return true;
  if (s == "false" || s == "False") return false;
  if (s == "null" || s == "~" || s.empty()) return nullptr;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (s[0] != '-') {
    std::uint64_t u = 0;
    if (auto [p, ec] = std::from_chars(b, e, u); ec == std::errc() && p == e) return u;
  }
  std::int64_t i = 0;
  if (auto [p, ec] = std::from_chars(b, e, i); ec == std::errc() && p == e) return i;
  double d = 0.0;
  if (auto [p, ec] = std::from_chars(b, e, d); ec == std::errc() && p == e) return d;
  return s;
}

json to_json(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Map: {
      json j = json::object();
      for (const auto& kv : n) j[kv.first.as<std::string>()] = to_json(kv.second);
      return j;
    }
    case YAML::NodeType::Sequence: {
      json j = json::array();
      for (const auto& v : n) j.push_back(to_json(v));
      return j;
    }
    case YAML::NodeType::Scalar: return scalar(n);
    default: return nullptr;
  }
}

json load_config(const std::string& path) {
  if (!fs::exists(path)) fail(kIo, "io", "configuration file '" + path + "' does not exist");
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    fail(kIo, "io", "cannot read configuration file '" + path + "'");
  } catch (const YAML::Exception& e) {
    fail(kConfig, "config", "cannot parse '" + path + "': " + e.what());
  }
  json j = to_json(root);
  if (j.is_null()) j = json::object();
  if (!j.is_object()) fail(kConfig, "config", "'" + path + "' must contain a mapping at top level");
  // A manifest from an earlier run carries its configuration under "config".
  if (j.contains("manifest_version")) {
    if (!j.contains("config") || !j["config"].is_object())
      fail(kConfig, "config", "manifest '" + path + "' has no config section");
    return j["config"];
  }
  return j;
}

std::string take_string(json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) return {};
  if (!j[key].is_string()) fail(kConfig, "config", "'" + where + key + "' must be a string");
  std::string v = j[key];
  j.erase(key);
  return v;
}

std::string resolve(const std::string& p, const fs::path& base) {
  if (p.empty()) return p;
  fs::path path(p);
  if (path.is_relative()) path = base / path;
  return fs::absolute(path).lexically_normal().string();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) fail(kIo, "io", "cannot write '" + path.string() + "'");
}

struct ResultGuard {
  hdlp_result* r = nullptr;
  ~ResultGuard() { hdlp_result_free(r); }
};

struct DatasetGuard {
  hdlp_dataset* d = nullptr;
  ~DatasetGuard() { hdlp_dataset_free(d); }
};

int run(const std::string& sub, const std::string& config_path, std::optional<std::uint64_t> seed,
        std::optional<unsigned> threads, std::string out_dir) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  json cfg = load_config(config_path);
  const fs::path base = fs::absolute(config_path).parent_path();

  const std::string declared = take_string(cfg, "subcommand", "");
  if (!declared.empty() && declared != sub)
    fail(kConfig, "config", "configuration is for '" + declared + "' but the subcommand is '" + sub + "'");
  const std::string cfg_out = take_string(cfg, "out", "");
  if (out_dir.empty() && !cfg_out.empty()) out_dir = resolve(cfg_out, base);
  if (out_dir.empty())
    if (const char* env = std::getenv("HDLP_OUT_DIR"); env && *env) out_dir = env;
  if (out_dir.empty()) out_dir = "hdlp_out";

  if (seed) cfg["seed"] = *seed;
  if (!cfg.contains("seed")) fail(kConfig, "config", "a seed is required (config key 'seed' or --seed)");
  unsigned nthreads = 1;
  if (cfg.contains("threads")) {
    if (!cfg["threads"].is_number_unsigned() || cfg["threads"].get<unsigned>() == 0)
      fail(kConfig, "config", "'threads' must be a positive integer");
    nthreads = cfg["threads"];
  }
  if (threads) nthreads = std::max(1u, *threads);
  cfg["threads"] = nthreads;

  std::string csv_path, meta_path;
  if (cfg.contains("data")) {
    json& data = cfg["data"];
    if (!data.is_object()) fail(kConfig, "config", "'data' must be a mapping with csv and metadata");
    csv_path = resolve(take_string(data, "csv", "data."), base);
    meta_path = resolve(take_string(data, "metadata", "data."), base);
    if (!data.empty()) fail(kConfig, "config", "unknown key 'data." + data.begin().key() + "'");
    cfg.erase("data");
  }
  if (sub != "simulate" && csv_path.empty()) fail(kConfig, "config", "'data.csv' is required for " + sub);
  if (sub == "simulate" && !csv_path.empty()) fail(kConfig, "config", "simulate takes no input data");

  const std::string text = cfg.dump();
  ResultGuard result;
  DatasetGuard data;
  if (sub == "simulate") {
    check(hdlp_simulate_run(text.c_str(), &result.r));
  } else {
    check(hdlp_dataset_load(csv_path.c_str(), meta_path.empty() ? nullptr : meta_path.c_str(), &data.d));
    if (sub == "lp")
      check(hdlp_lp_run(data.d, text.c_str(), &result.r));
    else
      check(hdlp_favar_run(data.d, text.c_str(), &result.r));
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(kIo, "io", "cannot create output directory '" + out_dir + "': " + ec.message());
  const std::string stem = sub == "simulate" ? "coverage" : sub == "lp" ? "irf" : "favar";
  const fs::path dir(out_dir);
  write_file(dir / (stem + ".csv"), hdlp_result_csv(result.r));
  write_file(dir / (stem + ".svg"), hdlp_result_svg(result.r));
  write_file(dir / "report.json", hdlp_result_json(result.r));

  json resolved = json::parse(hdlp_result_config(result.r));
  resolved["subcommand"] = sub;
  if (!csv_path.empty()) {
    resolved["data"]["csv"] = csv_path;
    if (!meta_path.empty()) resolved["data"]["metadata"] = meta_path;
  }
  json manifest;
  manifest["manifest_version"] = 1;
  manifest["subcommand"] = sub;
  manifest["versions"] = {{"hdlp", hdlp_version()}};
  manifest["seed"] = resolved["seed"];
  manifest["config"] = resolved;
  manifest["outputs"] = {stem + ".csv", stem + ".svg", "report.json"};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");

  const double seconds = std::chrono::duration<double>(clock::now() - t0).count();
  json info = {{"threads", nthreads}, {"seconds", seconds}, {"config_file", fs::absolute(config_path).string()},
               {"warnings", json::array()}};
  for (size_t i = 0; i < hdlp_result_warning_count(result.r); ++i) {
    info["warnings"].push_back(hdlp_result_warning(result.r, i));
    std::cerr << "warning: " << hdlp_result_warning(result.r, i) << "\n";
  }
  write_file(dir / "run_info.json", info.dump(2) + "\n");
  std::cout << "wrote " << (dir / (stem + ".csv")).string() << " in " << seconds << " s\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-dimensional local projection inference"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  for (const char* name : {"simulate", "lp", "favar"}) {
    const std::string desc = std::string(name) == "simulate" ? "Monte Carlo coverage study"
                             : std::string(name) == "lp"     ? "local projection impulse responses"
                                                             : "FAVAR impulse responses";
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--config,-c", config_path, "YAML configuration (or a manifest.json)")->required();
    sub->add_option("--seed", seed, "override the configured seed");
    sub->add_option("--threads", threads, "worker threads");
    sub->add_option("--out", out_dir, "output directory (default $HDLP_OUT_DIR)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }
  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    return run(sub, config_path, seed, threads, out_dir);
  } catch (const Failure& f) {
    json err = {{"error", {{"kind", f.kind}, {"exit_code", f.exit_code}, {"message", f.message}}}};
    if (!f.series.empty()) err["error"]["series"] = f.series;
    std::cerr << err.dump() << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    json err = {{"error", {{"kind", "internal"}, {"exit_code", int(kInternal)}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return kInternal;
  }
}
