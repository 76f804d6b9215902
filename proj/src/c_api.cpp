#include "hdlp/hdlp.h"

#include "hdlp/inference.hpp"
#include "hdlp/io.hpp"
#include "hdlp/lasso.hpp"
#include "hdlp/pipeline.hpp"
#include "hdlp/simulation.hpp"

#include <cmath>
#include <new>
#include <string>

struct hdlp_dataset {
  hdlp::Dataset data;
};

struct hdlp_result {
  std::string json;
  std::string csv;
  std::string svg;
  std::string config;
  std::vector<std::string> warnings;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_error_series;

hdlp_status fail(hdlp_status s, const std::string& msg, const std::string& series = {}) {
  g_error = msg;
  g_error_series = series;
  return s;
}

hdlp_status from_kind(hdlp::ErrorKind k) {
  switch (k) {
    case hdlp::ErrorKind::invalid_argument: return HDLP_ERR_INVALID_ARGUMENT;
    case hdlp::ErrorKind::config: return HDLP_ERR_CONFIG;
    case hdlp::ErrorKind::numeric: return HDLP_ERR_NUMERIC;
    case hdlp::ErrorKind::io: return HDLP_ERR_IO;
  }
  return HDLP_ERR_INTERNAL;
}

// Pulls the series id out of messages of the form "... series 'name' ...".
std::string quoted_series(const std::string& msg) {
  const auto p = msg.find("series '");
  if (p == std::string::npos) return {};
  const auto b = p + 8, e = msg.find('\'', b);
  return e == std::string::npos ? std::string{} : msg.substr(b, e - b);
}

template <class F>
hdlp_status guarded(F&& body) {
  g_error.clear();
  g_error_series.clear();
  try {
    body();
    return HDLP_OK;
  } catch (const hdlp::DomainError& e) {
    return fail(HDLP_ERR_NUMERIC, e.what(), e.series());
  } catch (const hdlp::Error& e) {
    return fail(from_kind(e.kind()), e.what(), quoted_series(e.what()));
  } catch (const nlohmann::json::exception& e) {
    return fail(HDLP_ERR_CONFIG, std::string("invalid JSON configuration: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(HDLP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HDLP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(HDLP_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw hdlp::InvalidArgument(what);
}

nlohmann::json parse_config(const char* text) {
  require(text != nullptr, "configuration is NULL");
  return nlohmann::json::parse(text);
}

unsigned thread_count(const nlohmann::json& cfg) {
  if (cfg.is_object() && cfg.contains("threads") && cfg["threads"].is_number_unsigned())
    return std::max(1u, cfg["threads"].get<unsigned>());
  return 1;
}

hdlp_result* wrap(hdlp::RunOutput out) {
  auto* r = new hdlp_result;
  r->json = out.report.dump(2) + "\n";
  r->csv = std::move(out.csv);
  r->svg = std::move(out.svg);
  r->config = out.resolved.dump(2) + "\n";
  r->warnings = std::move(out.warnings);
  return r;
}

}  // namespace

extern "C" {

const char* hdlp_version(void) { return "0.3.0"; }
const char* hdlp_last_error(void) { return g_error.c_str(); }
const char* hdlp_last_error_series(void) { return g_error_series.c_str(); }

const char* hdlp_status_name(hdlp_status status) {
  switch (status) {
    case HDLP_OK: return "ok";
    case HDLP_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case HDLP_ERR_CONFIG: return "config";
    case HDLP_ERR_NUMERIC: return "numeric";
    case HDLP_ERR_IO: return "io";
    case HDLP_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

hdlp_status hdlp_dataset_load(const char* csv_path, const char* metadata_path, hdlp_dataset** out) {
  return guarded([&] {
    require(csv_path && out, "csv_path and out must not be NULL");
    auto d = hdlp::load_dataset(csv_path, metadata_path ? metadata_path : "");
    *out = new hdlp_dataset{std::move(d)};
  });
}

hdlp_status hdlp_dataset_from_matrix(const double* values, size_t rows, size_t cols, const char* const* names,
                                     hdlp_dataset** out) {
  return guarded([&] {
    require(out && names && (values || rows * cols == 0), "NULL argument");
    hdlp::Matrix m(static_cast<hdlp::Index>(rows), static_cast<hdlp::Index>(cols));
    for (size_t t = 0; t < rows; ++t)
      for (size_t j = 0; j < cols; ++j)
        m(static_cast<hdlp::Index>(t), static_cast<hdlp::Index>(j)) = values[t * cols + j];
    std::vector<std::string> n;
    for (size_t j = 0; j < cols; ++j) {
      require(names[j] != nullptr, "series name is NULL");
      n.emplace_back(names[j]);
    }
    auto d = hdlp::Dataset::from_matrix(std::move(m), std::move(n));
    *out = new hdlp_dataset{std::move(d)};
  });
}

hdlp_status hdlp_dataset_set_series(hdlp_dataset* data, const char* name, int transform_code, const char* speed) {
  return guarded([&] {
    require(data && name, "NULL argument");
    if (transform_code < 1 || transform_code > 6)
      throw hdlp::ConfigError("series '" + std::string(name) + "' has invalid transform code " +
                              std::to_string(transform_code) + " (allowed 1-6)");
    const auto j = static_cast<size_t>(data->data.column(name));
    const auto sp = speed ? hdlp::parse_speed_class(speed) : data->data.speed[j];
    data->data.transform_codes[j] = transform_code;
    data->data.speed[j] = sp;
  });
}

size_t hdlp_dataset_rows(const hdlp_dataset* data) { return data ? static_cast<size_t>(data->data.rows()) : 0; }
size_t hdlp_dataset_cols(const hdlp_dataset* data) { return data ? static_cast<size_t>(data->data.cols()) : 0; }

const char* hdlp_dataset_name(const hdlp_dataset* data, size_t index) {
  if (!data || index >= data->data.names.size()) return nullptr;
  return data->data.names[index].c_str();
}

void hdlp_dataset_free(hdlp_dataset* data) { delete data; }

hdlp_status hdlp_lp_run(const hdlp_dataset* data, const char* config_json, hdlp_result** out) {
  return guarded([&] {
    require(data && out, "NULL argument");
    const auto cfg = parse_config(config_json);
    const auto run = hdlp::parse_lp_run(cfg, data->data, thread_count(cfg));
    *out = wrap(hdlp::run_lp(data->data, run));
  });
}

hdlp_status hdlp_favar_run(const hdlp_dataset* data, const char* config_json, hdlp_result** out) {
  return guarded([&] {
    require(data && out, "NULL argument");
    const auto cfg = parse_config(config_json);
    const auto run = hdlp::parse_favar_run(cfg, data->data, thread_count(cfg));
    *out = wrap(hdlp::run_favar(data->data, run));
  });
}

hdlp_status hdlp_simulate_run(const char* config_json, hdlp_result** out) {
  return guarded([&] {
    require(out != nullptr, "NULL argument");
    const auto cfg = parse_config(config_json);
    const auto run = hdlp::parse_simulate_run(cfg, thread_count(cfg));
    *out = wrap(hdlp::run_simulate(run));
  });
}

const char* hdlp_result_json(const hdlp_result* r) { return r ? r->json.c_str() : nullptr; }
const char* hdlp_result_csv(const hdlp_result* r) { return r ? r->csv.c_str() : nullptr; }
const char* hdlp_result_svg(const hdlp_result* r) { return r ? r->svg.c_str() : nullptr; }
const char* hdlp_result_config(const hdlp_result* r) { return r ? r->config.c_str() : nullptr; }
size_t hdlp_result_warning_count(const hdlp_result* r) { return r ? r->warnings.size() : 0; }

const char* hdlp_result_warning(const hdlp_result* r, size_t index) {
  if (!r || index >= r->warnings.size()) return nullptr;
  return r->warnings[index].c_str();
}

void hdlp_result_free(hdlp_result* r) { delete r; }

hdlp_status hdlp_lasso(const double* X, size_t T, size_t n, const double* y, size_t n_unpenalized, double lambda,
                       double* beta_out) {
  return guarded([&] {
    require(X && y && beta_out, "NULL argument");
    require(n_unpenalized <= n, "n_unpenalized exceeds the number of columns");
    require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be finite and non-negative");
    hdlp::PenalizedProblem p;
    p.X = Eigen::Map<const hdlp::Matrix>(X, static_cast<hdlp::Index>(T), static_cast<hdlp::Index>(n));
    p.y = Eigen::Map<const hdlp::Vector>(y, static_cast<hdlp::Index>(T));
    p.n_unpenalized = static_cast<hdlp::Index>(n_unpenalized);
    p.rows.resize(T);
    for (size_t t = 0; t < T; ++t) p.rows[t] = static_cast<hdlp::Index>(t);
    const auto beta = hdlp::fwl_split_solve(p, lambda).coefficients();
    Eigen::Map<hdlp::Vector>(beta_out, static_cast<hdlp::Index>(n)) = beta;
  });
}

hdlp_status hdlp_hac_covariance(const double* w, size_t T, size_t k, size_t bandwidth, int lag_adjusted,
                                double* omega_out) {
  return guarded([&] {
    require(w && omega_out, "NULL argument");
    const hdlp::Matrix W = Eigen::Map<const hdlp::Matrix>(w, static_cast<hdlp::Index>(T), static_cast<hdlp::Index>(k));
    const auto norm = lag_adjusted ? hdlp::HacNormalization::lag_adjusted : hdlp::HacNormalization::full_sample;
    const hdlp::Matrix omega = hdlp::hac_covariance_scores(W, static_cast<hdlp::Index>(bandwidth), norm);
    Eigen::Map<hdlp::Matrix>(omega_out, static_cast<hdlp::Index>(k), static_cast<hdlp::Index>(k)) = omega;
  });
}

hdlp_status hdlp_andrews_bandwidth(const double* w, size_t T, size_t k, size_t* bandwidth_out) {
  return guarded([&] {
    require(w && bandwidth_out, "NULL argument");
    const hdlp::Matrix W = Eigen::Map<const hdlp::Matrix>(w, static_cast<hdlp::Index>(T), static_cast<hdlp::Index>(k));
    *bandwidth_out = static_cast<size_t>(hdlp::andrews_bandwidth(W));
  });
}

hdlp_status hdlp_true_irf(size_t P, const double* rho, int sign_switch, int h_max, double* out) {
  return guarded([&] {
    require(out != nullptr, "NULL argument");
    hdlp::DgpSpec spec;
    spec.P = static_cast<hdlp::Index>(P);
    if (rho)
      for (int k = 0; k < 4; ++k) spec.rho[static_cast<size_t>(k)] = rho[k];
    spec.sign_switch = sign_switch != 0;
    spec.validate();
    const auto irf = hdlp::true_irf(spec, h_max);
    for (int h = 0; h <= h_max; ++h) out[h] = irf[h];
  });
}

}  // extern "C"
