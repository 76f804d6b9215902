#include "hdlp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hdlp {

namespace {

// Splits one CSV record, honouring double quotes. Returns false at EOF.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool quoted = false, any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  if (s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == ".") return std::nan("");
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ConfigError("cannot parse '" + s + "' as a number at " + where);
  return v;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Dataset parse_dataset_csv(std::istream& in, const std::string& source) {
  std::vector<std::string> fields;
  if (!read_record(in, fields) || fields.size() < 2)
    throw ConfigError(source + ": expected a header with a time column and at least one series");
  Dataset d;
  for (std::size_t i = 1; i < fields.size(); ++i) d.names.push_back(trim(fields[i]));
  const std::size_t P = d.names.size();
  std::vector<std::vector<double>> rows;
  std::size_t line = 1;
  while (read_record(in, fields)) {
    ++line;
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;
    if (fields.size() != P + 1)
      throw ConfigError(source + ": line " + std::to_string(line) + " has " + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(P + 1));
    d.time_index.push_back(trim(fields[0]));
    std::vector<double> row(P);
    for (std::size_t j = 0; j < P; ++j)
      row[j] = parse_cell(fields[j + 1], source + " line " + std::to_string(line));
    rows.push_back(std::move(row));
  }
  d.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(P));
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (std::size_t j = 0; j < P; ++j) d.values(static_cast<Index>(t), static_cast<Index>(j)) = rows[t][j];
  d.transform_codes.assign(P, 1);
  d.speed.assign(P, SpeedClass::none);
  d.validate();
  return d;
}

Dataset read_dataset_csv(const std::string& path) {
  auto in = open_in(path);
  return parse_dataset_csv(in, path);
}

void parse_metadata(std::istream& in, Dataset& data, const std::string& source) {
  std::vector<std::string> fields;
  if (!read_record(in, fields)) throw ConfigError(source + ": metadata file is empty");
  std::vector<std::string> header;
  for (auto& f : fields) header.push_back(trim(f));
  auto col = [&](const std::string& name) -> std::ptrdiff_t {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<std::ptrdiff_t>(i);
    return -1;
  };
  const auto c_series = col("series"), c_code = col("tcode"), c_speed = col("speed");
  if (c_series < 0 || c_code < 0) throw ConfigError(source + ": metadata needs 'series' and 'tcode' columns");
  std::size_t line = 1;
  while (read_record(in, fields)) {
    ++line;
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;
    if (fields.size() != header.size())
      throw ConfigError(source + ": line " + std::to_string(line) + " has the wrong number of fields");
    const std::string name = trim(fields[static_cast<std::size_t>(c_series)]);
    if (!data.has(name)) throw ConfigError(source + ": series '" + name + "' is not in the dataset");
    const std::string code_text = trim(fields[static_cast<std::size_t>(c_code)]);
    int code = 0;
    const auto [ptr, ec] = std::from_chars(code_text.data(), code_text.data() + code_text.size(), code);
    if (ec != std::errc() || ptr != code_text.data() + code_text.size() || code < 1 || code > 6)
      throw ConfigError(source + ": series '" + name + "' has invalid transform code '" + code_text +
                        "' (allowed 1-6)");
    const auto j = static_cast<std::size_t>(data.column(name));
    data.transform_codes[j] = code;
    if (c_speed >= 0) {
      try {
        data.speed[j] = parse_speed_class(trim(fields[static_cast<std::size_t>(c_speed)]));
      } catch (const Error& e) {
        throw ConfigError(source + ": series '" + name + "': " + e.what());
      }
    }
  }
  data.validate();
}

void read_metadata(const std::string& path, Dataset& data) {
  auto in = open_in(path);
  parse_metadata(in, data, path);
}

Dataset load_dataset(const std::string& csv_path, const std::string& metadata_path) {
  Dataset d = read_dataset_csv(csv_path);
  if (!metadata_path.empty()) read_metadata(metadata_path, d);
  return d;
}

void write_matrix_csv(std::ostream& out, const Matrix& m, const std::vector<std::string>& header) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << quote(header[i]);
  out << '\n';
  for (Index t = 0; t < m.rows(); ++t) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_number(m(t, j));
    out << '\n';
  }
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  out << "time";
  for (const auto& n : data.names) out << ',' << quote(n);
  out << '\n';
  for (Index t = 0; t < data.rows(); ++t) {
    out << quote(static_cast<std::size_t>(t) < data.time_index.size() ? data.time_index[static_cast<std::size_t>(t)]
                                                                      : std::to_string(t));
    for (Index j = 0; j < data.cols(); ++j) {
      const double v = data.values(t, j);
      out << ',' << (std::isnan(v) ? "" : format_number(v));
    }
    out << '\n';
  }
}

void write_metadata_csv(std::ostream& out, const Dataset& data) {
  out << "series,tcode,speed\n";
  for (std::size_t j = 0; j < data.names.size(); ++j)
    out << quote(data.names[j]) << ',' << data.transform_codes[j] << ',' << to_string(data.speed[j]) << '\n';
}

void write_irf_csv(std::ostream& out, const std::vector<ImpulseResponse>& irfs) {
  out << "estimator,response,horizon,state,estimate,se,lo,hi\n";
  const double nan = std::nan("");
  for (const auto& irf : irfs)
    for (std::size_t h = 0; h < irf.horizons.size(); ++h) {
      const auto& est = irf.horizons[h];
      for (std::size_t s = 0; s < irf.states.size(); ++s) {
        const bool have = !irf.failed[h] && static_cast<Index>(s) < est.phi_hat.size();
        const auto i = static_cast<Index>(s);
        out << quote(irf.estimator) << ',' << quote(irf.spec.response) << ',' << h << ',' << quote(irf.states[s])
            << ',' << format_number(have ? est.phi_hat[i] : nan) << ',' << format_number(have ? est.se[i] : nan)
            << ',' << format_number(have ? est.ci_low[i] : nan) << ',' << format_number(have ? est.ci_high[i] : nan)
            << '\n';
      }
    }
}

namespace {

std::vector<Index> favar_columns(const FavarResult& favar, const std::vector<std::string>& series) {
  std::vector<Index> cols;
  if (series.empty()) {
    for (std::size_t j = 0; j < favar.names.size(); ++j) cols.push_back(static_cast<Index>(j));
    return cols;
  }
  for (const auto& s : series) {
    bool found = false;
    for (std::size_t j = 0; j < favar.names.size(); ++j)
      if (favar.names[j] == s) {
        cols.push_back(static_cast<Index>(j));
        found = true;
      }
    if (!found) throw ConfigError("FAVAR output series '" + s + "' is not in the panel");
  }
  return cols;
}

}  // namespace

void write_favar_csv(std::ostream& out, const FavarResult& favar, const std::vector<std::string>& series) {
  out << "estimator,response,horizon,state,estimate,se,lo,hi\n";
  for (auto j : favar_columns(favar, series))
    for (Index h = 0; h < favar.irf.rows(); ++h)
      out << "favar," << quote(favar.names[static_cast<std::size_t>(j)]) << ',' << h << ",linear,"
          << format_number(favar.irf(h, j)) << ",nan," << format_number(favar.lower(h, j)) << ','
          << format_number(favar.upper(h, j)) << '\n';
}

void write_horizon_csv(std::ostream& out, const ImpulseResponse& irf) {
  out << "h,label,estimate,se,ci_low,ci_high,q_t,lambda\n";
  for (std::size_t h = 0; h < irf.horizons.size(); ++h) {
    if (irf.failed[h]) continue;
    const auto& est = irf.horizons[h];
    for (Index i = 0; i < est.phi_hat.size(); ++i)
      out << h << ',' << quote(est.labels[static_cast<std::size_t>(i)]) << ',' << format_number(est.phi_hat[i]) << ','
          << format_number(est.se[i]) << ',' << format_number(est.ci_low[i]) << ',' << format_number(est.ci_high[i])
          << ',' << est.bandwidth << ',' << format_number(est.lambda) << '\n';
  }
}

void write_coverage_csv(std::ostream& out, const std::vector<CoverageReport>& reports) {
  out << "dgp,P,T,estimator,horizon,coverage,mean_width,replications,failures\n";
  for (const auto& r : reports)
    for (const auto& c : r.cells)
      out << c.dgp << ',' << c.P << ',' << c.T << ',' << to_string(c.estimator) << ',' << c.horizon << ','
          << format_number(c.coverage) << ',' << format_number(c.mean_width) << ',' << c.replications << ','
          << c.failures << '\n';
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

nlohmann::json vec(const Vector& v) {
  auto a = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

nlohmann::json mat(const Matrix& m) {
  auto a = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) a.push_back(vec(m.row(i).transpose()));
  return a;
}

}  // namespace

nlohmann::json to_json(const HorizonEstimate& est) {
  nlohmann::json j;
  j["h"] = est.h;
  j["labels"] = est.labels;
  j["estimate"] = vec(est.phi_hat);
  j["se"] = vec(est.se);
  j["ci_low"] = vec(est.ci_low);
  j["ci_high"] = vec(est.ci_high);
  j["omega"] = mat(est.omega_hat);
  j["tau_sq"] = vec(est.tau_sq);
  j["q_t"] = est.bandwidth;
  j["lambda"] = number(est.lambda);
  j["T"] = est.T;
  j["N"] = est.N;
  j["alpha"] = est.alpha;
  j["degenerate"] = est.degenerate;
  j["solver"] = {{"sweeps", est.diagnostics.sweeps},
                 {"kkt_gap", number(est.diagnostics.kkt_gap)},
                 {"polished", est.diagnostics.polished},
                 {"dropped_columns", est.diagnostics.dropped_columns}};
  j["warnings"] = est.warnings;
  return j;
}

nlohmann::json to_json(const ImpulseResponse& irf) {
  nlohmann::json j;
  j["estimator"] = irf.estimator;
  j["response"] = irf.spec.response;
  j["shock"] = irf.spec.shock;
  j["cumulate"] = irf.spec.cumulate;
  j["states"] = irf.states;
  j["dropped_states"] = irf.dropped_states;
  auto hs = nlohmann::json::array();
  for (std::size_t h = 0; h < irf.horizons.size(); ++h) {
    if (irf.failed[h])
      hs.push_back({{"h", h}, {"error", irf.errors[h]}});
    else
      hs.push_back(to_json(irf.horizons[h]));
  }
  j["horizons"] = hs;
  if (irf.nodewise) {
    j["nodewise_lambdas"] = irf.nodewise->lambdas;
    j["nodewise_tau_sq"] = vec(irf.nodewise->tau_sq);
  }
  j["warnings"] = irf.warnings;
  return j;
}

nlohmann::json to_json(const CoverageReport& report) {
  auto cells = nlohmann::json::array();
  for (const auto& c : report.cells)
    cells.push_back({{"dgp", c.dgp},
                     {"P", c.P},
                     {"T", c.T},
                     {"estimator", to_string(c.estimator)},
                     {"horizon", c.horizon},
                     {"coverage", number(c.coverage)},
                     {"mean_width", number(c.mean_width)},
                     {"replications", c.replications},
                     {"failures", c.failures}});
  return {{"cells", cells}, {"failure_messages", report.failure_messages}};
}

nlohmann::json to_json(const FavarResult& favar, const std::vector<std::string>& series) {
  nlohmann::json j;
  auto out = nlohmann::json::array();
  for (auto c : favar_columns(favar, series))
    out.push_back({{"series", favar.names[static_cast<std::size_t>(c)]},
                   {"cumulated", static_cast<bool>(favar.cumulated[static_cast<std::size_t>(c)])},
                   {"estimate", vec(favar.irf.col(c))},
                   {"lo", vec(favar.lower.col(c))},
                   {"hi", vec(favar.upper.col(c))}});
  j["responses"] = out;
  j["draws"] = favar.draws;
  j["failures"] = favar.failures;
  j["T"] = favar.T;
  j["warnings"] = favar.warnings;
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hdlp
