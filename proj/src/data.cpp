#include "hdlp/data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace hdlp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void push_unique(std::vector<std::string>& out, const std::string& name) {
  if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
}

std::string lag_label(const std::string& name, int lag) {
  return name + ".L" + std::to_string(lag);
}

}  // namespace

SpeedClass parse_speed_class(std::string_view text) {
  if (text == "slow" || text == "S" || text == "s") return SpeedClass::slow;
  if (text == "fast" || text == "F" || text == "f") return SpeedClass::fast;
  if (text.empty() || text == "none" || text == "-") return SpeedClass::none;
  throw ConfigError("unknown speed class '" + std::string(text) + "' (expected slow, fast or none)");
}

std::string_view to_string(SpeedClass speed) {
  switch (speed) {
    case SpeedClass::slow: return "slow";
    case SpeedClass::fast: return "fast";
    case SpeedClass::none: break;
  }
  return "none";
}

Index Dataset::column(std::string_view name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ConfigError("unknown series '" + std::string(name) + "'");
  return static_cast<Index>(it - names.begin());
}

bool Dataset::has(std::string_view name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

void Dataset::validate() const {
  const auto p = static_cast<std::size_t>(values.cols());
  if (names.size() != p || transform_codes.size() != p || speed.size() != p)
    throw InvalidArgument("dataset metadata does not match the number of series");
  if (!time_index.empty() && time_index.size() != static_cast<std::size_t>(values.rows()))
    throw InvalidArgument("time index length does not match the number of observations");
  std::set<std::string> seen;
  for (std::size_t j = 0; j < p; ++j) {
    if (!seen.insert(names[j]).second) throw ConfigError("duplicate series '" + names[j] + "'");
    if (transform_codes[j] < 1 || transform_codes[j] > 6)
      throw ConfigError("series '" + names[j] + "' has invalid transform code " +
                        std::to_string(transform_codes[j]) + " (expected 1..6)");
    // Missing values are allowed only as a leading and a trailing run.
    const auto col = values.col(static_cast<Index>(j));
    Index first = 0;
    while (first < col.size() && std::isnan(col[first])) ++first;
    Index last = col.size() - 1;
    while (last >= first && std::isnan(col[last])) --last;
    for (Index t = first; t <= last; ++t)
      if (std::isnan(col[t]))
        throw ConfigError("series '" + names[j] + "' has an internal gap at row " + std::to_string(t));
  }
}

Dataset Dataset::from_matrix(Matrix values, std::vector<std::string> names) {
  Dataset d;
  const auto p = static_cast<std::size_t>(values.cols());
  if (names.empty()) {
    for (std::size_t j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
  }
  d.names = std::move(names);
  d.values = std::move(values);
  d.transform_codes.assign(p, 1);
  d.speed.assign(p, SpeedClass::none);
  d.validate();
  return d;
}

Vector apply_transform(const Vector& series, int code, std::string_view name) {
  if (code < 1 || code > 6)
    throw ConfigError("series '" + std::string(name) + "': invalid transform code " + std::to_string(code));
  const Index n = series.size();
  Vector base = series;
  if (code >= 4) {
    for (Index t = 0; t < n; ++t) {
      if (std::isnan(series[t])) continue;
      if (!(series[t] > 0.0))
        throw DomainError(std::string(name), t,
                          "series '" + std::string(name) + "': log transform of non-positive value at index " +
                              std::to_string(t));
      base[t] = std::log(series[t]);
    }
  }
  const int order = (code - 1) % 3;  // 0 level, 1 diff, 2 double diff
  Vector out = base;
  for (int d = 0; d < order; ++d) {
    Vector next(n);
    next[0] = kNaN;
    for (Index t = 1; t < n; ++t) next[t] = out[t] - out[t - 1];
    out = std::move(next);
  }
  for (Index t = 0; t < std::min<Index>(order, n); ++t) out[t] = kNaN;
  return out;
}

Dataset apply_transforms(const Dataset& raw) {
  raw.validate();
  Dataset out = raw;
  for (Index j = 0; j < raw.cols(); ++j) {
    const auto col = static_cast<std::size_t>(j);
    out.values.col(j) = apply_transform(raw.values.col(j), raw.transform_codes[col], raw.names[col]);
  }
  std::fill(out.transform_codes.begin(), out.transform_codes.end(), 1);
  return out;
}

Demeaned demean(const Matrix& m) {
  Demeaned out;
  if (m.rows() == 0) {
    out.values = m;
    out.means = Vector::Zero(m.cols());
    return out;
  }
  out.means = m.colwise().mean().transpose();
  out.values = m.rowwise() - out.means.transpose();
  return out;
}

std::vector<std::string> LpSpec::effective_slow() const {
  std::vector<std::string> out;
  for (const auto& s : slow_controls)
    if (s != response && s != shock) push_unique(out, s);
  return out;
}

std::vector<std::string> LpSpec::effective_fast() const {
  std::vector<std::string> out;
  const auto slow = effective_slow();
  for (const auto& s : fast_controls)
    if (s != response && s != shock && std::find(slow.begin(), slow.end(), s) == slow.end())
      push_unique(out, s);
  return out;
}

std::vector<std::string> LpSpec::z_variables() const {
  std::vector<std::string> z = effective_slow();
  push_unique(z, shock);
  push_unique(z, response);
  for (const auto& f : effective_fast()) push_unique(z, f);
  return z;
}

void LpSpec::validate(const Dataset& data) const {
  if (response.empty() || shock.empty()) throw ConfigError("local projection needs a response and a shock");
  if (lags < 1) throw ConfigError("lags must be a positive integer");
  if (h_max < 0) throw ConfigError("h_max must be non-negative");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  data.column(response);
  data.column(shock);
  for (const auto& s : slow_controls) data.column(s);
  for (const auto& s : fast_controls) data.column(s);
  for (const auto& s : state_dummies) data.column(s);
  if (std::find(fast_controls.begin(), fast_controls.end(), shock) != fast_controls.end())
    throw ConfigError("the shock '" + shock + "' cannot be a fast control");
  if (!state_labels.empty()) {
    const std::size_t states = state_dummies.size() == 1 && !cross_states ? 2
                               : cross_states ? (std::size_t{1} << state_dummies.size())
                                              : state_dummies.size();
    if (state_labels.size() != states)
      throw ConfigError("expected " + std::to_string(states) + " state labels, got " +
                        std::to_string(state_labels.size()));
  }
}

void PenalizedProblem::check_shapes() const {
  if (y.size() != X.rows()) throw InvalidArgument("response length does not match the design rows");
  if (n_unpenalized < 0 || n_unpenalized > X.cols()) throw InvalidArgument("unpenalized count out of range");
  for (auto j : of_interest)
    if (j < 0 || j >= n_unpenalized) throw InvalidArgument("columns of interest must be unpenalized");
  if (!column_labels.empty() && column_labels.size() != static_cast<std::size_t>(X.cols()))
    throw InvalidArgument("column labels do not match the design");
}

PenalizedProblem PenalizedProblem::head_rows(Index count) const {
  PenalizedProblem out = *this;
  out.X = X.topRows(count);
  out.y = y.head(count);
  if (!rows.empty()) out.rows.assign(rows.begin(), rows.begin() + count);
  return out;
}

PenalizedProblem build_lp_design(const Dataset& data, const LpSpec& spec, int h) {
  spec.validate(data);
  if (h < 0 || h > spec.h_max) throw InvalidArgument("horizon outside [0, h_max]");
  const int K = spec.lags;
  const Index T_raw = data.rows();
  if (h + K >= T_raw) throw ConfigError("horizon plus lags exceed the available span");

  const Index shock = data.column(spec.shock);
  const Index response = data.column(spec.response);
  std::vector<Index> slow;
  for (const auto& s : spec.effective_slow()) slow.push_back(data.column(s));
  std::vector<Index> z;
  for (const auto& s : spec.z_variables()) z.push_back(data.column(s));
  std::vector<Index> dummies;
  for (const auto& s : spec.state_dummies) dummies.push_back(data.column(s));

  const Index N = 1 + static_cast<Index>(slow.size()) + K * static_cast<Index>(z.size());

  auto ok = [&](Index t, Index col) { return !std::isnan(data.values(t, col)); };
  std::vector<Index> rows;
  for (Index t = K; t + h < T_raw; ++t) {
    bool complete = ok(t, shock);
    for (auto c : slow) complete = complete && ok(t, c);
    for (int k = 1; k <= K && complete; ++k)
      for (auto c : z) complete = complete && ok(t - k, c);
    for (int l = spec.cumulate ? 0 : h; l <= h && complete; ++l) complete = ok(t + l, response);
    for (auto c : dummies) complete = complete && ok(t - 1, c);
    if (complete) rows.push_back(t);
  }
  const auto T = static_cast<Index>(rows.size());
  if (T < 10)
    throw ConfigError("only " + std::to_string(T) + " complete observations remain at horizon " +
                      std::to_string(h) + " (at least 10 required)");

  PenalizedProblem p;
  p.X.resize(T, N);
  p.y.resize(T);
  for (Index i = 0; i < T; ++i) {
    const Index t = rows[static_cast<std::size_t>(i)];
    Index col = 0;
    p.X(i, col++) = data.values(t, shock);
    for (auto c : slow) p.X(i, col++) = data.values(t, c);
    for (int k = 1; k <= K; ++k)
      for (auto c : z) p.X(i, col++) = data.values(t - k, c);
    double lhs = 0.0;
    for (int l = spec.cumulate ? 0 : h; l <= h; ++l) lhs += data.values(t + l, response);
    p.y[i] = lhs;
  }

  p.column_labels.push_back(spec.shock);
  for (auto c : slow) p.column_labels.push_back(data.names[static_cast<std::size_t>(c)]);
  for (int k = 1; k <= K; ++k)
    for (auto c : z) p.column_labels.push_back(lag_label(data.names[static_cast<std::size_t>(c)], k));

  p.X = demean(p.X).values;
  p.y = demean(p.y).values;
  p.n_unpenalized = 1;
  p.of_interest = {0};
  p.rows = std::move(rows);
  return p;
}

std::vector<Vector> cross_indicators(const std::vector<Vector>& indicators) {
  if (indicators.empty()) return {};
  const Index n = indicators.front().size();
  const std::size_t m = indicators.size();
  std::vector<Vector> out;
  for (std::size_t code = 0; code < (std::size_t{1} << m); ++code) {
    Vector d = Vector::Ones(n);
    for (std::size_t k = 0; k < m; ++k) {
      // Bit k (from the most significant) set means "indicator k is off".
      const bool off = (code >> (m - 1 - k)) & 1U;
      d = d.cwiseProduct(off ? (Vector::Ones(n) - indicators[k]).eval() : indicators[k]);
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Vector> state_dummies_for(const Dataset& data, const LpSpec& spec,
                                      const std::vector<Index>& rows) {
  std::vector<Vector> indicators;
  for (const auto& name : spec.state_dummies) {
    const Index c = data.column(name);
    Vector d(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i] < 1) throw ConfigError("state dummy '" + name + "' needs a lagged value");
      const double v = data.values(rows[i] - 1, c);
      if (v != 0.0 && v != 1.0)
        throw ConfigError("state dummy '" + name + "' is not {0,1}-valued at row " + std::to_string(rows[i] - 1));
      d[static_cast<Index>(i)] = v;
    }
    indicators.push_back(std::move(d));
  }
  if (indicators.empty()) return {};
  if (spec.cross_states) return cross_indicators(indicators);
  if (indicators.size() == 1) {
    const Index n = indicators[0].size();
    return {indicators[0], Vector::Ones(n) - indicators[0]};
  }
  return indicators;
}

PenalizedProblem interact_states(const PenalizedProblem& problem,
                                 const std::vector<Vector>& dummies,
                                 const std::vector<std::string>& labels,
                                 Index min_state_obs) {
  problem.check_shapes();
  if (dummies.empty()) throw InvalidArgument("interact_states needs at least one dummy");
  if (!labels.empty() && labels.size() != dummies.size())
    throw InvalidArgument("state labels do not match the number of dummies");
  const Index T = problem.T();
  for (const auto& d : dummies)
    if (d.size() != T) throw InvalidArgument("state dummy length does not match the design rows");
  for (Index t = 0; t < T; ++t) {
    double total = 0.0;
    for (const auto& d : dummies) {
      if (d[t] != 0.0 && d[t] != 1.0) throw ConfigError("state dummies must be {0,1}-valued");
      total += d[t];
    }
    if (total != 1.0)
      throw ConfigError("state dummies do not partition unity at observation " + std::to_string(t));
  }

  std::vector<std::string> names;
  for (std::size_t i = 0; i < dummies.size(); ++i)
    names.push_back(labels.empty() ? "state" + std::to_string(i + 1) : labels[i]);

  PenalizedProblem out;
  // Drop sparse states along with the rows where they are active.
  std::vector<std::size_t> kept;
  std::vector<bool> keep_row(static_cast<std::size_t>(T), true);
  for (std::size_t i = 0; i < dummies.size(); ++i) {
    const auto active = static_cast<Index>(dummies[i].sum());
    if (active < min_state_obs) {
      out.dropped_states.push_back(names[i]);
      out.warnings.push_back("state '" + names[i] + "' has " + std::to_string(active) +
                             " active observations; dropped");
      for (Index t = 0; t < T; ++t)
        if (dummies[i][t] == 1.0) keep_row[static_cast<std::size_t>(t)] = false;
    } else {
      kept.push_back(i);
    }
  }
  if (kept.empty()) throw ConfigError("no state has enough active observations");

  std::vector<Index> row_ids;
  for (Index t = 0; t < T; ++t)
    if (keep_row[static_cast<std::size_t>(t)]) row_ids.push_back(t);
  const auto Tn = static_cast<Index>(row_ids.size());
  const auto S = static_cast<Index>(kept.size());
  const Index base_S = problem.S();
  const Index base_pen = problem.N() - base_S;
  const Index N = S * problem.N() + (S - 1);

  auto dummy = [&](std::size_t state, Index r) { return dummies[kept[state]][row_ids[static_cast<std::size_t>(r)]]; };
  auto base = [&](Index r, Index c) { return problem.X(row_ids[static_cast<std::size_t>(r)], c); };
  auto base_label = [&](Index c) {
    return problem.column_labels.empty() ? "c" + std::to_string(c) : problem.column_labels[static_cast<std::size_t>(c)];
  };

  out.X.resize(Tn, N);
  out.y.resize(Tn);
  for (Index r = 0; r < Tn; ++r) out.y[r] = problem.y[row_ids[static_cast<std::size_t>(r)]];

  Index col = 0;
  // Unpenalized: each base unpenalized column per state, then intercepts.
  for (Index c = 0; c < base_S; ++c)
    for (Index s = 0; s < S; ++s, ++col) {
      for (Index r = 0; r < Tn; ++r) out.X(r, col) = dummy(static_cast<std::size_t>(s), r) * base(r, c);
      out.column_labels.push_back(base_label(c) + "@" + names[kept[static_cast<std::size_t>(s)]]);
    }
  for (Index s = 0; s + 1 < S; ++s, ++col) {
    for (Index r = 0; r < Tn; ++r) out.X(r, col) = dummy(static_cast<std::size_t>(s), r);
    out.column_labels.push_back("intercept@" + names[kept[static_cast<std::size_t>(s)]]);
  }
  for (Index s = 0; s < S; ++s)
    for (Index c = base_S; c < base_S + base_pen; ++c, ++col) {
      for (Index r = 0; r < Tn; ++r) out.X(r, col) = dummy(static_cast<std::size_t>(s), r) * base(r, c);
      out.column_labels.push_back(base_label(c) + "@" + names[kept[static_cast<std::size_t>(s)]]);
    }

  out.X = demean(out.X).values;
  out.y = demean(out.y).values;
  out.n_unpenalized = base_S * S + (S - 1);
  for (auto j : problem.of_interest)
    for (Index s = 0; s < S; ++s) out.of_interest.push_back(j * S + s);
  for (auto s : kept) out.states.push_back(names[s]);
  if (!problem.rows.empty())
    for (auto r : row_ids) out.rows.push_back(problem.rows[static_cast<std::size_t>(r)]);
  out.warnings.insert(out.warnings.begin(), problem.warnings.begin(), problem.warnings.end());
  return out;
}

}  // namespace hdlp
