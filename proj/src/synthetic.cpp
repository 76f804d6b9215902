#include "hdlp/synthetic.hpp"
#include "hdlp/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace hdlp {

namespace {

std::string month_label(Index t) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", static_cast<int>(1960 + t / 12), static_cast<int>(t % 12 + 1));
  return buf;
}

std::string quarter_label(Index t) {
  return std::to_string(1889 + t / 4) + "Q" + std::to_string(t % 4 + 1);
}

std::string numbered(char prefix, int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%03d", prefix, i);
  return buf;
}

// Turns a stationary driver into a raw series under transform code 1, 2 or 5.
Vector integrate(const Vector& s, int code, double drift, double scale) {
  Vector out(s.size());
  double level = 0.0;
  for (Index t = 0; t < s.size(); ++t) {
    switch (code) {
      case 5:
        level += drift + scale * s[t];
        out[t] = 100.0 * std::exp(level);
        break;
      case 2:
        level += scale * s[t];
        out[t] = level;
        break;
      default:
        out[t] = s[t];
    }
  }
  return out;
}

}  // namespace

Dataset synthetic_macro_panel(const MacroPanelConfig& c) {
  if (c.T < 50 || c.slow < 2 || c.fast < 1) throw ConfigError("macro panel needs T >= 50, slow >= 2, fast >= 1");
  if (c.zlb_start < 0 || c.zlb_length < 0 || c.zlb_start + c.zlb_length > c.T)
    throw ConfigError("ZLB episode must lie inside the sample");
  CounterRng rng(c.seed);
  const Index burn = 120, n = burn + c.T;
  const double rbar = 5.0;

  Matrix f = Matrix::Zero(n, 3);
  Vector ffr = Vector::Constant(n, rbar);
  for (Index t = 1; t < n; ++t) {
    const double gap = ffr[t - 1] - rbar;
    f(t, 0) = 0.85 * f(t - 1, 0) - 0.12 * gap + 0.5 * rng.gaussian();
    f(t, 1) = 0.6 * f(t - 1, 1) + 0.1 * f(t - 1, 0) - 0.04 * gap + 0.5 * rng.gaussian();
    const Index row = t - burn;
    double r = rbar + 0.95 * gap + 0.08 * f(t, 0) + 0.08 * f(t, 1) + 0.25 * rng.gaussian();
    if (row >= c.zlb_start && row < c.zlb_start + c.zlb_length)
      r = std::clamp(0.1 + 0.04 * rng.gaussian(), 0.02, 0.2);
    else
      r = std::max(r, 0.3);
    ffr[t] = r;
    f(t, 2) = 0.4 * f(t - 1, 2) + 0.5 * (ffr[t] - ffr[t - 1]) + 0.5 * rng.gaussian();
  }

  Dataset d;
  std::vector<Vector> cols;
  auto add = [&](std::string name, Vector v, int code, SpeedClass speed) {
    d.names.push_back(std::move(name));
    cols.push_back(v.tail(c.T));
    d.transform_codes.push_back(code);
    d.speed.push_back(speed);
  };
  auto idio = [&](double phi, double sd) {
    Vector e(n);
    double prev = 0.0;
    for (Index t = 0; t < n; ++t) e[t] = prev = phi * prev + sd * rng.gaussian();
    return e;
  };

  add("IP", integrate(f.col(0) + idio(0.2, 0.6), 5, 0.002, 0.006), 5, SpeedClass::slow);
  add("CPI", integrate(f.col(1) + idio(0.3, 0.4), 5, 0.003, 0.003), 5, SpeedClass::slow);
  const int codes[] = {5, 2, 1};
  for (int i = 2; i < c.slow; ++i) {
    const double a0 = 0.7 * rng.gaussian(), a1 = 0.7 * rng.gaussian();
    Vector s = a0 * f.col(0) + a1 * f.col(1) + idio(0.3, 0.7);
    const int code = codes[i % 3];
    add(numbered('S', i + 1), integrate(s, code, 0.001, 0.01), code, SpeedClass::slow);
  }
  add("FFR", ffr, 1, SpeedClass::none);
  for (int i = 0; i < c.fast; ++i) {
    const double a0 = 0.5 * rng.gaussian(), a1 = 0.5 * rng.gaussian(), a2 = 0.7 * rng.gaussian();
    const double b = 0.4 * rng.gaussian();
    Vector s = a0 * f.col(0) + a1 * f.col(1) + a2 * f.col(2) + b * (ffr.array() - rbar).matrix() + idio(0.3, 0.7);
    const int code = codes[(i + 1) % 3];
    add(numbered('F', i + 1), integrate(s, code, 0.001, 0.01), code, SpeedClass::fast);
  }
  Vector zlb(n);
  for (Index t = 0; t < n; ++t) zlb[t] = ffr[t] <= 0.25 ? 1.0 : 0.0;
  add("ZLB", zlb, 1, SpeedClass::none);

  d.values.resize(c.T, static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) d.values.col(static_cast<Index>(j)) = cols[j];
  for (Index t = 0; t < c.T; ++t) d.time_index.push_back(month_label(t));
  d.validate();
  return d;
}

Dataset synthetic_fiscal_panel(const FiscalPanelConfig& c) {
  if (c.T < 50) throw ConfigError("fiscal panel needs T >= 50");
  CounterRng rng(c.seed);
  const Index burn = 40, n = burn + c.T;
  Matrix v = Matrix::Zero(n, 7);  // NEWS GS GDP TAX UNEMP HIGH_U REC
  double u = 5.5;
  bool rec = false;
  for (Index t = 1; t < n; ++t) {
    const double e_news = rng.uniform() < 0.2 ? rng.gaussian() : 0.0;
    rec = rng.uniform() < (rec ? 0.7 : 0.08);
    u = 5.5 + 0.92 * (u - 5.5) + 0.45 * (rec ? 1.0 : 0.0) + 0.25 * rng.gaussian();
    const bool high = v(t - 1, 5) > 0.5;
    v(t, 0) = e_news;
    v(t, 1) = 0.85 * v(t - 1, 1) + (high ? 1.5 : 0.8) * v(t - 1, 0) + 0.3 * rng.gaussian();
    v(t, 2) = 0.8 * v(t - 1, 2) + (high ? 0.5 : 0.25) * v(t, 1) - 0.3 * (rec ? 1.0 : 0.0) + 0.4 * rng.gaussian();
    v(t, 3) = 0.7 * v(t - 1, 3) + 0.2 * v(t, 2) + 0.3 * rng.gaussian();
    v(t, 4) = u;
    v(t, 5) = u > 6.5 ? 1.0 : 0.0;
    v(t, 6) = rec ? 1.0 : 0.0;
  }
  Dataset d;
  d.names = {"NEWS", "GS", "GDP", "TAX", "UNEMP", "HIGH_U", "REC"};
  d.values = v.bottomRows(c.T);
  d.transform_codes.assign(7, 1);
  d.speed = {SpeedClass::none, SpeedClass::none, SpeedClass::none, SpeedClass::fast,
             SpeedClass::none, SpeedClass::none, SpeedClass::none};
  for (Index t = 0; t < c.T; ++t) d.time_index.push_back(quarter_label(t));
  d.validate();
  return d;
}

Dataset toy_panel(Index T, std::uint64_t seed) {
  if (T < 20) throw ConfigError("toy panel needs T >= 20");
  CounterRng rng(seed);
  Matrix A(3, 3);
  A << 0.5, 0.0, -0.2, 0.1, 0.6, -0.05, 0.2, 0.1, 0.7;
  const Index burn = 50;
  Matrix x = Matrix::Zero(burn + T, 3);
  for (Index t = 1; t < burn + T; ++t) {
    Vector e(3);
    for (Index i = 0; i < 3; ++i) e[i] = rng.gaussian();
    x.row(t) = (A * x.row(t - 1).transpose() + 0.5 * e).transpose();
  }
  Dataset d = Dataset::from_matrix(x.bottomRows(T), {"output", "prices", "rate"});
  d.speed = {SpeedClass::slow, SpeedClass::slow, SpeedClass::none};
  for (Index t = 0; t < T; ++t) d.time_index.push_back(std::to_string(t + 1));
  return d;
}

}  // namespace hdlp
