#include "hdlp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace hdlp {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Series {
  std::string label;
  std::vector<double> x, y, lo, hi;  // lo/hi empty when there is no band
  std::string color;
  bool dashed = false;
};

struct Panel {
  std::string title;
  std::vector<Series> series;
  std::vector<double> hlines;  // reference lines
};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) lo = -1, hi = 1;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

// Draws the band polygon over runs of finite points.
void band(std::ostringstream& out, const Series& s, auto px, auto py) {
  std::size_t i = 0;
  const std::size_t n = s.x.size();
  while (i < n) {
    while (i < n && !(std::isfinite(s.lo[i]) && std::isfinite(s.hi[i]))) ++i;
    std::size_t j = i;
    while (j < n && std::isfinite(s.lo[j]) && std::isfinite(s.hi[j])) ++j;
    if (j > i) {
      out << "<polygon fill=\"" << s.color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
      for (std::size_t k = i; k < j; ++k) out << fmt(px(s.x[k])) << ',' << fmt(py(s.hi[k])) << ' ';
      for (std::size_t k = j; k-- > i;) out << fmt(px(s.x[k])) << ',' << fmt(py(s.lo[k])) << ' ';
      out << "\"/>\n";
    }
    i = j;
  }
}

void line(std::ostringstream& out, const Series& s, auto px, auto py) {
  std::string pts;
  auto flush = [&] {
    if (pts.empty()) return;
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\""
        << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"" << pts << "\"/>\n";
    pts.clear();
  };
  for (std::size_t k = 0; k < s.x.size(); ++k) {
    if (!std::isfinite(s.y[k])) {
      flush();
      continue;
    }
    pts += fmt(px(s.x[k])) + "," + fmt(py(s.y[k])) + " ";
  }
  flush();
}

std::string render(const std::vector<Panel>& panels, const std::string& xlabel) {
  const double W = 420, H = 280, ml = 56, mr = 16, mt = 28, mb = 40;
  const std::size_t ncol = panels.size() < 2 ? 1 : 2;
  const std::size_t nrow = std::max<std::size_t>(1, (panels.size() + ncol - 1) / ncol);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(W * ncol) << "\" height=\"" << fmt(H * nrow)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const Panel& panel = panels[p];
    const double ox = W * static_cast<double>(p % ncol), oy = H * static_cast<double>(p / ncol);
    Range xr, yr;
    for (const auto& s : panel.series) {
      for (double v : s.x) xr.add(v);
      for (double v : s.y) yr.add(v);
      for (double v : s.lo) yr.add(v);
      for (double v : s.hi) yr.add(v);
    }
    for (double v : panel.hlines) yr.add(v);
    if (!(xr.lo <= xr.hi)) xr.lo = 0, xr.hi = 1;
    if (xr.hi - xr.lo < 1e-12) xr.hi = xr.lo + 1;
    yr.finish();
    const double x0 = ox + ml, x1 = ox + W - mr, y0 = oy + mt, y1 = oy + H - mb;
    auto px = [&](double v) { return x0 + (v - xr.lo) / (xr.hi - xr.lo) * (x1 - x0); };
    auto py = [&](double v) { return y1 - (v - yr.lo) / (yr.hi - yr.lo) * (y1 - y0); };

    out << "<g>\n<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt(oy + 18)
        << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(panel.title) << "</text>\n";
    out << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\"" << fmt(x1 - x0) << "\" height=\""
        << fmt(y1 - y0) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {
      const double yv = yr.lo + (yr.hi - yr.lo) * k / 4.0, xv = xr.lo + (xr.hi - xr.lo) * k / 4.0;
      out << "<line x1=\"" << fmt(x0) << "\" x2=\"" << fmt(x1) << "\" y1=\"" << fmt(py(yv)) << "\" y2=\""
          << fmt(py(yv)) << "\" stroke=\"#e4e4e4\"/>\n";
      out << "<text x=\"" << fmt(x0 - 4) << "\" y=\"" << fmt(py(yv) + 4) << "\" text-anchor=\"end\">"
          << tick_label(yv) << "</text>\n";
      out << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(y1 + 14) << "\" text-anchor=\"middle\">"
          << tick_label(xv) << "</text>\n";
    }
    out << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt(y1 + 30) << "\" text-anchor=\"middle\">"
        << escape(xlabel) << "</text>\n";
    for (double v : panel.hlines)
      out << "<line x1=\"" << fmt(x0) << "\" x2=\"" << fmt(x1) << "\" y1=\"" << fmt(py(v)) << "\" y2=\""
          << fmt(py(v)) << "\" stroke=\"#888\" stroke-dasharray=\"2,3\"/>\n";
    for (const auto& s : panel.series)
      if (!s.lo.empty()) band(out, s, px, py);
    for (const auto& s : panel.series) line(out, s, px, py);
    for (std::size_t k = 0; k < panel.series.size(); ++k) {
      const auto& s = panel.series[k];
      const double ly = y0 + 12 + 13.0 * static_cast<double>(k);
      out << "<line x1=\"" << fmt(x1 - 110) << "\" x2=\"" << fmt(x1 - 92) << "\" y1=\"" << fmt(ly - 4) << "\" y2=\""
          << fmt(ly - 4) << "\" stroke=\"" << s.color << "\" stroke-width=\"1.8\""
          << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
      out << "<text x=\"" << fmt(x1 - 88) << "\" y=\"" << fmt(ly) << "\">" << escape(s.label) << "</text>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

Series favar_series_for(const FavarResult& favar, Index j, const char* color) {
  Series s;
  s.label = "FAVAR";
  s.color = color;
  s.dashed = true;
  for (Index h = 0; h < favar.irf.rows(); ++h) {
    s.x.push_back(static_cast<double>(h));
    s.y.push_back(favar.irf(h, j));
    s.lo.push_back(favar.lower(h, j));
    s.hi.push_back(favar.upper(h, j));
  }
  return s;
}

}  // namespace

std::string irf_svg(const std::vector<ImpulseResponse>& irfs, const FavarResult* favar,
                    const std::vector<std::string>& favar_series) {
  std::vector<Panel> panels;
  std::vector<std::string> responses;
  for (const auto& irf : irfs)
    if (std::find(responses.begin(), responses.end(), irf.spec.response) == responses.end())
      responses.push_back(irf.spec.response);
  for (const auto& resp : responses) {
    Panel panel;
    panel.title = resp;
    panel.hlines = {0.0};
    std::size_t color = 0;
    for (const auto& irf : irfs) {
      if (irf.spec.response != resp) continue;
      for (std::size_t st = 0; st < irf.states.size(); ++st) {
        Series s;
        s.label = irf.states.size() > 1 ? irf.states[st] : irf.estimator;
        s.color = kPalette[color++ % std::size(kPalette)];
        for (std::size_t h = 0; h < irf.horizons.size(); ++h) {
          const auto& e = irf.horizons[h];
          const bool ok = !irf.failed[h] && static_cast<Index>(st) < e.phi_hat.size();
          const auto i = static_cast<Index>(st);
          const double nan = std::nan("");
          s.x.push_back(static_cast<double>(h));
          s.y.push_back(ok ? e.phi_hat[i] : nan);
          s.lo.push_back(ok ? e.ci_low[i] : nan);
          s.hi.push_back(ok ? e.ci_high[i] : nan);
        }
        panel.series.push_back(std::move(s));
      }
    }
    if (favar) {
      const bool wanted =
          favar_series.empty() || std::find(favar_series.begin(), favar_series.end(), resp) != favar_series.end();
      for (std::size_t j = 0; wanted && j < favar->names.size(); ++j)
        if (favar->names[j] == resp)
          panel.series.push_back(favar_series_for(*favar, static_cast<Index>(j), "#555555"));
    }
    panels.push_back(std::move(panel));
  }
  return render(panels, "horizon");
}

std::string favar_svg(const FavarResult& favar, const std::vector<std::string>& series) {
  std::vector<Panel> panels;
  for (std::size_t j = 0; j < favar.names.size(); ++j) {
    if (!series.empty() && std::find(series.begin(), series.end(), favar.names[j]) == series.end()) continue;
    Panel panel;
    panel.title = favar.names[j];
    panel.hlines = {0.0};
    panel.series.push_back(favar_series_for(favar, static_cast<Index>(j), kPalette[0]));
    panel.series.back().dashed = false;
    panels.push_back(std::move(panel));
  }
  return render(panels, "horizon");
}

std::string coverage_svg(const std::vector<CoverageReport>& reports, double nominal) {
  Panel cov, width;
  cov.title = "coverage";
  cov.hlines = {nominal};
  width.title = "mean interval width";
  std::vector<std::string> keys;
  for (const auto& r : reports) {
    // group cells into curves by (dgp, T, estimator)
    std::vector<Series> cs, ws;
    std::vector<std::string> ids;
    for (const auto& c : r.cells) {
      const std::string id = c.dgp + " T=" + std::to_string(c.T) + " " + to_string(c.estimator);
      auto it = std::find(ids.begin(), ids.end(), id);
      std::size_t k = static_cast<std::size_t>(it - ids.begin());
      if (it == ids.end()) {
        ids.push_back(id);
        auto key = std::find(keys.begin(), keys.end(), "T=" + std::to_string(c.T) + to_string(c.estimator));
        std::size_t color = static_cast<std::size_t>(key - keys.begin());
        if (key == keys.end()) keys.push_back("T=" + std::to_string(c.T) + to_string(c.estimator));
        Series s;
        s.label = id;
        s.color = kPalette[color % std::size(kPalette)];
        s.dashed = c.dgp == "dgp2";
        cs.push_back(s);
        ws.push_back(s);
      }
      cs[k].x.push_back(c.horizon);
      cs[k].y.push_back(c.coverage);
      ws[k].x.push_back(c.horizon);
      ws[k].y.push_back(c.mean_width);
    }
    for (auto& s : cs) cov.series.push_back(std::move(s));
    for (auto& s : ws) width.series.push_back(std::move(s));
  }
  return render({cov, width}, "horizon");
}

}  // namespace hdlp
