#ifndef UNIDYM_PLOT_HPP
#define UNIDYM_PLOT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "unidym/emit.hpp"
#include "unidym/errors.hpp"
#include "unidym/records.hpp"

namespace unidym {

enum class PlotKind { margin_histogram, census_vs_parameter, rho_envelope };

inline PlotKind parse_plot_kind(const std::string& s) {
  if (s == "margin-histogram") return PlotKind::margin_histogram;
  if (s == "census-vs-parameter") return PlotKind::census_vs_parameter;
  if (s == "rho-envelope") return PlotKind::rho_envelope;
  throw UsageError("unknown plot kind " + s +
                   " (expected margin-histogram, census-vs-parameter or rho-envelope)");
}

inline const char* to_string(PlotKind k) {
  switch (k) {
    case PlotKind::margin_histogram: return "margin-histogram";
    case PlotKind::census_vs_parameter: return "census-vs-parameter";
    case PlotKind::rho_envelope: return "rho-envelope";
  }
  return "?";
}

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
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
  std::vector<std::pair<double, double>> pts;
  bool step = false;
};

// Minimal SVG canvas with a linear or log10 axis pair.
class Canvas {
 public:
  static constexpr double W = 720, H = 480, L = 80, R = 160, T = 50, B = 60;

  Canvas(std::string title, std::string xlabel, std::string ylabel, bool logx, bool logy)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)),
        logx_(logx), logy_(logy) {}

  void fit(const std::vector<Series>& all) {
    for (const auto& s : all)
      for (auto [x, y] : s.pts) {
        if (!usable(x, logx_) || !usable(y, logy_)) continue;
        x0_ = std::min(x0_, tx(x));
        x1_ = std::max(x1_, tx(x));
        y0_ = std::min(y0_, ty(y));
        y1_ = std::max(y1_, ty(y));
      }
    if (!(x0_ <= x1_)) throw UsageError("no plottable points");
    pad(x0_, x1_);
    pad(y0_, y1_);
  }
  void set_y_floor(double y) { y0_ = std::min(y0_, ty(y)); }

  double px(double x) const { return L + (tx(x) - x0_) / (x1_ - x0_) * (W - L - R); }
  double py(double y) const { return H - B - (ty(y) - y0_) / (y1_ - y0_) * (H - T - B); }
  bool usable(double v, bool log) const { return std::isfinite(v) && (!log || v > 0); }
  bool logx() const { return logx_; }
  bool logy() const { return logy_; }

  void rect(double x, double y, double w, double h, const std::string& fill) {
    body_ += "<rect x=\"" + svg_num(x) + "\" y=\"" + svg_num(y) + "\" width=\"" + svg_num(w) +
             "\" height=\"" + svg_num(h) + "\" fill=\"" + fill + "\" stroke=\"#333\" stroke-width=\"0.5\"/>\n";
  }
  void line(double xa, double ya, double xb, double yb, const std::string& stroke,
            const std::string& dash = "") {
    body_ += "<line x1=\"" + svg_num(xa) + "\" y1=\"" + svg_num(ya) + "\" x2=\"" + svg_num(xb) +
             "\" y2=\"" + svg_num(yb) + "\" stroke=\"" + stroke + "\"" +
             (dash.empty() ? "" : " stroke-dasharray=\"" + dash + "\"") + "/>\n";
  }
  void polyline(const Series& s, const std::string& color) {
    std::string pts;
    double prev_y = 0;
    bool first = true;
    for (auto [x, y] : s.pts) {
      if (!usable(x, logx_) || !usable(y, logy_)) continue;
      if (s.step && !first) pts += svg_num(px(x)) + "," + svg_num(prev_y) + " ";
      prev_y = py(y);
      pts += svg_num(px(x)) + "," + svg_num(prev_y) + " ";
      first = false;
    }
    body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  }
  void legend(const std::vector<std::pair<std::string, std::string>>& entries) {
    double y = T + 10;
    for (const auto& [label, color] : entries) {
      line(W - R + 10, y, W - R + 30, y, color);
      text(W - R + 35, y + 4, label, "start");
      y += 18;
    }
  }
  void text(double x, double y, const std::string& s, const std::string& anchor,
            const std::string& extra = "") {
    body_ += "<text x=\"" + svg_num(x) + "\" y=\"" + svg_num(y) + "\" text-anchor=\"" + anchor +
             "\" font-family=\"sans-serif\" font-size=\"12\"" + extra + ">" + xml_escape(s) + "</text>\n";
  }

  std::string finish() {
    std::string axes;
    const double pw = W - L - R, ph = H - T - B;
    axes += "<rect x=\"" + svg_num(L) + "\" y=\"" + svg_num(T) + "\" width=\"" + svg_num(pw) +
            "\" height=\"" + svg_num(ph) + "\" fill=\"none\" stroke=\"#000\"/>\n";
    for (int i = 0; i <= 5; ++i) {
      const double fx = x0_ + (x1_ - x0_) * i / 5, fy = y0_ + (y1_ - y0_) * i / 5;
      const double sx = L + pw * i / 5, sy = H - B - ph * i / 5;
      axes += "<line x1=\"" + svg_num(sx) + "\" y1=\"" + svg_num(H - B) + "\" x2=\"" + svg_num(sx) +
              "\" y2=\"" + svg_num(H - B + 5) + "\" stroke=\"#000\"/>\n";
      axes += "<text x=\"" + svg_num(sx) + "\" y=\"" + svg_num(H - B + 18) +
              "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
              svg_num(logx_ ? std::pow(10.0, fx) : fx) + "</text>\n";
      axes += "<line x1=\"" + svg_num(L - 5) + "\" y1=\"" + svg_num(sy) + "\" x2=\"" + svg_num(L) +
              "\" y2=\"" + svg_num(sy) + "\" stroke=\"#000\"/>\n";
      axes += "<text x=\"" + svg_num(L - 8) + "\" y=\"" + svg_num(sy + 4) +
              "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
              svg_num(logy_ ? std::pow(10.0, fy) : fy) + "</text>\n";
    }
    std::string head = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                       "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_num(W) +
                       "\" height=\"" + svg_num(H) + "\" viewBox=\"0 0 " + svg_num(W) + " " +
                       svg_num(H) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
    head += "<text x=\"" + svg_num(W / 2) + "\" y=\"25\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
            xml_escape(title_) + "</text>\n";
    head += "<text x=\"" + svg_num(L + pw / 2) + "\" y=\"" + svg_num(H - 15) +
            "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
            xml_escape(xlabel_ + (logx_ ? " (log)" : "")) + "</text>\n";
    head += "<text x=\"20\" y=\"" + svg_num(T + ph / 2) +
            "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 20 " +
            svg_num(T + ph / 2) + ")\">" + xml_escape(ylabel_ + (logy_ ? " (log)" : "")) + "</text>\n";
    return head + axes + body_ + "</svg>\n";
  }

 private:
  double tx(double x) const { return logx_ ? std::log10(x) : x; }
  double ty(double y) const { return logy_ ? std::log10(y) : y; }
  static void pad(double& a, double& b) {
    if (a == b) {
      a -= 0.5;
      b += 0.5;
    } else {
      const double p = 0.05 * (b - a);
      a -= p;
      b += p;
    }
  }

  std::string title_, xlabel_, ylabel_;
  bool logx_, logy_;
  double x0_ = INFINITY, x1_ = -INFINITY, y0_ = INFINITY, y1_ = -INFINITY;
  std::string body_;
};

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  return colors[i % 8];
}

inline double require(const ResultRecord& r, const std::string& key) {
  const double v = r.number(key);
  if (std::isnan(v) && !r.get(key))
    throw UsageError("record " + r.case_id + " lacks numeric field " + key);
  return v;
}

inline std::string margin_histogram(const std::vector<ResultRecord>& records, int bins) {
  std::vector<double> m;
  for (const auto& r : records)
    if (std::isfinite(r.margin)) m.push_back(r.margin);
  if (m.empty()) throw UsageError("no finite margins to plot");
  const auto [lo_it, hi_it] = std::minmax_element(m.begin(), m.end());
  double lo = *lo_it, hi = *hi_it;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::vector<int> counts(static_cast<std::size_t>(bins), 0);
  for (double v : m) {
    int b = static_cast<int>((v - lo) / (hi - lo) * bins);
    counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))]++;
  }
  Series s;
  s.pts.emplace_back(lo, 0.0);
  s.pts.emplace_back(hi, static_cast<double>(*std::max_element(counts.begin(), counts.end())));
  Canvas c("margin histogram: " + records.front().experiment, "margin", "count", false, false);
  c.fit({s});
  c.set_y_floor(0.0);
  const double w = (hi - lo) / bins;
  for (int i = 0; i < bins; ++i) {
    const double x0 = c.px(lo + i * w), x1 = c.px(lo + (i + 1) * w);
    const double y = c.py(counts[static_cast<std::size_t>(i)]), y0 = c.py(0.0);
    c.rect(x0, y, x1 - x0, y0 - y, "#7aa6d6");
  }
  if (lo <= 0.0 && 0.0 <= hi) c.line(c.px(0.0), c.py(0.0), c.px(0.0), 50, "#d62728", "4,3");
  return c.finish();
}

inline std::string census_plot(const std::vector<ResultRecord>& records) {
  std::vector<Series> series(3);
  series[0].label = "packs";
  series[1].label = "exceptional packs";
  series[2].label = "orbits";
  std::vector<std::tuple<double, double, double, double>> rows;
  for (const auto& r : records)
    rows.emplace_back(require(r, "parameter"), require(r, "pack_count"),
                      require(r, "exceptional_count"), require(r, "orbit_count"));
  std::sort(rows.begin(), rows.end());
  for (auto& s : series) s.step = true;
  for (const auto& [a, p, e, o] : rows) {
    series[0].pts.emplace_back(a, p);
    series[1].pts.emplace_back(a, e);
    series[2].pts.emplace_back(a, o);
  }
  Canvas c("census: " + records.front().experiment, "parameter", "count", false, false);
  c.fit(series);
  c.set_y_floor(0.0);
  std::vector<std::pair<std::string, std::string>> legend;
  for (std::size_t i = 0; i < series.size(); ++i) {
    c.polyline(series[i], palette(i));
    legend.emplace_back(series[i].label, palette(i));
  }
  c.legend(legend);
  return c.finish();
}

inline std::string rho_plot(const std::vector<ResultRecord>& records) {
  std::map<std::pair<std::string, int>, Series> by_curve;
  for (const auto& r : records) {
    const int N = static_cast<int>(require(r, "N"));
    const FieldValue* kind = r.get("envelope_kind");
    const std::string k = kind && std::holds_alternative<std::string>(*kind) ? std::get<std::string>(*kind) : "";
    Series& s = by_curve[{k, N}];
    s.label = (k.empty() ? "" : k + " ") + "N=" + std::to_string(N);
    s.pts.emplace_back(require(r, "x"), require(r, "envelope"));
  }
  std::vector<Series> series;
  for (auto& [key, s] : by_curve) {
    std::sort(s.pts.begin(), s.pts.end());
    series.push_back(std::move(s));
  }
  Canvas c("rho envelope: " + records.front().experiment, "tail value", "envelope", true, true);
  c.fit(series);
  std::vector<std::pair<std::string, std::string>> legend;
  for (std::size_t i = 0; i < series.size(); ++i) {
    c.polyline(series[i], palette(i));
    legend.emplace_back(series[i].label, palette(i));
  }
  c.legend(legend);
  return c.finish();
}

}  // namespace detail

/// Self-contained SVG document for the records.
inline std::string plot_svg(const std::vector<ResultRecord>& records, PlotKind kind) {
  if (records.empty()) throw UsageError("cannot plot an empty record list");
  switch (kind) {
    case PlotKind::margin_histogram: return detail::margin_histogram(records, 30);
    case PlotKind::census_vs_parameter: return detail::census_plot(records);
    case PlotKind::rho_envelope: return detail::rho_plot(records);
  }
  throw UsageError("unknown plot kind");
}

/// Writes <out_dir>/<experiment>-<kind>.svg and returns its path.
inline std::filesystem::path plot(const std::vector<ResultRecord>& records, PlotKind kind,
                                  const std::filesystem::path& out_dir) {
  const std::string svg = plot_svg(records, kind);
  const std::filesystem::path path =
      out_dir / (records.front().experiment + "-" + to_string(kind) + ".svg");
  write_text(path, svg);
  return path;
}

}  // namespace unidym

#endif  // UNIDYM_PLOT_HPP
