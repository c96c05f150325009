#pragma once

// Report artifacts: CSV tables, JSON documents with a versioned schema, and
// self-contained SVG line plots. Every writer is byte-deterministic.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdisc/fit.hpp"
#include "hdisc/rates.hpp"

namespace hdisc {

inline constexpr const char* report_schema = "hdisc.report/1";

using Json = nlohmann::ordered_json;

// Non-finite values become null; JSON has no inf or nan.
inline Json json_number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json json_fit(const LinearFit& f) {
  return Json{{"slope", json_number(f.slope)}, {"intercept", json_number(f.intercept)}, {"residual_norm", json_number(f.residual_norm)}, {"count", f.count}};
}

inline Json json_verdicts(const std::vector<Verdict>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(Json{{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  return a;
}

inline Json json_complex(cplx z) { return Json::array({json_number(z.real()), json_number(z.imag())}); }

inline Json json_document(const std::string& command) { return Json{{"schema", report_schema}, {"command", command}}; }

inline std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw std::invalid_argument("CsvTable: no columns");
  }

  static std::string cell(double x) { return fmt_double(x); }
  static std::string cell(std::uint64_t x) { return std::to_string(x); }
  static std::string cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }

  void add(std::vector<std::string> row) {
    if (row.size() != columns_.size()) throw std::invalid_argument("CsvTable: row width does not match the header");
    rows_.push_back(std::move(row));
  }

  [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }

  [[nodiscard]] std::string str() const {
    std::string s;
    const auto line = [&s](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
      s += "\n";
    };
    line(columns_);
    for (const auto& r : rows_) line(r);
    return s;
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool points = false;  // markers instead of a polyline
};

namespace detail {
inline std::string xml_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '&': o += "&amp;"; break;
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}
inline std::string svg_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}
inline std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x + 0.0);
  return buf;
}
}  // namespace detail

// Line plot on linear axes; callers pass transformed coordinates (log n etc.)
// and say so in the axis labels. Non-finite points are dropped.
inline std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel, const std::vector<PlotSeries>& series) {
  constexpr double W = 720, H = 460, L = 80, R = 20, T = 40, B = 60;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  const auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  using detail::svg_num;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_num(W) + "\" height=\"" + svg_num(H) + "\" viewBox=\"0 0 " + svg_num(W) + " " +
                  svg_num(H) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + svg_num(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + detail::xml_escape(title) + "</text>\n";
  s += "<rect x=\"" + svg_num(L) + "\" y=\"" + svg_num(T) + "\" width=\"" + svg_num(W - L - R) + "\" height=\"" + svg_num(H - T - B) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = x0 + (x1 - x0) * k / 5.0, yv = y0 + (y1 - y0) * k / 5.0;
    s += "<line x1=\"" + svg_num(px(xv)) + "\" y1=\"" + svg_num(H - B) + "\" x2=\"" + svg_num(px(xv)) + "\" y2=\"" + svg_num(H - B + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + svg_num(px(xv)) + "\" y=\"" + svg_num(H - B + 18) + "\" text-anchor=\"middle\">" + detail::tick_label(xv) + "</text>\n";
    s += "<line x1=\"" + svg_num(L - 5) + "\" y1=\"" + svg_num(py(yv)) + "\" x2=\"" + svg_num(L) + "\" y2=\"" + svg_num(py(yv)) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + svg_num(L - 8) + "\" y=\"" + svg_num(py(yv) + 4) + "\" text-anchor=\"end\">" + detail::tick_label(yv) + "</text>\n";
  }
  s += "<text x=\"" + svg_num((L + W - R) / 2) + "\" y=\"" + svg_num(H - 15) + "\" text-anchor=\"middle\">" + detail::xml_escape(xlabel) + "</text>\n";
  s += "<text x=\"18\" y=\"" + svg_num((T + H - B) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " + svg_num((T + H - B) / 2) + ")\">" +
       detail::xml_escape(ylabel) + "</text>\n";
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& ser = series[k];
    const std::string color = palette[k % 6];
    std::string pts;
    for (std::size_t i = 0; i < std::min(ser.x.size(), ser.y.size()); ++i) {
      if (!std::isfinite(ser.x[i]) || !std::isfinite(ser.y[i])) continue;
      if (ser.points) {
        s += "<circle cx=\"" + svg_num(px(ser.x[i])) + "\" cy=\"" + svg_num(py(ser.y[i])) + "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
      } else {
        pts += (pts.empty() ? "" : " ") + svg_num(px(ser.x[i])) + "," + svg_num(py(ser.y[i]));
      }
    }
    if (!ser.points && !pts.empty()) s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    const double ly = T + 16 + 16 * static_cast<double>(k);
    s += "<rect x=\"" + svg_num(L + 10) + "\" y=\"" + svg_num(ly - 9) + "\" width=\"12\" height=\"3\" fill=\"" + color + "\"/>\n";
    s += "<text x=\"" + svg_num(L + 28) + "\" y=\"" + svg_num(ly - 4) + "\">" + detail::xml_escape(ser.label) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace hdisc
