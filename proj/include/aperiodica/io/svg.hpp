#pragma once

// Plain SVG plots: scatter for point sets, stems for spectra. Output depends
// only on the input values, so identical input gives identical bytes.

#include "aperiodica/io/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace aperiodica::io {

struct SvgStyle {
  int width = 640;
  int height = 480;
  int margin = 56;
  double point_radius = 1.5;
  std::string title;
  std::string colour = "#1f4e79";
};

namespace detail {

inline std::string fmt(double x, int digits = 6) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  std::string s = buf;
  return s == "-0" ? "0" : s;
}

inline std::string escape(const std::string& s) {
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

/// 1, 2 or 5 times a power of ten, close to span / 5.
inline double nice_step(double span) {
  if (!(span > 0)) return 1;
  const double raw = span / 5;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1 : f < 3.5 ? 2 : f < 7.5 ? 5 : 10) * mag;
}

struct Axis {
  double lo = -1, hi = 1;

  static Axis fit(double lo, double hi) {
    if (!(lo <= hi)) return {};
    if (hi - lo < 1e-12) {
      const double pad = std::max(1.0, std::fabs(lo) * 0.1);
      return {lo - pad, hi + pad};
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
  }
  std::vector<double> ticks() const {
    const double st = nice_step(hi - lo);
    std::vector<double> out;
    for (double t = std::ceil(lo / st) * st; t <= hi + 1e-9 * st; t += st) out.push_back(std::fabs(t) < 1e-9 * st ? 0.0 : t);
    return out;
  }
};

class Canvas {
 public:
  Canvas(const SvgStyle& st, Axis x, Axis y) : st_(st), x_(x), y_(y) {}

  double px(double v) const { return st_.margin + (v - x_.lo) / (x_.hi - x_.lo) * (st_.width - 2 * st_.margin); }
  double py(double v) const { return st_.height - st_.margin - (v - y_.lo) / (y_.hi - y_.lo) * (st_.height - 2 * st_.margin); }

  std::string open(const std::string& xlabel, const std::string& ylabel) const {
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(st_.width) + "\" height=\"" + std::to_string(st_.height) +
         "\" viewBox=\"0 0 " + std::to_string(st_.width) + " " + std::to_string(st_.height) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(st_.width) + "\" height=\"" + std::to_string(st_.height) + "\" fill=\"white\"/>\n";
    const double x0 = st_.margin, x1 = st_.width - st_.margin, y0 = st_.height - st_.margin, y1 = st_.margin;
    s += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
    s += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x1) + "\" y2=\"" + fmt(y0) + "\"/>\n";
    s += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x0) + "\" y2=\"" + fmt(y1) + "\"/>\n";
    for (double t : x_.ticks())
      s += "<line x1=\"" + fmt(px(t)) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(px(t)) + "\" y2=\"" + fmt(y0 + 5) + "\"/>\n";
    for (double t : y_.ticks())
      s += "<line x1=\"" + fmt(x0 - 5) + "\" y1=\"" + fmt(py(t)) + "\" x2=\"" + fmt(x0) + "\" y2=\"" + fmt(py(t)) + "\"/>\n";
    s += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
    for (double t : x_.ticks())
      s += "<text x=\"" + fmt(px(t)) + "\" y=\"" + fmt(y0 + 18) + "\" text-anchor=\"middle\">" + fmt(t, 4) + "</text>\n";
    for (double t : y_.ticks())
      s += "<text x=\"" + fmt(x0 - 8) + "\" y=\"" + fmt(py(t) + 4) + "\" text-anchor=\"end\">" + fmt(t, 4) + "</text>\n";
    s += "<text x=\"" + fmt((x0 + x1) / 2) + "\" y=\"" + fmt(st_.height - 12.0) + "\" text-anchor=\"middle\">" + escape(xlabel) + "</text>\n";
    s += "<text x=\"14\" y=\"" + fmt((y0 + y1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " + fmt((y0 + y1) / 2) + ")\">" +
         escape(ylabel) + "</text>\n";
    if (!st_.title.empty())
      s += "<text x=\"" + fmt((x0 + x1) / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" + escape(st_.title) + "</text>\n";
    s += "</g>\n";
    return s;
  }

 private:
  SvgStyle st_;
  Axis x_, y_;
};

}  // namespace detail

/// Scatter of the first two coordinates; 1D sets go on the line y = 0.
inline std::string render_scatter(const std::vector<RealVector>& pts, const SvgStyle& style = {}) {
  double xl = 1, xh = -1, yl = 1, yh = -1;
  for (const auto& p : pts) {
    const double x = p.empty() ? 0 : p[0], y = p.size() > 1 ? p[1] : 0;
    if (xl > xh) xl = xh = x, yl = yh = y;
    xl = std::min(xl, x), xh = std::max(xh, x), yl = std::min(yl, y), yh = std::max(yh, y);
  }
  detail::Axis ax = pts.empty() ? detail::Axis{} : detail::Axis::fit(xl, xh);
  detail::Axis ay = pts.empty() ? detail::Axis{} : detail::Axis::fit(yl, yh);
  const detail::Canvas c(style, ax, ay);
  std::string s = c.open("x1", pts.empty() || pts[0].size() > 1 ? "x2" : "");
  s += "<g fill=\"" + style.colour + "\" stroke=\"none\">\n";
  for (const auto& p : pts) {
    const double x = p.empty() ? 0 : p[0], y = p.size() > 1 ? p[1] : 0;
    s += "<circle cx=\"" + detail::fmt(c.px(x)) + "\" cy=\"" + detail::fmt(c.py(y)) + "\" r=\"" + detail::fmt(style.point_radius) + "\"/>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

/// Stem plot of (k, intensity) pairs; k is the first coordinate of the peak position.
inline std::string render_stems(const std::vector<std::pair<double, double>>& stems, const SvgStyle& style = {}) {
  double xl = 1, xh = -1, top = 0;
  for (const auto& [k, v] : stems) {
    if (xl > xh) xl = xh = k;
    xl = std::min(xl, k), xh = std::max(xh, k), top = std::max(top, v);
  }
  const detail::Axis ax = stems.empty() ? detail::Axis{} : detail::Axis::fit(xl, xh);
  const detail::Axis ay{0, top > 0 ? top * 1.05 : 1};
  const detail::Canvas c(style, ax, ay);
  std::string s = c.open("k", "intensity");
  s += "<g stroke=\"" + style.colour + "\" stroke-width=\"1.5\">\n";
  for (const auto& [k, v] : stems)
    s += "<line x1=\"" + detail::fmt(c.px(k)) + "\" y1=\"" + detail::fmt(c.py(0)) + "\" x2=\"" + detail::fmt(c.px(k)) + "\" y2=\"" +
         detail::fmt(c.py(v)) + "\"/>\n";
  s += "</g>\n</svg>\n";
  return s;
}

inline std::string render_points(const PointSet& ps, const SvgStyle& style = {}) { return render_scatter(ps.physical(), style); }

inline std::string render_spectrum(const Spectrum& sp, const SvgStyle& style = {}) {
  std::vector<std::pair<double, double>> stems;
  for (const auto& p : sp.peaks) stems.emplace_back(p.k.empty() ? 0.0 : p.k[0], p.intensity);
  return render_stems(stems, style);
}

}  // namespace aperiodica::io
