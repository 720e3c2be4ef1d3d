#pragma once

// CSV output: '.' decimal point, '\n' line ends, 12 significant digits.

#include "aperiodica/diffract.hpp"

#include <cstdio>
#include <ostream>
#include <string>

namespace aperiodica::io {

inline std::string format_number(double x) {
  if (x == 0 || !std::isfinite(x)) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return "0";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// One row per point: physical coordinates, lattice coordinates, internal
/// coordinates (euclidean internal spaces only), weight if present, boundary flag.
inline void write_points_csv(std::ostream& os, const PointSet& ps) {
  const std::size_t d = ps.dim();
  const std::size_t r = ps.points.empty() ? (ps.scheme ? static_cast<std::size_t>(ps.scheme->rank) : 0) : ps.points[0].coords.size();
  const bool euclid = ps.scheme && !ps.scheme->internal.is_padic();
  const std::size_t m = euclid ? static_cast<std::size_t>(ps.scheme->internal.dim) : 0;
  std::string head;
  for (std::size_t i = 0; i < d; ++i) head += (i ? ",x" : "x") + std::to_string(i + 1);
  for (std::size_t i = 0; i < r; ++i) head += ",n" + std::to_string(i + 1);
  for (std::size_t i = 0; i < m; ++i) head += ",u" + std::to_string(i + 1);
  if (ps.weights) head += ",weight_re,weight_im";
  head += ",boundary\n";
  os << head;
  for (std::size_t j = 0; j < ps.points.size(); ++j) {
    const auto& p = ps.points[j];
    std::string line;
    for (std::size_t i = 0; i < p.phys.size(); ++i) line += (i ? "," : "") + format_number(p.phys[i]);
    for (long long c : p.coords) line += "," + std::to_string(c);
    if (m > 0) {
      const RealVector u = to_real(p.internal);
      for (std::size_t i = 0; i < m; ++i) line += "," + format_number(i < u.size() ? u[i] : 0.0);
    }
    if (ps.weights) line += "," + format_number(ps.weight(j).real()) + "," + format_number(ps.weight(j).imag());
    line += p.boundary ? ",1\n" : ",0\n";
    os << line;
  }
}

/// Predicted peaks, with measured intensities and relative errors where available.
inline void write_spectrum_csv(std::ostream& os, const Spectrum& sp, const std::vector<double>& measured = {}) {
  const std::size_t d = sp.peaks.empty() ? 0 : sp.peaks[0].k.size();
  std::string head;
  for (std::size_t i = 0; i < d; ++i) head += "k" + std::to_string(i + 1) + ",";
  head += "w,intensity";
  if (!measured.empty()) head += ",measured,rel_error";
  os << head << '\n';
  for (std::size_t j = 0; j < sp.peaks.size(); ++j) {
    const auto& p = sp.peaks[j];
    std::string line;
    for (double k : p.k) line += format_number(k) + ",";
    line += format_number(p.w) + "," + format_number(p.intensity);
    if (!measured.empty()) {
      if (j < measured.size()) {
        const double rel = p.intensity > 0 ? std::fabs(measured[j] - p.intensity) / p.intensity : 0.0;
        line += "," + format_number(measured[j]) + "," + format_number(rel);
      } else {
        line += ",,";
      }
    }
    os << line << '\n';
  }
}

}  // namespace aperiodica::io
