#pragma once

// Autocorrelation and structure factors of finite samples, the predicted Bragg
// spectrum from the dual lattice and the window transform, and comparisons.
// Intensities are per unit volume: a Bragg peak at k carries density^2 w(k).

#include "aperiodica/construct.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <fftw3.h>

#include <map>
#include <mutex>

namespace aperiodica {

// ---------------------------------------------------------------------------
// autocorrelation

struct AutoTerm {
  IntVec z;          // lattice coordinates of x - y (empty for float samples)
  RealVector phys;   // physical difference vector
  Complex eta;       // sum of w(x) conj w(y) over pairs with x - y = z, per unit volume
};

struct Autocorrelation {
  double s = 0;
  double volume = 0;
  std::vector<AutoTerm> terms;  // sorted by z (or by phys for float samples)

  const AutoTerm* find(const IntVec& z) const {
    auto it = std::lower_bound(terms.begin(), terms.end(), z, [](const AutoTerm& t, const IntVec& v) { return t.z < v; });
    return it != terms.end() && it->z == z ? &*it : nullptr;
  }
};

/// Finite-s approximation (1 / vol B_s) sum over x, y in Lambda_s of w(x) conj w(y) delta_{x-y}.
inline Autocorrelation autocorrelation(const PointSet& ps, double s) {
  if (ps.region.kind != Region::Kind::ball) throw std::invalid_argument("autocorrelation: sample must be a ball");
  if (s > ps.region.radius * (1 + 1e-12)) throw std::invalid_argument("autocorrelation: s exceeds the sampled radius");
  const std::size_t d = ps.dim();
  Autocorrelation out;
  out.s = s;
  out.volume = Region::ball(s).volume(d);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (norm2(ps.points[i].phys) <= s * s * (1 + 1e-12)) idx.push_back(i);
  const bool exact = ps.physical_is_lattice && !ps.empty() && !ps.points[0].coords.empty();
  // float samples are keyed by the difference rounded to 1e-9
  auto key_of = [&](std::size_t a, std::size_t b) {
    if (exact) return ps.points[a].coords - ps.points[b].coords;
    IntVec k(d);
    for (std::size_t i = 0; i < d; ++i) k[i] = std::llround((ps.points[a].phys[i] - ps.points[b].phys[i]) * 1e9);
    return k;
  };
  std::map<IntVec, std::pair<RealVector, Complex>> total;
  std::mutex merge;
  parallel_chunks(idx.size(), [&](std::size_t lo, std::size_t hi) {
    std::map<IntVec, std::pair<RealVector, Complex>> local;
    for (std::size_t a = lo; a < hi; ++a)
      for (std::size_t b : idx) {
        const std::size_t i = idx[a];
        auto [it, fresh] = local.try_emplace(key_of(i, b));
        if (fresh) {
          it->second.first.resize(d);
          for (std::size_t c = 0; c < d; ++c) it->second.first[c] = ps.points[i].phys[c] - ps.points[b].phys[c];
        }
        it->second.second += ps.weight(i) * std::conj(ps.weight(b));
      }
    std::lock_guard lock(merge);
    for (auto& [k, v] : local) {
      auto [it, fresh] = total.try_emplace(k, v);
      if (!fresh) it->second.second += v.second;
    }
  }, 16);
  out.terms.reserve(total.size());
  for (auto& [k, v] : total) out.terms.push_back({exact ? k : IntVec{}, v.first, v.second / out.volume});
  if (!exact) {
    std::sort(out.terms.begin(), out.terms.end(), [](const AutoTerm& a, const AutoTerm& b) { return a.phys < b.phys; });
  }
  return out;
}

// ---------------------------------------------------------------------------
// structure factor

/// I(k) = |sum w(x) exp(-2 pi i k.x)|^2 / vol(region) for every k in ks.
inline std::vector<double> structure_factor(const PointSet& ps, const std::vector<RealVector>& ks) {
  const double vol = ps.region.volume(ps.dim());
  std::vector<double> out(ks.size(), 0.0);
  parallel_for(ks.size(), [&](std::size_t j) {
    const RealVector& k = ks[j];
    double re = 0, im = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      double phase = 0;
      const auto& x = ps.points[i].phys;
      for (std::size_t c = 0; c < k.size(); ++c) phase += k[c] * x[c];
      phase -= std::floor(phase);
      const double a = -2 * std::numbers::pi * phase;
      const Complex t = ps.weight(i) * Complex(std::cos(a), std::sin(a));
      re += t.real();
      im += t.imag();
    }
    out[j] = (re * re + im * im) / vol;
  }, 8);
  return out;
}

inline double structure_factor(const PointSet& ps, const RealVector& k) { return structure_factor(ps, std::vector<RealVector>{k})[0]; }

/// I(j / M) on the grid (Z / M)^d for samples supported on Z^d, by folding the
/// points modulo M and one FFT. Row-major, first axis slowest.
inline std::vector<double> structure_factor_grid(const PointSet& ps, int m) {
  const std::size_t d = ps.dim();
  if (d < 1 || d > 3) throw unsupported_error("structure_factor_grid: dimension 1 to 3 only");
  if (m < 1) throw std::invalid_argument("structure_factor_grid: grid size must be positive");
  std::size_t cells = 1;
  for (std::size_t i = 0; i < d; ++i) cells *= static_cast<std::size_t>(m);
  fftw_complex* buf = fftw_alloc_complex(cells);
  for (std::size_t i = 0; i < cells; ++i) buf[i][0] = buf[i][1] = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    std::size_t cell = 0;
    for (double x : ps.points[i].phys) {
      const double r = std::round(x);
      if (std::fabs(x - r) > 1e-9) {
        fftw_free(buf);
        throw std::invalid_argument("structure_factor_grid: points must have integer coordinates");
      }
      const long long v = static_cast<long long>(r) % m;
      cell = cell * static_cast<std::size_t>(m) + static_cast<std::size_t>(v < 0 ? v + m : v);
    }
    const Complex w = ps.weight(i);
    buf[cell][0] += w.real();
    buf[cell][1] += w.imag();
  }
  std::vector<int> n(d, m);
  static std::mutex planner;  // the FFTW planner is not thread safe
  fftw_plan plan;
  {
    std::lock_guard lock(planner);
    plan = fftw_plan_dft(static_cast<int>(d), n.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  const double vol = ps.region.volume(d);
  std::vector<double> out(cells);
  for (std::size_t i = 0; i < cells; ++i) out[i] = (buf[i][0] * buf[i][0] + buf[i][1] * buf[i][1]) / vol;
  {
    std::lock_guard lock(planner);
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return out;
}

// ---------------------------------------------------------------------------
// predicted spectrum

struct Peak {
  RealVector k;          // physical position
  IntVec dual;           // coordinates in the dual basis (Euclidean internal spaces)
  DualPoint internal;    // internal component of the dual vector
  double w = 0;          // |chi^(-k*) / vol W|^2
  double intensity = 0;  // density^2 w, after any rescaling
};

struct Spectrum {
  std::vector<Peak> peaks;  // strongest first; ties by position
  double density = 0;
  double flat_background = 0;
  double cutoff = 0;
  double floor = 0;
  double tail_bound = 0;  // bound on w(k) for every omitted peak inside the cutoff
};

namespace detail {

inline void sort_peaks(std::vector<Peak>& peaks) {
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
    if (std::fabs(a.w - b.w) > 1e-12 * std::max(a.w, b.w)) return a.w > b.w;
    return a.k < b.k;
  });
}

inline Spectrum bragg_euclidean(const CutProjectScheme& s, const Window& w, double cutoff, double floor, const EnumerationOptions& opt) {
  const DualLattice dual = dual_lattice(s);
  const double vol = haar_volume(w);
  Spectrum out;
  out.density = vol / s.covolume;
  out.cutoff = cutoff;
  out.floor = floor;
  const std::size_t n = static_cast<std::size_t>(s.rank), d = static_cast<std::size_t>(s.d);
  // w(k) <= bound(|k*|)^2, so peaks above the floor have |k*| <= r_int
  double r_int = 0;
  if (w.dim() > 0) {
    if (floor <= 0) throw std::invalid_argument("bragg_predict: floor must be positive");
    const double width = w.min_width();
    r_int = std::max(static_cast<double>(w.dim()) / (std::numbers::pi * width * std::sqrt(floor)), 1.0 / width);
    out.tail_bound = floor;
  }
  // columns of the dual basis in physical / internal parts: k(m) = sum m_i row_i
  Matrix<double> g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double pp = 0, ii = 0;
      for (std::size_t c = 0; c < dual.basis.cols(); ++c) (c < d ? pp : ii) += dual.basis(i, c) * dual.basis(j, c);
      g(i, j) = pp / (cutoff * cutoff) + (r_int > 0 ? ii / (r_int * r_int) : 0.0);
    }
  std::vector<Peak> peaks;
  enumerate_ellipsoid(g, RealVector(n, 0.0), 2.0, [&](const IntVec& m) {
    const RealVector kp = dual.physical(m), ki = dual.internal(m);
    if (norm2(kp) > cutoff * cutoff * (1 + 1e-12)) return;
    RealVector neg(ki.size());
    for (std::size_t i = 0; i < ki.size(); ++i) neg[i] = -ki[i];
    const double ww = ki.empty() ? 1.0 : std::norm(indicator_ft(w, neg) / vol);
    if (ww < floor) return;
    peaks.push_back({kp, m, ki, ww, out.density * out.density * ww});
  }, opt);
  sort_peaks(peaks);
  out.peaks = std::move(peaks);
  return out;
}

/// Physical lattice B Z^d with internal map A into Z_p^m: a character index
/// q in (p^-K Z / Z)^m pairs with k = B^{-T}(n - A^T q), n in Z^d.
inline Spectrum bragg_padic(const CutProjectScheme& s, const Window& w, double cutoff, double floor, int depth, const EnumerationOptions& opt) {
  const auto* cu = std::get_if<CosetUnionWindow>(&w.variant());
  if (!cu) throw std::invalid_argument("bragg_predict: p-adic schemes need a coset-union window");
  const std::size_t d = static_cast<std::size_t>(s.d), m = static_cast<std::size_t>(cu->m);
  if (static_cast<std::size_t>(s.rank) != d) throw unsupported_error("bragg_predict: p-adic schemes need rank equal to d");
  const Matrix<double> b = s.physical_matrix();
  const Matrix<double> binv_t = inverse(b).transpose();
  const double vol = haar_volume(w);
  Spectrum out;
  out.density = vol / s.covolume;
  out.cutoff = cutoff;
  out.floor = floor;
  const BigInt pk = pow_big(BigInt(cu->p), static_cast<unsigned>(depth));
  // tail: characters of exact order p^j, j > depth, only see cosets with k >= j
  double tail = 0;
  for (const auto& c : cu->cosets)
    if (c.k > depth) tail += std::pow(static_cast<double>(cu->p), -static_cast<double>(cu->m) * c.k);
  out.tail_bound = std::pow(tail / vol, 2);
  // Gram of B^{-T} for the ellipsoid in n
  const Matrix<double> g0 = binv_t.transpose() * binv_t;
  Matrix<double> g(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) g(i, j) = g0(i, j) / (cutoff * cutoff);
  const std::size_t count = static_cast<std::size_t>(pk.convert_to<unsigned long long>());
  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= count;
  std::vector<std::vector<Peak>> found(total);
  parallel_for(total, [&](std::size_t idx) {
    std::vector<Rational> q(m);
    std::size_t rest = idx;
    for (std::size_t i = 0; i < m; ++i) {
      q[i] = Rational(BigInt(static_cast<unsigned long long>(rest % count)), pk);
      rest /= count;
    }
    const double ww = std::norm(indicator_ft(w, q) / vol);
    if (ww < floor) return;
    // A^T q as reals: the centre of the ellipsoid in n
    RealVector atq(d, 0.0);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < m; ++i) atq[j] += numerator(s.inner(i, j).a()).convert_to<double>() * to_double(q[i]);
    enumerate_ellipsoid(g, atq, 1.0, [&](const IntVec& nn) {
      RealVector k(d, 0.0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) k[i] += binv_t(i, j) * (static_cast<double>(nn[j]) - atq[j]);
      if (norm2(k) > cutoff * cutoff * (1 + 1e-12)) return;
      found[idx].push_back({k, {}, q, ww, out.density * out.density * ww});
    }, opt);
  }, 16);
  for (auto& f : found)
    for (auto& p : f) out.peaks.push_back(std::move(p));
  sort_peaks(out.peaks);
  return out;
}

}  // namespace detail

/// Bragg peaks with |k| <= cutoff and w(k) >= floor. For p-adic internal spaces
/// characters are enumerated up to denominator p^depth.
inline Spectrum bragg_predict(const CutProjectScheme& s, const Window& w, double cutoff, double floor = 1e-3, int depth = 6, const EnumerationOptions& opt = {}) {
  if (!(cutoff > 0)) throw std::invalid_argument("bragg_predict: cutoff must be positive");
  if (w.is_empty()) throw std::invalid_argument("bragg_predict: empty window");
  if (!w.is_regular()) throw std::invalid_argument("bragg_predict: window is not regular");
  detail::check_window_fits(s, w);
  if (s.internal.is_padic()) {
    if (depth < 0 || depth > 20) throw std::invalid_argument("bragg_predict: depth must be in 0..20");
    return detail::bragg_padic(s, w, cutoff, floor, depth, opt);
  }
  return detail::bragg_euclidean(s, w, cutoff, floor, opt);
}

/// (m1)^2 times the peaks plus the flat term d (m2 - m1^2).
inline Spectrum stochastic_expectation(const Spectrum& predicted, double density, double m1, double m2) {
  if (m2 < m1 * m1 * (1 - 1e-15)) throw std::invalid_argument("stochastic_expectation: need m2 >= m1^2");
  Spectrum out = predicted;
  for (auto& p : out.peaks) p.intensity *= m1 * m1;
  out.flat_background = predicted.flat_background * m1 * m1 + density * std::max(0.0, m2 - m1 * m1);
  return out;
}

// ---------------------------------------------------------------------------
// measuring peaks

namespace detail {

/// |FT of the region indicator|, used for the finite-size peak shape.
inline double region_ft_abs(const Region& region, const RealVector& k) {
  const std::size_t d = k.size();
  if (region.kind == Region::Kind::box) {
    double t = 1;
    for (std::size_t i = 0; i < d; ++i) {
      const double len = region.hi[i] - region.lo[i];
      const double z = std::numbers::pi * k[i] * len;
      t *= std::fabs(z) < 1e-12 ? len : std::fabs(std::sin(z) / (std::numbers::pi * k[i]));
    }
    return t;
  }
  const double r = region.radius, s = std::sqrt(norm2(k));
  if (s * r < 1e-12) return region.volume(d);
  const double nu = static_cast<double>(d) / 2;
  return std::fabs(std::pow(r / s, nu) * std::cyl_bessel_j(nu, 2 * std::numbers::pi * r * s));
}

/// Gauss-Legendre nodes on [-delta, delta]^d.
inline std::vector<std::pair<RealVector, double>> cube_nodes(std::size_t d, double delta, int panels) {
  using G = boost::math::quadrature::gauss<double, 20>;
  std::vector<std::pair<double, double>> line;
  const double h = 2 * delta / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = -delta + (p + 0.5) * h;
    for (std::size_t i = 0; i < G::abscissa().size(); ++i)
      for (double sgn : {-1.0, 1.0}) line.emplace_back(mid + sgn * G::abscissa()[i] * h / 2, G::weights()[i] * h / 2);
  }
  std::vector<std::pair<RealVector, double>> out{{RealVector{}, 1.0}};
  for (std::size_t ax = 0; ax < d; ++ax) {
    std::vector<std::pair<RealVector, double>> next;
    for (const auto& [x, wx] : out)
      for (const auto& [t, wt] : line) {
        RealVector y = x;
        y.push_back(t);
        next.emplace_back(std::move(y), wx * wt);
      }
    out = std::move(next);
  }
  return out;
}

inline double sample_radius(const Region& r, std::size_t d) {
  if (r.kind == Region::Kind::ball) return r.radius;
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d; ++i) m = std::min(m, (r.hi[i] - r.lo[i]) / 2);
  return m;
}

}  // namespace detail

struct PeakMeasureOptions {
  double width = 0;  // half-width of the integration cube; 0 means 1/R
  int panels = 0;    // per axis; 0 picks 4 in 1D, 2 otherwise
};

/// Integrated intensity of I around each k0 divided by the mass the
/// finite-size kernel puts in the same cube: an estimate of the peak weight.
inline std::vector<double> measure_peaks(const PointSet& ps, const std::vector<RealVector>& centres, PeakMeasureOptions opt = {}) {
  const std::size_t d = ps.dim();
  const double R = detail::sample_radius(ps.region, d);
  const double delta = opt.width > 0 ? opt.width : 1 / R;
  const int panels = opt.panels > 0 ? opt.panels : (d == 1 ? 4 : 2);
  const auto nodes = detail::cube_nodes(d, delta, panels);
  const double vol = ps.region.volume(d);
  double kernel = 0;
  for (const auto& [k, wt] : nodes) kernel += wt * std::pow(detail::region_ft_abs(ps.region, k), 2) / vol;
  std::vector<RealVector> ks;
  ks.reserve(centres.size() * nodes.size());
  for (const auto& c : centres)
    for (const auto& [k, wt] : nodes) {
      RealVector x = c;
      for (std::size_t i = 0; i < d; ++i) x[i] += k[i];
      ks.push_back(std::move(x));
    }
  const auto vals = structure_factor(ps, ks);
  std::vector<double> out(centres.size(), 0.0);
  for (std::size_t c = 0; c < centres.size(); ++c)
    for (std::size_t j = 0; j < nodes.size(); ++j) out[c] += nodes[j].second * vals[c * nodes.size() + j];
  for (auto& v : out) v /= kernel;
  return out;
}

struct OffPeakStats {
  double max = 0;
  double mean = 0;
  double reference = 0;  // I(0) of the sample
  double ratio = 0;      // max / reference
  std::size_t mesh_points = 0;
};

/// I(k) over a mesh of the cube [-extent, extent]^d, keeping only points at
/// distance >= exclusion from every predicted peak (default 10 / R).
inline OffPeakStats off_peak_background(const PointSet& ps, const Spectrum& predicted, double extent, double step, double exclusion = 0) {
  const std::size_t d = ps.dim();
  const double R = detail::sample_radius(ps.region, d);
  if (exclusion <= 0) exclusion = 10 / R;
  std::vector<RealVector> peaks;
  for (const auto& p : predicted.peaks) peaks.push_back(p.k);
  if (peaks.empty()) peaks.push_back(RealVector(d, 0.0));
  SpatialGrid grid(peaks, std::max(exclusion, 1e-9));
  std::vector<RealVector> mesh;
  const long n = static_cast<long>(std::floor(extent / step + 1e-9));
  std::vector<long> k(d, -n);
  while (true) {
    RealVector x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<double>(k[i]) * step;
    bool clear = true;
    grid.for_each_within(x, exclusion, [&](std::size_t) { clear = false; });
    if (clear) mesh.push_back(std::move(x));
    std::size_t i = 0;
    while (i < d && ++k[i] > n) k[i++] = -n;
    if (i == d) break;
  }
  OffPeakStats out;
  out.mesh_points = mesh.size();
  out.reference = structure_factor(ps, RealVector(d, 0.0));
  if (mesh.empty()) return out;
  const auto vals = structure_factor(ps, mesh);
  out.max = *std::max_element(vals.begin(), vals.end());
  out.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
  out.ratio = out.reference > 0 ? out.max / out.reference : 0.0;
  return out;
}

struct SpectrumComparison {
  std::vector<double> predicted, measured, rel_error;
  double max_rel_error = 0;
  double mean_rel_error = 0;
  std::optional<OffPeakStats> background;

  bool pass(double peak_tolerance, double background_tolerance) const {
    return max_rel_error <= peak_tolerance && (!background || background->ratio <= background_tolerance);
  }
};

/// Per-peak relative error of measured intensities against the first
/// measured.size() predicted peaks.
inline SpectrumComparison compare_spectra(const std::vector<double>& measured, const Spectrum& predicted) {
  if (measured.size() > predicted.peaks.size()) throw std::invalid_argument("compare_spectra: more measurements than predicted peaks");
  SpectrumComparison out;
  out.measured = measured;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    const double p = predicted.peaks[i].intensity;
    out.predicted.push_back(p);
    const double e = p > 0 ? std::fabs(measured[i] - p) / p : std::fabs(measured[i]);
    out.rel_error.push_back(e);
    out.max_rel_error = std::max(out.max_rel_error, e);
    out.mean_rel_error += e;
  }
  if (!measured.empty()) out.mean_rel_error /= static_cast<double>(measured.size());
  return out;
}

/// Measures the `top` strongest predicted peaks in the sample and the off-peak
/// background over [-extent, extent]^d.
inline SpectrumComparison diffraction_check(const PointSet& ps, const Spectrum& predicted, std::size_t top, double extent, double step) {
  top = std::min(top, predicted.peaks.size());
  std::vector<RealVector> centres;
  for (std::size_t i = 0; i < top; ++i) centres.push_back(predicted.peaks[i].k);
  auto out = compare_spectra(measure_peaks(ps, centres), predicted);
  out.background = off_peak_background(ps, predicted, extent, step);
  return out;
}

/// Grid points of (Z / M)^d where I / I(0) >= threshold, as positions in [0, 1)^d.
inline std::vector<RealVector> grid_peaks(const std::vector<double>& grid, std::size_t d, int m, double threshold) {
  std::vector<RealVector> out;
  if (grid.empty()) return out;
  const double ref = grid[0];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < threshold * ref) continue;
    RealVector k(d);
    std::size_t rest = i;
    for (std::size_t ax = d; ax-- > 0;) {
      k[ax] = static_cast<double>(rest % static_cast<std::size_t>(m)) / m;
      rest /= static_cast<std::size_t>(m);
    }
    out.push_back(std::move(k));
  }
  return out;
}

}  // namespace aperiodica
