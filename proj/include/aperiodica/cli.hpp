#pragma once

// Command-line front end: generate, analyze, diffract, demo.
// Exit status: 0 success, 1 bad input or unsupported combination,
// 2 a numeric threshold was missed.

#include "aperiodica/analyze.hpp"
#include "aperiodica/diffract.hpp"
#include "aperiodica/io/csv.hpp"
#include "aperiodica/io/descriptor.hpp"
#include "aperiodica/io/svg.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace aperiodica::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kThreshold = 2 };

using io::json;

struct RunConfig {
  std::string command;  // generate | analyze | diffract | demo
  std::string demo;     // fibonacci | icosian | h3 | robinson | visible
  std::string scheme = "fibonacci";
  std::string window = "default";
  std::optional<double> radius;
  std::uint64_t seed = 1;
  double occupancy = 1;  // Bernoulli thinning probability
  double k_cutoff = 3;
  double floor = 1e-2;
  std::size_t top = 10;
  double peak_tol = 0.02;
  double background_tol = 0.01;
  double min_p = 0.01;
  std::string out_dir = ".";
  std::string format = "csv";
  bool svg = false;
};

struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names{"fibonacci", "icosian", "h3", "robinson", "visible"};
  return names;
}

inline void validate(const RunConfig& c) {
  const std::vector<std::string> commands{"generate", "analyze", "diffract", "demo"};
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end()) throw validation_error("unknown command '" + c.command + "'");
  if (c.command == "demo" && std::find(demo_names().begin(), demo_names().end(), c.demo) == demo_names().end())
    throw validation_error("unknown demo '" + c.demo + "'");
  if (c.radius && !(*c.radius > 0)) throw validation_error("--radius must be positive");
  if (!(c.k_cutoff > 0)) throw validation_error("--k-cutoff must be positive");
  if (!(c.floor > 0 && c.floor <= 1)) throw validation_error("--floor must lie in (0, 1]");
  if (!(c.peak_tol > 0) || !(c.background_tol > 0) || !(c.min_p > 0)) throw validation_error("thresholds must be positive");
  if (!(c.occupancy > 0 && c.occupancy <= 1)) throw validation_error("--occupancy must lie in (0, 1]");
  if (c.top == 0) throw validation_error("--top must be positive");
  if (c.format != "csv" && c.format != "json") throw validation_error("--format must be csv or json");
}

namespace detail {

class Output {
 public:
  explicit Output(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) throw validation_error("cannot create output directory '" + dir + "'");
  }

  void write(const std::string& name, const std::string& text) {
    std::ofstream out(dir_ / name, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    written_.push_back(name);
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> written_;
};

inline json points_json(const PointSet& ps) {
  json pts = json::array();
  for (const auto& p : ps.points) pts.push_back({{"x", p.phys}, {"n", p.coords}, {"boundary", p.boundary}});
  return {{"dimension", ps.dim()}, {"region", ps.region.describe()}, {"count", ps.size()}, {"points", pts}};
}

inline void write_points(Output& out, const PointSet& ps, const std::string& format) {
  if (format == "json") {
    out.write("points.json", points_json(ps).dump(1) + "\n");
  } else {
    std::ostringstream os;
    io::write_points_csv(os, ps);
    out.write("points.csv", os.str());
  }
}

inline void write_spectrum(Output& out, const Spectrum& sp, const std::vector<double>& measured = {}) {
  std::ostringstream os;
  io::write_spectrum_csv(os, sp, measured);
  out.write("spectrum.csv", os.str());
}

inline void write_report(Output& out, const json& report) { out.write("report.json", report.dump(2) + "\n"); }

inline double expected_density(const CutProjectScheme& s, const Window& w) {
  if (w.is_empty()) return 0;
  return haar_volume(w) / s.covolume;
}

inline json peaks_json(const Spectrum& sp, std::size_t n) {
  json out = json::array();
  for (std::size_t i = 0; i < std::min(n, sp.peaks.size()); ++i) out.push_back({{"k", sp.peaks[i].k}, {"w", sp.peaks[i].w}, {"intensity", sp.peaks[i].intensity}});
  return out;
}

inline json comparison_json(const SpectrumComparison& c) {
  json j{{"predicted", c.predicted}, {"measured", c.measured}, {"rel_error", c.rel_error}, {"max_rel_error", c.max_rel_error},
         {"mean_rel_error", c.mean_rel_error}};
  if (c.background)
    j["background"] = {{"max", c.background->max}, {"mean", c.background->mean}, {"reference", c.background->reference},
                       {"ratio", c.background->ratio}, {"mesh_points", c.background->mesh_points}};
  return j;
}

inline bool slab_window(const Window& w) {
  return std::holds_alternative<IntervalWindow>(w.variant()) || std::holds_alternative<BoxWindow>(w.variant());
}

// Spectrum check shared by diffract and the fibonacci demo. Background only on
// lines, where the mesh stays small.
inline SpectrumComparison spectrum_check(const PointSet& ps, const Spectrum& sp, const RunConfig& c) {
  const std::size_t top = std::min(c.top, sp.peaks.size());
  std::vector<RealVector> centres;
  for (std::size_t i = 0; i < top; ++i) centres.push_back(sp.peaks[i].k);
  auto cmp = compare_spectra(measure_peaks(ps, centres), sp);
  if (ps.dim() == 1 && !ps.empty()) cmp.background = off_peak_background(ps, sp, c.k_cutoff, 5e-4);
  return cmp;
}

inline PointSet sample(const RunConfig& c, const CutProjectScheme& s, const Window& w, double default_radius) {
  auto ps = enumerate_model_set(s, w, c.radius.value_or(default_radius));
  if (c.occupancy < 1) ps = occupy_stochastic(ps, c.occupancy, c.seed);
  return ps;
}

inline json sample_json(const RunConfig& c, const CutProjectScheme& s, const Window& w, const PointSet& ps) {
  return {{"scheme", s.name}, {"internal", s.internal.describe()}, {"window", io::window_to_json(w)}, {"radius", ps.region.radius},
          {"seed", c.seed}, {"occupancy", c.occupancy}, {"points", ps.size()}, {"boundary_points", ps.boundary_count()},
          {"density", ps.empty() ? 0.0 : ps.density()}, {"expected_density", expected_density(s, w) * c.occupancy}};
}

// ---------------------------------------------------------------------------

inline int generate(const RunConfig& c, std::ostream& log) {
  const auto s = io::parse_scheme(c.scheme);
  const auto w = io::parse_window(c.window, s);
  const auto ps = sample(c, s, w, 50);
  Output out(c.out_dir);
  write_points(out, ps, c.format);
  if (c.svg) out.write("scatter.svg", io::render_points(ps, {.title = s.name + " sample"}));
  log << "generate: " << ps.size() << " points\n";
  return kOk;
}

inline int analyze(const RunConfig& c, std::ostream& log) {
  const auto s = io::parse_scheme(c.scheme);
  const auto w = io::parse_window(c.window, s);
  const auto ps = sample(c, s, w, 100);
  Output out(c.out_dir);
  json report = sample_json(c, s, w, ps);
  report["command"] = "analyze";
  bool pass = true;
  if (ps.size() >= 2 && ps.dim() <= 2) {
    try {
      const auto dr = delone_radii(ps);
      report["delone"] = {{"packing_radius", dr.r_pack}, {"covering_radius", dr.r_cover}};
    } catch (const std::invalid_argument& e) {
      report["delone"] = {{"skipped", e.what()}};
    }
  }
  if (ps.size() >= 2 && ps.dim() == 1 && ps.size() <= 4000) {
    const auto m = meyer_check(ps);
    report["meyer"] = {{"min_gap", m.min_gap}, {"differences", m.differences}};
    if (m.exact_gap) report["meyer"]["exact_gap"] = to_string(*m.exact_gap);
  }
  if (!ps.empty() && slab_window(w) && c.occupancy == 1) {
    const auto wr = weyl_test(ps, w);
    report["weyl"] = {{"bins", wr.bins}, {"chi_square", wr.chi_square}, {"p_value", wr.p_value}, {"discrepancy", wr.discrepancy},
                      {"threshold", c.min_p}};
    pass = wr.p_value > c.min_p;
  }
  report["pass"] = pass;
  write_points(out, ps, c.format);
  write_report(out, report);
  if (c.svg) out.write("scatter.svg", io::render_points(ps, {.title = s.name + " sample"}));
  log << "analyze: " << ps.size() << " points, " << (pass ? "pass" : "FAIL") << "\n";
  return pass ? kOk : kThreshold;
}

inline int diffract(const RunConfig& c, std::ostream& log) {
  const auto s = io::parse_scheme(c.scheme);
  const auto w = io::parse_window(c.window, s);
  const auto ps = sample(c, s, w, 200);
  const auto sp = bragg_predict(s, w, c.k_cutoff, c.floor);
  Spectrum expect = sp;
  if (c.occupancy < 1) expect = stochastic_expectation(sp, sp.density, c.occupancy, c.occupancy);
  const auto cmp = spectrum_check(ps, expect, c);
  const bool pass = cmp.pass(c.peak_tol, c.background_tol);
  Output out(c.out_dir);
  json report = sample_json(c, s, w, ps);
  report["command"] = "diffract";
  report["k_cutoff"] = c.k_cutoff;
  report["floor"] = c.floor;
  report["predicted_peaks"] = sp.peaks.size();
  report["comparison"] = comparison_json(cmp);
  report["thresholds"] = {{"peak", c.peak_tol}, {"background", c.background_tol}};
  report["pass"] = pass;
  write_spectrum(out, expect, cmp.measured);
  write_report(out, report);
  if (c.svg) out.write("spectrum.svg", io::render_spectrum(expect, {.title = s.name + " predicted spectrum"}));
  log << "diffract: " << sp.peaks.size() << " peaks, max error " << cmp.max_rel_error << ", " << (pass ? "pass" : "FAIL") << "\n";
  return pass ? kOk : kThreshold;
}

// ---------------------------------------------------------------------------
// demos

inline int demo_fibonacci(const RunConfig& c, std::ostream& log) {
  const auto s = make_fibonacci_scheme();
  const auto w = io::default_window(s);
  const auto ps = enumerate_model_set(s, w, c.radius.value_or(1000));
  const auto sp = bragg_predict(s, w, c.k_cutoff, c.floor);
  const auto cmp = spectrum_check(ps, sp, c);
  const auto wr = weyl_test(ps, w);
  const auto m = meyer_check(enumerate_model_set(s, w, 200));
  const bool pass = cmp.pass(c.peak_tol, c.background_tol) && wr.p_value > c.min_p;
  Output out(c.out_dir);
  json report = sample_json(c, s, w, ps);
  report["demo"] = "fibonacci";
  report["predicted_peaks"] = sp.peaks.size();
  report["top_peaks"] = peaks_json(sp, c.top);
  report["comparison"] = comparison_json(cmp);
  report["top_peak_error"] = cmp.max_rel_error;
  report["weyl"] = {{"chi_square", wr.chi_square}, {"p_value", wr.p_value}, {"discrepancy", wr.discrepancy}};
  report["meyer_B200"] = {{"min_gap", m.min_gap}, {"exact_gap", m.exact_gap ? to_string(*m.exact_gap) : ""}};
  report["pass"] = pass;
  write_points(out, ps, "csv");
  write_spectrum(out, sp, cmp.measured);
  write_report(out, report);
  out.write("scatter.svg", io::render_points(ps, {.title = "Fibonacci model set"}));
  out.write("spectrum.svg", io::render_spectrum(sp, {.title = "Fibonacci Bragg peaks"}));
  log << "demo fibonacci: " << ps.size() << " points, top-peak error " << cmp.max_rel_error << ", background "
      << (cmp.background ? cmp.background->ratio : 0.0) << ", " << (pass ? "pass" : "FAIL") << "\n";
  return pass ? kOk : kThreshold;
}

inline int demo_icosian(const RunConfig& c, std::ostream& log) {
  const auto s = make_icosian_scheme();
  const auto group = icosian_group_check();
  const auto e8 = icosian_e8_check(s);
  const Window w = Window::ball(RealVector(4, 0.0), 1.0);
  const auto ps = enumerate_model_set(s, w, c.radius.value_or(2));
  const bool pass = group.ok() && e8.ok();
  Output out(c.out_dir);
  json report = sample_json(c, s, w, ps);
  report["demo"] = "icosian";
  report["units"] = {{"size", group.size}, {"closed_products", group.products}, {"maps", group.maps}, {"permuting_maps", group.permuting}};
  report["e8"] = {{"integral", e8.integral}, {"even", e8.even}, {"determinant", to_string(e8.det)}, {"norm2_vectors", e8.minimal_vectors},
                  {"shorter_vectors", e8.shorter}};
  report["pass"] = pass;
  write_points(out, ps, "csv");
  write_report(out, report);
  out.write("scatter.svg", io::render_points(ps, {.title = "icosian model set, (x1, x2) projection"}));
  log << "demo icosian: " << group.products << " closed products, " << group.permuting << " permuting maps, E8 " << (e8.ok() ? "yes" : "no")
      << ", " << (pass ? "pass" : "FAIL") << "\n";
  return pass ? kOk : kThreshold;
}

inline int demo_h3(const RunConfig& c, std::ostream& log) {
  const auto s = restrict_to_pure_quaternions(make_icosian_scheme());
  const Window w = Window::ball(RealVector(3, 0.0), 1.0);
  const auto ps = enumerate_model_set(s, w, c.radius.value_or(8));
  const double expect = expected_density(s, w);
  const double rel = expect > 0 ? std::fabs(ps.density() - expect) / expect : 1.0;
  const double gap = min_physical_gap(ps.physical());
  const auto sp = bragg_predict(s, w, std::min(c.k_cutoff, 1.5), std::max(c.floor, 0.05));
  const bool pass = rel < 0.1 && gap > 0;
  Output out(c.out_dir);
  json report = sample_json(c, s, w, ps);
  report["demo"] = "h3";
  report["density_rel_error"] = rel;
  report["min_gap"] = gap;
  report["predicted_peaks"] = sp.peaks.size();
  report["top_peaks"] = peaks_json(sp, c.top);
  report["pass"] = pass;
  write_points(out, ps, "csv");
  write_spectrum(out, sp);
  write_report(out, report);
  out.write("scatter.svg", io::render_points(ps, {.title = "icosahedral model set, (x1, x2) projection"}));
  log << "demo h3: " << ps.size() << " points, density error " << rel << ", " << (pass ? "pass" : "FAIL") << "\n";
  return pass ? kOk : kThreshold;
}

inline int demo_robinson(const RunConfig& c, std::ostream& log) {
  const auto cfg = RobinsonConfig::defaults();
  // patch [0, 2R)^2; a single long supertile arm can move types 4 and 6 by about 1% on other placements
  const long long half = static_cast<long long>(std::llround(c.radius.value_or(256)));
  const auto classes = robinson_tile_classes_patch(cfg, 0, 0, 2 * half);
  const auto dens = classes.densities();
  const auto want = robinson_expected_densities();
  bool pass = classes.decided() > 0;
  json types = json::array();
  for (std::size_t i = 0; i < 6; ++i) {
    const double rel = std::fabs(dens[i] - want[i]) / want[i];
    pass = pass && rel < 0.01;
    types.push_back({{"type", i + 1}, {"count", classes.types[i].size()}, {"density", dens[i]}, {"expected", want[i]}, {"rel_error", rel}});
  }
  const auto rw = robinson_window(cfg);
  const auto sp = bragg_predict(make_robinson_scheme(), rw.window, 1.0, std::max(c.floor, 1e-3), 6);
  // type-1 centres near the origin for the plot
  auto centres = robinson_tile_classes(cfg, 50).types[0];
  Output out(c.out_dir);
  json report{{"demo", "robinson"}, {"patch_side", 2 * half}, {"decided", classes.decided()}, {"undecided", classes.undecided.size()},
              {"types", types}, {"window_volume", haar_volume(rw.window)}, {"predicted_peaks", sp.peaks.size()},
              {"top_peaks", peaks_json(sp, c.top)}, {"pass", pass}};
  write_points(out, centres, "csv");
  write_spectrum(out, sp);
  write_report(out, report);
  out.write("scatter.svg", io::render_points(centres, {.title = "Robinson type-1 centres, R = 50"}));
  log << "demo robinson: " << classes.decided() << " decided points, " << (pass ? "pass" : "FAIL") << "\n";
  return pass ? kOk : kThreshold;
}

inline int demo_visible(const RunConfig& c, std::ostream& log) {
  const double R = c.radius.value_or(500);
  const auto ps = visible_points(2, R);
  const double target = 6 / (std::numbers::pi * std::numbers::pi);
  const double rel = std::fabs(ps.density() - target) / target;
  const auto hole = find_empty_ball(visible_points(2, std::min(R, 100.0)), 2.0);
  // visible peaks on a common grid at R and R/2
  const int m = 60;
  const auto a = grid_peaks(structure_factor_grid(visible_points(2, R / 2), m), 2, m, 0.01);
  const auto b = grid_peaks(structure_factor_grid(ps, m), 2, m, 0.01);
  const bool stable = a == b;
  const bool pass = rel < 0.005 && stable;
  Output out(c.out_dir);
  const auto shown = visible_points(2, std::min(R, 50.0));
  json report{{"demo", "visible"}, {"radius", R}, {"points", ps.size()}, {"density", ps.density()}, {"six_over_pi2", target},
              {"density_rel_error", rel}, {"largest_empty_ball_B100", hole.largest}, {"grid", m}, {"peaks_half_radius", a.size()},
              {"peaks_full_radius", b.size()}, {"peaks_stable", stable}, {"plotted_radius", shown.region.radius}, {"pass", pass}};
  write_points(out, shown, "csv");
  write_report(out, report);
  out.write("scatter.svg", io::render_points(shown, {.point_radius = 1.0, .title = "visible points of Z2"}));
  log << "demo visible: density error " << rel << ", peaks " << (stable ? "stable" : "moved") << ", " << (pass ? "pass" : "FAIL") << "\n";
  return pass ? kOk : kThreshold;
}

}  // namespace detail

/// Runs one command; errors go to `log`.
inline int run(const RunConfig& c, std::ostream& log) {
  try {
    validate(c);
    if (c.command == "generate") return detail::generate(c, log);
    if (c.command == "analyze") return detail::analyze(c, log);
    if (c.command == "diffract") return detail::diffract(c, log);
    if (c.demo == "fibonacci") return detail::demo_fibonacci(c, log);
    if (c.demo == "icosian") return detail::demo_icosian(c, log);
    if (c.demo == "h3") return detail::demo_h3(c, log);
    if (c.demo == "robinson") return detail::demo_robinson(c, log);
    return detail::demo_visible(c, log);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kInvalid;
  }
}

inline int main(int argc, char** argv) {
  CLI::App app{"aperiodica: model sets, their analysis and diffraction"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig c;
  double radius = 0;
  app.add_option("--scheme", c.scheme, "builtin name (fibonacci, icosian, h3, h2, robinson, padic:P:M), JSON or JSON file");
  app.add_option("--window", c.window, "default, empty, robinson[:K], JSON or JSON file");
  auto* r = app.add_option("--radius", radius, "sample radius");
  app.add_option("--seed", c.seed, "seed for Bernoulli thinning");
  app.add_option("--occupancy", c.occupancy, "keep each point with this probability");
  app.add_option("--k-cutoff", c.k_cutoff, "largest |k| for predicted peaks");
  app.add_option("--floor", c.floor, "smallest relative peak weight kept");
  app.add_option("--top", c.top, "number of peaks to measure");
  app.add_option("--peak-tol", c.peak_tol, "relative error allowed on measured peaks");
  app.add_option("--background-tol", c.background_tol, "allowed off-peak background relative to I(0)");
  app.add_option("--min-p", c.min_p, "smallest acceptable chi-square p-value");
  app.add_option("--out-dir", c.out_dir, "output directory");
  app.add_option("--format", c.format, "points format: csv or json");
  app.add_flag("--svg", c.svg, "also write SVG plots");
  app.add_subcommand("generate", "write a finite sample");
  app.add_subcommand("analyze", "Delone, Meyer and Weyl checks on a sample");
  app.add_subcommand("diffract", "predicted against measured Bragg peaks");
  auto* demo = app.add_subcommand("demo", "one of the worked examples");
  demo->add_option("name", c.demo, "fibonacci, icosian, h3, robinson or visible")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }
  if (r->count()) c.radius = radius;
  c.command = app.get_subcommands().front()->get_name();
  return run(c, std::cerr);
}

}  // namespace aperiodica::cli
