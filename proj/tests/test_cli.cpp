#include "aperiodica/cli.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace aperiodica;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("aperiodica_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Result {
  int code = -1;
  std::string err;
};

Result run_cli(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(APERIODICA_CLI_PATH) + " " + args + " 2> '" + err.string() + "' > /dev/null";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Cli, DemoFibonacciWritesArtifacts) {
  const auto dir = scratch("demo_fib");
  const auto r = run_cli("demo fibonacci --out-dir '" + dir.string() + "'", dir);
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"points.csv", "spectrum.csv", "report.json", "scatter.svg"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
  const auto report = io::json::parse(slurp(dir / "report.json"));
  EXPECT_EQ(report.at("points").get<std::size_t>(), 1448u);
  EXPECT_LT(report.at("top_peak_error").get<double>(), 0.02);
  EXPECT_LT(report.at("comparison").at("background").at("ratio").get<double>(), 0.01);
  EXPECT_EQ(lines(slurp(dir / "points.csv")).size(), 1449u);
}

TEST(Cli, EmptyWindowGivesHeaderOnly) {
  const auto dir = scratch("empty");
  const auto r = run_cli("generate --window empty --out-dir '" + dir.string() + "'", dir);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir / "points.csv"), "x1,n1,n2,u1,boundary\n");
}

TEST(Cli, MismatchedWindowExitsOne) {
  const auto dir = scratch("mismatch");
  const auto r = run_cli(R"(diffract --scheme fibonacci --window '{"type":"ball","center":[0,0],"radius":1}' --out-dir ')" + dir.string() + "'", dir);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("dimension"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir / "report.json"));
}

TEST(Cli, BadInputExitsOne) {
  const auto dir = scratch("bad");
  for (const std::string args : {"demo nope", "generate --radius -2", "generate --format xml", "generate --window /no/such/file.json",
                                 "generate --scheme klein", "diffract --floor 0", "generate --no-such-flag", "frobnicate"})
    EXPECT_EQ(run_cli(args + " --out-dir '" + dir.string() + "'", dir).code, 1) << args;
}

TEST(Cli, MissedThresholdExitsTwo) {
  const auto dir = scratch("threshold");
  const auto r = run_cli("diffract --radius 100 --peak-tol 1e-9 --out-dir '" + dir.string() + "'", dir);
  EXPECT_EQ(r.code, 2);
  const auto report = io::json::parse(slurp(dir / "report.json"));
  EXPECT_FALSE(report.at("pass").get<bool>());
  // same sample passes with the default tolerance
  EXPECT_EQ(run_cli("diffract --radius 300 --out-dir '" + dir.string() + "'", dir).code, 0);
}

TEST(Cli, ByteDeterministicOutput) {
  const auto a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
  const std::string args = "generate --radius 200 --occupancy 0.5 --seed 7 --svg --out-dir ";
  ASSERT_EQ(run_cli(args + "'" + a.string() + "'", a).code, 0);
  ASSERT_EQ(run_cli(args + "'" + b.string() + "'", b).code, 0);
  EXPECT_EQ(slurp(a / "points.csv"), slurp(b / "points.csv"));
  EXPECT_EQ(slurp(a / "scatter.svg"), slurp(b / "scatter.svg"));
  ASSERT_EQ(run_cli("generate --radius 200 --occupancy 0.5 --seed 8 --svg --out-dir '" + c.string() + "'", c).code, 0);
  EXPECT_NE(slurp(a / "points.csv"), slurp(c / "points.csv"));
  for (const auto& d : {a, b}) ASSERT_EQ(run_cli("diffract --radius 150 --svg --out-dir '" + d.string() + "'", d).code, 0);
  EXPECT_EQ(slurp(a / "spectrum.csv"), slurp(b / "spectrum.csv"));
  EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
  EXPECT_EQ(slurp(a / "spectrum.svg"), slurp(b / "spectrum.svg"));
}

TEST(Cli, JsonPointFormat) {
  const auto dir = scratch("json");
  ASSERT_EQ(run_cli("generate --radius 10 --format json --out-dir '" + dir.string() + "'", dir).code, 0);
  const auto j = io::json::parse(slurp(dir / "points.json"));
  EXPECT_EQ(j.at("count").get<std::size_t>(), j.at("points").size());
  EXPECT_EQ(j.at("count").get<std::size_t>(), enumerate_model_set(make_fibonacci_scheme(), io::default_window(make_fibonacci_scheme()), 10).size());
}

TEST(Cli, RobinsonDemoCentresOnEvenLattice) {
  const auto dir = scratch("robinson");
  ASSERT_EQ(run_cli("demo robinson --out-dir '" + dir.string() + "'", dir).code, 0);
  const auto rows = lines(slurp(dir / "points.csv"));
  ASSERT_GT(rows.size(), 100u);
  EXPECT_EQ(rows[0], "x1,x2,n1,n2,boundary");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    long long x = 0, y = 0;
    ASSERT_EQ(std::sscanf(rows[i].c_str(), "%*[^,],%*[^,],%lld,%lld", &x, &y), 2);
    EXPECT_EQ(x % 2, 0);
    EXPECT_EQ(y % 2, 0);
  }
}

TEST(Csv, NumberFormat) {
  EXPECT_EQ(io::format_number(1.0 / 3), "0.333333333333");
  EXPECT_EQ(io::format_number(-0.0), "0");
  EXPECT_EQ(io::format_number(1e-20), "1e-20");
  EXPECT_EQ(io::format_number(2.5), "2.5");
  std::ostringstream os;
  io::write_points_csv(os, enumerate_model_set(make_fibonacci_scheme(), io::default_window(make_fibonacci_scheme()), 5));
  EXPECT_EQ(os.str().find('\r'), std::string::npos);
  EXPECT_EQ(lines(os.str())[0], "x1,n1,n2,u1,boundary");
}

TEST(Svg, EmptySetHasAxesOnly) {
  const std::string s = io::render_scatter({});
  EXPECT_EQ(s.rfind("<?xml", 0), 0u);
  EXPECT_NE(s.find("<line"), std::string::npos);
  EXPECT_EQ(s.find("<circle"), std::string::npos);
  EXPECT_EQ(s.substr(s.size() - 7), "</svg>\n");
  EXPECT_EQ(s, io::render_scatter({}));
}

TEST(Svg, TallestStemAtOrigin) {
  const auto sp = bragg_predict(make_fibonacci_scheme(), io::default_window(make_fibonacci_scheme()), 3, 1e-2);
  io::SvgStyle st;
  const std::string s = io::render_spectrum(sp, st);
  // stems live in the last group; the tallest one has the smallest y2
  const auto g = s.rfind("<g stroke=");
  double best_y = 1e9, best_x = 0;
  std::istringstream in(s.substr(g));
  for (std::string l; std::getline(in, l);) {
    double x1, y1, x2, y2;
    if (std::sscanf(l.c_str(), "<line x1=\"%lf\" y1=\"%lf\" x2=\"%lf\" y2=\"%lf\"", &x1, &y1, &x2, &y2) == 4 && y2 < best_y) best_y = y2, best_x = x1;
  }
  EXPECT_NEAR(best_x, st.width / 2.0, 1e-3);
}

TEST(Svg, OneDimensionalSetOnALine) {
  const auto s = io::render_scatter({{0.0}, {1.0}, {2.5}});
  std::set<std::string> ys;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);)
    if (auto i = l.find("cy=\""); i != std::string::npos) ys.insert(l.substr(i, l.find('"', i + 4) - i));
  EXPECT_EQ(ys.size(), 1u);
}

TEST(Descriptor, WindowRoundTrip) {
  const auto s = make_fibonacci_scheme();
  for (const std::string arg : {"default", R"({"type":"interval","lo":"-1/2*tau","hi":"1/2*tau"})", R"({"type":"box","sides":[["0","1"]]})"}) {
    const Window w = io::parse_window(arg, s);
    const Window back = io::window_from_json(io::window_to_json(w));
    EXPECT_EQ(io::window_to_json(back), io::window_to_json(w));
    EXPECT_DOUBLE_EQ(haar_volume(back), haar_volume(w));
  }
  const auto rw = io::parse_window("robinson:8", make_robinson_scheme());
  EXPECT_NEAR(haar_volume(rw), haar_volume(robinson_window(RobinsonConfig::defaults(8)).window), 1e-15);
  EXPECT_THROW(io::parse_window(R"({"type":"hexagon"})", s), io::descriptor_error);
}

TEST(Descriptor, SchemeFromJsonMatchesBuiltin) {
  const auto j = R"({"d":1,"internal":{"kind":"euclidean","dim":1},"phys":[["1","tau"]],"inner":[["1","1-tau"]]})";
  const auto a = io::parse_scheme(j);
  const auto b = make_fibonacci_scheme();
  EXPECT_NEAR(a.covolume, b.covolume, 1e-15);
  for (long long m = -5; m <= 5; ++m) EXPECT_EQ(to_real(a.star({m, 2 * m + 1})), to_real(b.star({m, 2 * m + 1})));
  EXPECT_EQ(io::parse_scheme("padic:3:2").internal.p, 3u);
  EXPECT_THROW(io::parse_scheme("padic:4:1"), std::invalid_argument);
  EXPECT_THROW(io::parse_scheme("padic:x"), io::descriptor_error);
}

TEST(Cli, ConfigValidation) {
  cli::RunConfig c;
  c.command = "generate";
  EXPECT_NO_THROW(cli::validate(c));
  c.min_p = 0;
  EXPECT_THROW(cli::validate(c), cli::validation_error);
  c.min_p = 0.01;
  c.occupancy = 1.5;
  EXPECT_THROW(cli::validate(c), cli::validation_error);
  std::ostringstream log;
  c.occupancy = 1;
  c.command = "render";
  EXPECT_EQ(cli::run(c, log), cli::kInvalid);
  EXPECT_NE(log.str().find("unknown command"), std::string::npos);
}
