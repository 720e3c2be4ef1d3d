#pragma once

// Scheme and window descriptors: builtin names, inline JSON or JSON files.
//
//   scheme: fibonacci | icosian | h3 | h2 | robinson | padic:P:M | {json} | path.json
//     {"builtin": "fibonacci"}
//     {"name": "...", "d": 1, "internal": {"kind": "euclidean", "dim": 1},
//      "phys": [["1", "tau"]], "inner": [["1", "1-tau"]]}
//   window: default | empty | robinson[:K] | {json} | path.json
//     {"type": "interval", "lo": "-1", "hi": "tau-1"}
//     {"type": "box", "sides": [["0", "1"], ["0", "tau"]]}
//     {"type": "ball", "center": [0, 0], "radius": 1}
//     {"type": "polytope", "vertices": [[0, 0], [1, 0], [0, 1]]}
//     {"type": "cosets", "p": 2, "m": 2, "cosets": [{"rep": [0, 1], "k": 1}]}
//     {"type": "robinson", "depth": 16}

#include "aperiodica/robinson.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace aperiodica::io {

using json = nlohmann::json;

/// Thrown for unreadable or malformed descriptors.
struct descriptor_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline json load_json(const std::string& arg) {
  std::string text = arg;
  if (arg.empty() || arg.front() != '{') {
    std::ifstream in(arg);
    if (!in) throw descriptor_error("cannot read descriptor '" + arg + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw descriptor_error("bad JSON in descriptor '" + arg + "': " + e.what());
  }
}

inline GoldenRational golden(const json& v) {
  if (v.is_number_integer()) return GoldenRational(Rational(v.get<long long>()));
  if (v.is_string()) return parse_golden(v.get<std::string>());
  if (v.is_number()) return golden_from_double(v.get<double>());
  throw descriptor_error("expected a number or a string like \"1/2+3tau\"");
}

inline Matrix<GoldenRational> golden_matrix(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw descriptor_error("basis must be a nonempty array of rows");
  std::vector<std::vector<GoldenRational>> out;
  for (const auto& r : rows) {
    if (!r.is_array()) throw descriptor_error("basis rows must be arrays");
    std::vector<GoldenRational> row;
    for (const auto& v : r) row.push_back(golden(v));
    out.push_back(std::move(row));
  }
  return Matrix<GoldenRational>::from_rows(out);
}

inline RealVector real_vector(const json& v) {
  if (!v.is_array()) throw descriptor_error("expected an array of numbers");
  RealVector out;
  for (const auto& x : v) out.push_back(x.get<double>());
  return out;
}

inline std::optional<std::pair<std::string, std::string>> split_colon(const std::string& s) {
  const auto i = s.find(':');
  if (i == std::string::npos) return std::nullopt;
  return std::make_pair(s.substr(0, i), s.substr(i + 1));
}

}  // namespace detail

inline CutProjectScheme builtin_scheme(const std::string& name) {
  if (name == "fibonacci") return make_fibonacci_scheme();
  if (name == "icosian") return make_icosian_scheme();
  if (name == "h3") return restrict_to_pure_quaternions(make_icosian_scheme());
  if (name == "h2") return restrict_to_pure_quaternions(make_icosian_scheme(), default_fivefold_axis());
  if (name == "robinson") return make_robinson_scheme();
  if (name.rfind("padic:", 0) == 0) {
    unsigned long long p = 0;
    int m = 0;
    char tail = 0;
    if (std::sscanf(name.c_str(), "padic:%llu:%d%c", &p, &m, &tail) != 2 || m < 1)
      throw descriptor_error("expected padic:P:M, got '" + name + "'");
    return make_padic_diagonal_scheme(p, m);
  }
  throw descriptor_error("unknown scheme '" + name + "'");
}

inline CutProjectScheme scheme_from_json(const json& j) {
  if (j.contains("builtin")) return builtin_scheme(j.at("builtin").get<std::string>());
  try {
    const int d = j.at("d").get<int>();
    const auto& in = j.at("internal");
    const std::string kind = in.value("kind", "euclidean");
    const int dim = in.at("dim").get<int>();
    InternalSpace space = kind == "padic" ? InternalSpace::padic(in.at("p").get<std::uint64_t>(), dim, in.value("depth", PAdicApprox::kDefaultDepth))
                                          : InternalSpace::euclidean(dim);
    if (kind != "padic" && kind != "euclidean") throw descriptor_error("internal kind must be euclidean or padic");
    auto s = make_custom_scheme(d, space, detail::golden_matrix(j.at("phys")), detail::golden_matrix(j.at("inner")));
    s.name = j.value("name", "custom");
    return s;
  } catch (const json::exception& e) {
    throw descriptor_error(std::string("bad scheme descriptor: ") + e.what());
  }
}

inline CutProjectScheme parse_scheme(const std::string& arg) {
  if (!arg.empty() && arg.front() != '{' && arg.find(".json") == std::string::npos) return builtin_scheme(arg);
  return scheme_from_json(detail::load_json(arg));
}

/// The window each builtin uses when none is given.
inline Window default_window(const CutProjectScheme& s) {
  const GoldenRational t = GoldenRational::tau();
  if (s.name == "fibonacci") return Window::interval(GoldenRational(-1), t - GoldenRational(1));
  if (s.name == "robinson") return robinson_window(RobinsonConfig::defaults()).window;
  if (s.internal.is_padic()) return Window::coset_union(s.internal.p, s.internal.dim, {{std::vector<BigInt>(static_cast<std::size_t>(s.internal.dim), BigInt(0)), 0}});
  if (s.internal.dim == 1) return Window::interval(GoldenRational(-1), t - GoldenRational(1));
  return Window::ball(RealVector(static_cast<std::size_t>(s.internal.dim), 0.0), 1.0);
}

inline Window window_from_json(const json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "empty") return Window::empty(j.value("dim", 1));
    if (type == "interval") return Window::interval(detail::golden(j.at("lo")), detail::golden(j.at("hi")));
    if (type == "box") {
      std::vector<IntervalWindow> sides;
      for (const auto& s : j.at("sides")) sides.push_back({detail::golden(s.at(0)), detail::golden(s.at(1))});
      return Window::box(std::move(sides));
    }
    if (type == "ball") return Window::ball(detail::real_vector(j.at("center")), j.at("radius").get<double>());
    if (type == "polytope") {
      std::vector<RealVector> vs;
      for (const auto& v : j.at("vertices")) vs.push_back(detail::real_vector(v));
      return Window::polytope(std::move(vs));
    }
    if (type == "cosets") {
      std::vector<Coset> cs;
      for (const auto& c : j.at("cosets")) {
        Coset co;
        for (const auto& r : c.at("rep")) co.rep.push_back(r.is_string() ? BigInt(r.get<std::string>()) : BigInt(r.get<long long>()));
        co.k = c.at("k").get<int>();
        cs.push_back(std::move(co));
      }
      return Window::coset_union(j.at("p").get<std::uint64_t>(), j.at("m").get<int>(), std::move(cs));
    }
    if (type == "robinson") return robinson_window(RobinsonConfig::defaults(j.value("depth", 16))).window;
    throw descriptor_error("unknown window type '" + type + "'");
  } catch (const json::exception& e) {
    throw descriptor_error(std::string("bad window descriptor: ") + e.what());
  }
}

inline Window parse_window(const std::string& arg, const CutProjectScheme& s) {
  if (arg.empty() || arg == "default") return default_window(s);
  if (arg == "empty") return Window::empty(s.internal.dim);
  if (arg == "robinson") return robinson_window(RobinsonConfig::defaults()).window;
  if (auto kv = detail::split_colon(arg); kv && kv->first == "robinson") {
    try {
      return robinson_window(RobinsonConfig::defaults(std::stoi(kv->second))).window;
    } catch (const std::logic_error&) {
      throw descriptor_error("expected robinson:K, got '" + arg + "'");
    }
  }
  return window_from_json(detail::load_json(arg));
}

inline json window_to_json(const Window& w) {
  return std::visit([](const auto& v) -> json {
    using T = std::decay_t<decltype(v)>;
    if constexpr (std::is_same_v<T, EmptyWindow>) return {{"type", "empty"}, {"dim", v.dim}};
    else if constexpr (std::is_same_v<T, IntervalWindow>) return {{"type", "interval"}, {"lo", to_string(v.lo)}, {"hi", to_string(v.hi)}};
    else if constexpr (std::is_same_v<T, BoxWindow>) {
      json sides = json::array();
      for (const auto& s : v.sides) sides.push_back({to_string(s.lo), to_string(s.hi)});
      return {{"type", "box"}, {"sides", sides}};
    } else if constexpr (std::is_same_v<T, BallWindow>) return {{"type", "ball"}, {"center", v.center}, {"radius", v.radius}};
    else if constexpr (std::is_same_v<T, ConvexPolytope>) return {{"type", "polytope"}, {"vertices", v.vertices()}};
    else {
      json cs = json::array();
      for (const auto& c : v.cosets) {
        json rep = json::array();
        for (const auto& r : c.rep) rep.push_back(r.str());
        cs.push_back({{"rep", rep}, {"k", c.k}});
      }
      return {{"type", "cosets"}, {"p", v.p}, {"m", v.m}, {"cosets", cs}};
    }
  }, w.variant());
}

}  // namespace aperiodica::io
