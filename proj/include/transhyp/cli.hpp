#pragma once

// Batch front-end: JSON run configuration, graph/family construction, the
// scan / family / ode / identities / sym subcommands, CSV and JSON output.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "transhyp/errors.hpp"
#include "transhyp/families.hpp"
#include "transhyp/hypersurface.hpp"
#include "transhyp/odesolve.hpp"
#include "transhyp/profile.hpp"
#include "transhyp/sympoly.hpp"
#include "transhyp/verify.hpp"

namespace transhyp::cli {

using json = nlohmann::ordered_json;

inline constexpr int kConfigVersion = 1;

enum ExitStatus : int { kOk = 0, kAssertionFailed = 1, kParseError = 2, kDomainError = 3 };

/// Malformed configuration: syntax, schema, unknown keys. Maps to exit status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Number formatting

/// 17 significant digits, round-trip exact for doubles.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Schema helpers

namespace detail {

inline void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
  }
}

inline double number(const json& obj, const std::string& where, const char* key,
                     std::optional<double> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(where + ": missing required key \"" + key + "\"");
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

inline int integer(const json& obj, const std::string& where, const char* key,
                   std::optional<int> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(where + ": missing required key \"" + key + "\"");
  }
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

inline std::vector<double> numbers(const json& obj, const std::string& where, const char* key,
                                   std::optional<std::vector<double>> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(where + ": missing required key \"" + key + "\"");
  }
  const auto& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(where + "." + key + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(where + "." + key + ": expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline std::vector<int> integers(const json& obj, const std::string& where, const char* key,
                                 std::vector<int> fallback = {}) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(where + "." + key + ": expected an array of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) throw ConfigError(where + "." + key + ": expected an array of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

inline std::string string(const json& obj, const std::string& where, const char* key,
                          std::optional<std::string> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(where + ": missing required key \"" + key + "\"");
  }
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

// [lo, hi] with null for an unbounded end.
inline Interval interval(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(where + ": expected [lo, hi]");
  auto end = [&](const json& e, double inf) {
    if (e.is_null()) return inf;
    if (!e.is_number()) throw ConfigError(where + ": interval ends must be numbers or null");
    return e.get<double>();
  };
  return {end(v[0], -kInf), end(v[1], kInf)};
}

inline json interval_json(const Interval& iv) {
  json j = json::array();
  j.push_back(std::isfinite(iv.lo) ? json(iv.lo) : json(nullptr));
  j.push_back(std::isfinite(iv.hi) ? json(iv.hi) : json(nullptr));
  return j;
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Run configuration

struct FamilySpec {
  std::string name;  // "cylinder" | "enneper"
  CylinderParams cylinder;
  EnneperParams enneper;
};

struct GraphSpec {
  std::vector<Profile> profiles;  // explicit list
  std::optional<FamilySpec> family;
  json source;  // echoed into reports

  TranslationGraph build() const {
    if (!family) return TranslationGraph(profiles);
    return family->name == "cylinder" ? make_cylinder(family->cylinder) : make_enneper(family->enneper);
  }
  int dimension() const {
    if (!family) return static_cast<int>(profiles.size());
    return family->name == "cylinder" ? family->cylinder.n : family->enneper.n;
  }
};

struct AssertSpec {
  bool oracle = true;
  std::vector<int> zero;      // r values that must be constant zero
  std::vector<int> constant;  // r values that must be constant
  std::vector<int> classify;  // r values whose constancy verdict must not be constant-nonzero
  double det_tol = 1e-9;
};

struct OdeSpec {
  OdeParams params{1.0, 1.0, 0.0};
  std::optional<Interval> span;
  double step = 1e-3;
  double inset = 0.05;
  double tol = 1e-6;
  double first_integral_tol = 1e-7;
  double convergence_step = 1e-2;
  int halvings = 3;
  double factor_lo = 12.0;
  double factor_hi = 20.0;
};

struct IdentitySpec {
  int points = 10;
  int r = 3;
  std::vector<int> indices;  // 1-based; default 1..r+1
  double w_tol = 1e-5;
  double gr_tol = 1e-4;
  double base_step = 0.1;
};

struct SymSpec {
  std::vector<double> values;
  std::optional<int> r;
  double tol = 1e-12;
};

struct RunConfig {
  int version = kConfigVersion;
  std::optional<GraphSpec> graph;
  GridSpec grid;
  bool has_grid = false;
  std::vector<int> r_set;
  Tolerances tolerances;
  AssertSpec asserts;
  std::string csv_name = "points.csv";
  std::string report_name = "report.json";
  std::uint64_t seed = 0;
  std::optional<OdeSpec> ode;
  std::optional<IdentitySpec> identities;
  std::optional<SymSpec> sym;
};

inline Profile parse_profile(const json& j, const std::string& where) {
  const auto kind = detail::string(j, where, "kind");
  if (kind == "linear") {
    detail::allow_keys(j, where, {"kind", "slope", "offset"});
    return Profile::linear(detail::number(j, where, "slope"), detail::number(j, where, "offset", 0.0));
  }
  if (kind == "polynomial") {
    detail::allow_keys(j, where, {"kind", "coefficients", "domain"});
    Interval dom;
    if (j.contains("domain")) dom = detail::interval(j.at("domain"), where + ".domain");
    return Profile::polynomial(detail::numbers(j, where, "coefficients"), dom);
  }
  if (kind == "logcos") {
    detail::allow_keys(j, where, {"kind", "slope", "beta", "phase", "offset", "domain"});
    const double a = detail::number(j, where, "slope");
    const double beta = detail::number(j, where, "beta", 1.0);
    const double b = detail::number(j, where, "phase", 0.0);
    const double c = detail::number(j, where, "offset", 0.0);
    if (j.contains("domain")) return Profile::logcos(a, beta, b, c, detail::interval(j.at("domain"), where + ".domain"));
    return Profile::logcos(a, beta, b, c);
  }
  throw ConfigError(where + ".kind: unknown profile kind \"" + kind + "\"");
}

inline GraphSpec parse_graph(const json& j) {
  const std::string where = "graph";
  if (!j.is_object()) throw ConfigError("graph: expected an object");
  const bool has_profiles = j.contains("profiles");
  const bool has_family = j.contains("family");
  if (has_profiles == has_family) throw ConfigError("graph: exactly one of \"profiles\" or \"family\" is required");
  GraphSpec g;
  g.source = j;
  if (has_profiles) {
    detail::allow_keys(j, where, {"profiles"});
    const auto& arr = j.at("profiles");
    if (!arr.is_array()) throw ConfigError("graph.profiles: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      g.profiles.push_back(parse_profile(arr[i], "graph.profiles[" + std::to_string(i) + "]"));
    return g;
  }
  FamilySpec f;
  f.name = detail::string(j, where, "family");
  if (f.name == "cylinder") {
    detail::allow_keys(j, where, {"family", "n", "r", "linear", "free", "offset"});
    f.cylinder.n = detail::integer(j, where, "n");
    f.cylinder.r = detail::integer(j, where, "r");
    f.cylinder.linear = detail::numbers(j, where, "linear");
    f.cylinder.offset = detail::number(j, where, "offset", 0.0);
    if (!j.contains("free") || !j.at("free").is_array()) throw ConfigError("graph.free: expected an array of profiles");
    const auto& arr = j.at("free");
    for (std::size_t i = 0; i < arr.size(); ++i)
      f.cylinder.free.push_back(parse_profile(arr[i], "graph.free[" + std::to_string(i) + "]"));
  } else if (f.name == "enneper") {
    detail::allow_keys(j, where, {"family", "n", "r", "linear", "slopes", "phases", "offset"});
    f.enneper.n = detail::integer(j, where, "n");
    f.enneper.r = detail::integer(j, where, "r");
    f.enneper.linear = detail::numbers(j, where, "linear", std::vector<double>{});
    f.enneper.slopes = detail::numbers(j, where, "slopes");
    f.enneper.phases = detail::numbers(j, where, "phases",
                                       std::vector<double>(static_cast<std::size_t>(std::max(f.enneper.r + 1, 0)), 0.0));
    f.enneper.offset = detail::number(j, where, "offset", 0.0);
  } else {
    throw ConfigError("graph.family: expected \"cylinder\" or \"enneper\", got \"" + f.name + "\"");
  }
  g.family = std::move(f);
  return g;
}

inline GridSpec parse_grid(const json& j, int n) {
  const std::string where = "grid";
  detail::allow_keys(j, where, {"counts", "count", "ranges", "inset", "mode", "cap", "window"});
  GridSpec g;
  std::vector<int> counts;
  if (j.contains("counts") && j.contains("count")) throw ConfigError("grid: give either \"counts\" or \"count\"");
  if (j.contains("counts")) counts = detail::integers(j, where, "counts");
  else counts.assign(static_cast<std::size_t>(std::max(n, 0)), detail::integer(j, where, "count", 10));
  if (static_cast<int>(counts.size()) != n)
    throw ConfigError("grid.counts: expected " + std::to_string(n) + " entries");
  for (int c : counts) g.axes.push_back(AxisSpec{c, std::nullopt});
  if (j.contains("ranges")) {
    const auto& rs = j.at("ranges");
    if (!rs.is_array() || static_cast<int>(rs.size()) != n)
      throw ConfigError("grid.ranges: expected " + std::to_string(n) + " entries");
    for (int i = 0; i < n; ++i)
      if (!rs[static_cast<std::size_t>(i)].is_null())
        g.axes[static_cast<std::size_t>(i)].range =
            detail::interval(rs[static_cast<std::size_t>(i)], "grid.ranges[" + std::to_string(i) + "]");
  }
  g.inset = detail::number(j, where, "inset", 0.05);
  const auto mode = detail::string(j, where, "mode", std::string("lattice"));
  if (mode == "lattice") g.mode = SamplingMode::Lattice;
  else if (mode == "random") g.mode = SamplingMode::Random;
  else throw ConfigError("grid.mode: expected \"lattice\" or \"random\"");
  if (j.contains("cap")) {
    const auto& c = j.at("cap");
    if (!c.is_number_unsigned()) throw ConfigError("grid.cap: expected a non-negative integer");
    g.cap = c.get<std::size_t>();
  }
  if (j.contains("window")) g.window = detail::interval(j.at("window"), "grid.window");
  return g;
}

inline RunConfig parse_config(const json& j) {
  detail::allow_keys(j, "config", {"version", "graph", "grid", "r_set", "tolerances", "assert", "output",
                                   "seed", "ode", "identities", "sym"});
  RunConfig c;
  c.version = detail::integer(j, "config", "version");
  if (c.version != kConfigVersion)
    throw ConfigError("config.version: unsupported version " + std::to_string(c.version));
  if (j.contains("graph")) c.graph = parse_graph(j.at("graph"));
  const int n = c.graph ? c.graph->dimension() : 0;

  if (j.contains("grid")) {
    if (!c.graph) throw ConfigError("grid: requires a graph section");
    c.grid = parse_grid(j.at("grid"), n);
    c.has_grid = true;
  } else if (c.graph) {
    c.grid = GridSpec::uniform(n, 10);
  }

  c.r_set = detail::integers(j, "config", "r_set");
  if (c.r_set.empty() && c.graph)
    for (int r = 1; r <= n; ++r) c.r_set.push_back(r);
  if (c.graph) {
    const bool is_family = c.graph->family.has_value();
    for (int r : c.r_set) {
      if (r < 1 || r > n) throw ConfigError("r_set: r=" + std::to_string(r) + " outside 1.." + std::to_string(n));
      (void)is_family;
    }
  }

  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    detail::allow_keys(t, "tolerances", {"zero", "constancy", "oracle_rel", "oracle_abs"});
    c.tolerances.zero = detail::number(t, "tolerances", "zero", c.tolerances.zero);
    c.tolerances.constancy = detail::number(t, "tolerances", "constancy", c.tolerances.constancy);
    c.tolerances.oracle_rel = detail::number(t, "tolerances", "oracle_rel", c.tolerances.oracle_rel);
    c.tolerances.oracle_abs = detail::number(t, "tolerances", "oracle_abs", c.tolerances.oracle_abs);
  }
  if (j.contains("assert")) {
    const auto& a = j.at("assert");
    detail::allow_keys(a, "assert", {"oracle", "zero", "constant", "classify", "det_tol"});
    if (a.contains("oracle")) {
      if (!a.at("oracle").is_boolean()) throw ConfigError("assert.oracle: expected a boolean");
      c.asserts.oracle = a.at("oracle").get<bool>();
    }
    c.asserts.zero = detail::integers(a, "assert", "zero");
    c.asserts.constant = detail::integers(a, "assert", "constant");
    c.asserts.classify = detail::integers(a, "assert", "classify");
    c.asserts.det_tol = detail::number(a, "assert", "det_tol", c.asserts.det_tol);
    for (const auto* list : {&c.asserts.zero, &c.asserts.constant, &c.asserts.classify})
      for (int r : *list)
        if (r < 1 || r > n) throw ConfigError("assert: r=" + std::to_string(r) + " outside 1.." + std::to_string(n));
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    detail::allow_keys(o, "output", {"csv", "report"});
    c.csv_name = detail::string(o, "output", "csv", c.csv_name);
    c.report_name = detail::string(o, "output", "report", c.report_name);
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("ode")) {
    const auto& o = j.at("ode");
    const std::string w = "ode";
    detail::allow_keys(o, w, {"slope", "beta", "phase", "span", "step", "inset", "tol", "first_integral_tol",
                              "convergence_step", "halvings", "factor_range"});
    OdeSpec s;
    s.params.slope = detail::number(o, w, "slope", s.params.slope);
    s.params.beta = detail::number(o, w, "beta", s.params.beta);
    s.params.phase = detail::number(o, w, "phase", s.params.phase);
    if (o.contains("span")) s.span = detail::interval(o.at("span"), "ode.span");
    s.step = detail::number(o, w, "step", s.step);
    s.inset = detail::number(o, w, "inset", s.inset);
    s.tol = detail::number(o, w, "tol", s.tol);
    s.first_integral_tol = detail::number(o, w, "first_integral_tol", s.first_integral_tol);
    s.convergence_step = detail::number(o, w, "convergence_step", s.convergence_step);
    s.halvings = detail::integer(o, w, "halvings", s.halvings);
    if (o.contains("factor_range")) {
      const auto fr = detail::numbers(o, w, "factor_range");
      if (fr.size() != 2) throw ConfigError("ode.factor_range: expected [lo, hi]");
      s.factor_lo = fr[0];
      s.factor_hi = fr[1];
    }
    c.ode = s;
  }
  if (j.contains("identities")) {
    const auto& o = j.at("identities");
    const std::string w = "identities";
    detail::allow_keys(o, w, {"points", "r", "indices", "w_tol", "gr_tol", "base_step"});
    IdentitySpec s;
    s.points = detail::integer(o, w, "points", s.points);
    s.r = detail::integer(o, w, "r", s.r);
    s.indices = detail::integers(o, w, "indices");
    s.w_tol = detail::number(o, w, "w_tol", s.w_tol);
    s.gr_tol = detail::number(o, w, "gr_tol", s.gr_tol);
    s.base_step = detail::number(o, w, "base_step", s.base_step);
    c.identities = s;
  }
  if (j.contains("sym")) {
    const auto& o = j.at("sym");
    detail::allow_keys(o, "sym", {"values", "r", "tol"});
    SymSpec s;
    s.values = detail::numbers(o, "sym", "values");
    if (o.contains("r")) s.r = detail::integer(o, "sym", "r");
    s.tol = detail::number(o, "sym", "tol", s.tol);
    c.sym = s;
  }
  return c;
}

/// Parse config text; syntax errors carry line and column.
inline RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') { ++line; col = 1; }
      else ++col;
    }
    throw ConfigError("config parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
  return parse_config(j);
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

// ---------------------------------------------------------------------------
// Serialization

inline json tolerances_json(const Tolerances& t) {
  return json{{"zero", t.zero}, {"constancy", t.constancy}, {"oracle_rel", t.oracle_rel}, {"oracle_abs", t.oracle_abs}};
}

inline json grid_json(const GridSpec& g, const TranslationGraph& graph) {
  json counts = json::array(), ranges = json::array();
  for (const auto& a : g.axes) counts.push_back(a.count);
  for (const auto& iv : g.resolve(graph)) ranges.push_back(detail::interval_json(iv));
  return json{{"mode", g.mode == SamplingMode::Lattice ? "lattice" : "random"},
              {"counts", counts},
              {"ranges", ranges},
              {"inset", g.inset},
              {"points", g.total_points()},
              {"seed", g.seed}};
}

inline json rstats_json(const RStats& s) {
  return json{{"r", s.r},
              {"max_abs", s.max_abs},
              {"mean", s.mean},
              {"std", s.std},
              {"min", s.min},
              {"max", s.max},
              {"constant", s.constant},
              {"value", detail::number_or_null(s.value)},
              {"oracle_max_disc", s.oracle_max_disc}};
}

/// points CSV: x_1..x_n,W,S_1..S_n with 17 significant digits.
inline void write_points_csv(std::ostream& out, std::span<const PointSample> samples, int n) {
  for (int i = 1; i <= n; ++i) out << "x_" << i << ',';
  out << 'W';
  for (int r = 1; r <= n; ++r) out << ",S_" << r;
  out << '\n';
  for (const auto& p : samples) {
    for (double v : p.x) out << fmt17(v) << ',';
    out << fmt17(p.w);
    for (int r = 1; r <= n; ++r) out << ',' << fmt17(p.s[static_cast<std::size_t>(r)]);
    out << '\n';
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// ---------------------------------------------------------------------------
// Subcommands

struct Options {
  std::filesystem::path config;
  std::filesystem::path out_dir = ".";
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;
};

struct Outcome {
  int status = kOk;
  json report;
};

inline const GraphSpec& require_graph(const RunConfig& c, const char* cmd) {
  if (!c.graph) throw ConfigError(std::string(cmd) + ": config has no graph section");
  return *c.graph;
}

inline Outcome run_scan(const RunConfig& c, const Options& opt, std::ostream& log) {
  const auto& gs = require_graph(c, "scan");
  const auto graph = gs.build();
  GridSpec grid = c.grid;
  grid.seed = c.seed;

  std::vector<PointSample> samples;
  const auto rep = scan(graph, grid, c.r_set, c.tolerances, opt.threads, &samples);

  bool passed = rep.max_det_residual <= c.asserts.det_tol;
  if (c.asserts.oracle) passed = passed && rep.oracle_agreement();
  json asserts = json::array();
  auto stats_for = [&](int r) { return summarize(samples, r, c.tolerances); };
  for (int r : c.asserts.zero) {
    const auto s = stats_for(r);
    const bool ok = s.constant && s.max_abs <= c.tolerances.zero;
    passed = passed && ok;
    asserts.push_back(json{{"kind", "zero"}, {"r", r}, {"passed", ok}});
  }
  for (int r : c.asserts.constant) {
    const bool ok = stats_for(r).constant;
    passed = passed && ok;
    asserts.push_back(json{{"kind", "constant"}, {"r", r}, {"passed", ok}});
  }
  for (int r : c.asserts.classify) {
    if (!(2 < r && r < graph.dimension())) throw ParameterError("classify assertion requires 2 < r < n");
    const auto s = stats_for(r);
    ConstancyVerdict v = !s.constant ? ConstancyVerdict::Nonconstant
                        : s.max_abs <= c.tolerances.zero ? ConstancyVerdict::ConstantZero
                                                         : ConstancyVerdict::ConstantNonzero;
    const bool ok = v != ConstancyVerdict::ConstantNonzero;
    passed = passed && ok;
    json a{{"kind", "classify"}, {"r", r}, {"verdict", to_string(v)}, {"passed", ok}};
    if (!ok) {
      json wmin = json::array(), wmax = json::array();
      for (double v2 : samples[s.argmin].x) wmin.push_back(v2);
      for (double v2 : samples[s.argmax].x) wmax.push_back(v2);
      a["witness"] = json{{"min_point", wmin}, {"max_point", wmax}};
    }
    asserts.push_back(a);
  }

  json per_r = json::array();
  for (const auto& s : rep.per_r) per_r.push_back(rstats_json(s));
  json report{{"graph", json{{"description", rep.graph}, {"n", graph.dimension()}, {"config", gs.source}}},
              {"grid", grid_json(grid, graph)},
              {"per_r", per_r},
              {"tolerances", tolerances_json(c.tolerances)},
              {"seed", c.seed},
              {"max_det_residual", rep.max_det_residual},
              {"assertions", asserts},
              {"passed", passed}};

  std::filesystem::create_directories(opt.out_dir);
  std::ostringstream csv;
  write_points_csv(csv, samples, graph.dimension());
  write_text(opt.out_dir / c.csv_name, csv.str());
  write_text(opt.out_dir / c.report_name, report.dump(2) + "\n");

  log << "scan: " << rep.points << " points, " << rep.graph << '\n';
  for (const auto& s : rep.per_r)
    log << "  S_" << s.r << ": max|S|=" << fmt17(s.max_abs) << " constant=" << (s.constant ? "yes" : "no")
        << " oracle_disc=" << fmt17(s.oracle_max_disc) << '\n';
  log << (passed ? "PASSED" : "FAILED") << '\n';
  return {passed ? kOk : kAssertionFailed, report};
}

inline Outcome run_family(const RunConfig& c, const Options& opt, std::ostream& log) {
  const auto& gs = require_graph(c, "family");
  if (!gs.family) throw ConfigError("family: graph section must name a family");
  const auto& f = *gs.family;
  const auto graph = gs.build();
  json report{{"family", f.name}, {"n", graph.dimension()}};
  bool passed = true;
  if (f.name == "enneper") {
    const auto& p = f.enneper;
    const auto slopes = enneper_all_slopes(p);
    const double resid = slope_constraint_residual(slopes);
    passed = resid <= 1e-12;
    json iv = json::array();
    for (const auto& d : admissible_domain(p)) iv.push_back(detail::interval_json(d));
    json sl = json::array();
    for (double a : slopes) sl.push_back(a);
    report["r"] = p.r;
    report["beta"] = p.beta();
    report["last_slope"] = p.last_slope();
    report["sigma"] = elem_sym(p.slopes, p.r - 1);
    report["slopes"] = sl;
    report["slope_constraint_residual"] = resid;
    report["intervals"] = iv;
    log << "generalized periodic Enneper hypersurface, n=" << p.n << " r=" << p.r << '\n';
    log << "  beta = " << fmt17(p.beta()) << '\n';
    log << "  a_" << p.n << "^eff = " << fmt17(p.last_slope()) << "  (sigma_" << p.r - 1 << " = "
        << fmt17(elem_sym(p.slopes, p.r - 1)) << ")\n";
    log << "  sum 1/a_k residual = " << fmt17(resid) << '\n';
    const auto doms = admissible_domain(p);
    for (std::size_t i = 0; i < doms.size(); ++i)
      log << "  I_" << i + 1 << " = " << to_string(doms[i]) << '\n';
  } else {
    const auto& p = f.cylinder;
    report["r"] = p.r;
    report["linear_profiles"] = p.linear.size();
    report["free_profiles"] = p.free.size();
    json iv = json::array();
    for (const auto& d : graph.domains()) iv.push_back(detail::interval_json(d));
    report["intervals"] = iv;
    log << "vertical cylinder, n=" << p.n << " r=" << p.r << ": " << p.linear.size() << " linear, "
        << p.free.size() << " free profiles\n";
  }
  report["passed"] = passed;
  std::filesystem::create_directories(opt.out_dir);
  write_text(opt.out_dir / c.report_name, report.dump(2) + "\n");
  return {passed ? kOk : kAssertionFailed, report};
}

inline Outcome run_ode(const RunConfig& c, const Options& opt, std::ostream& log) {
  const OdeSpec s = c.ode.value_or(OdeSpec{});
  OdeRun run = OdeRun::inset_span(s.params, s.step, s.inset);
  if (s.span) {
    run.x_lo = s.span->lo;
    run.x_hi = s.span->hi;
    run.margin = 0.05;
  }
  const auto traj = integrate(run);
  const auto err = closed_form_error(s.params, traj);
  const auto fi = arctan_first_integral_check(traj, s.params, s.first_integral_tol);
  OdeRun conv = run;
  conv.step = s.convergence_step;
  const auto study = convergence_study(conv, s.halvings);

  bool factors_ok = true;
  json factors = json::array(), errors = json::array();
  for (double f : study.factors) {
    factors.push_back(f);
    factors_ok = factors_ok && f >= s.factor_lo && f <= s.factor_hi;
  }
  for (double e : study.errors) errors.push_back(e);
  const bool passed = err.sup_error() <= s.tol && fi.passed && factors_ok;
  json report{{"slope", s.params.slope},
              {"beta", s.params.beta},
              {"phase", s.params.phase},
              {"span", json::array({run.x_lo, run.x_hi})},
              {"step", s.step},
              {"steps", traj.size() - 1},
              {"sup_error", err.sup_error()},
              {"sup_error_f", err.sup_error_f},
              {"sup_error_v", err.sup_error_v},
              {"first_integral_deviation", fi.max_deviation},
              {"convergence_errors", errors},
              {"convergence_factors", factors},
              {"passed", passed}};
  std::filesystem::create_directories(opt.out_dir);
  write_text(opt.out_dir / c.report_name, report.dump(2) + "\n");
  log << "ode: a=" << fmt17(s.params.slope) << " beta=" << fmt17(s.params.beta) << " b=" << fmt17(s.params.phase)
      << " span=[" << fmt17(run.x_lo) << ", " << fmt17(run.x_hi) << "] h=" << fmt17(s.step) << '\n';
  log << "  sup-error = " << fmt17(err.sup_error()) << '\n';
  log << "  first-integral deviation = " << fmt17(fi.max_deviation) << '\n';
  log << "  convergence factors:";
  for (double f : study.factors) log << ' ' << fmt17(f);
  log << '\n' << (passed ? "PASSED" : "FAILED") << '\n';
  return {passed ? kOk : kAssertionFailed, report};
}

inline Outcome run_identities(const RunConfig& c, const Options& opt, std::ostream& log) {
  const auto& gs = require_graph(c, "identities");
  const auto graph = gs.build();
  const IdentitySpec s = c.identities.value_or(IdentitySpec{});
  const int n = graph.dimension();
  std::vector<int> idx;
  if (s.indices.empty()) {
    for (int i = 0; i < std::min(n, s.r + 1); ++i) idx.push_back(i);
  } else {
    for (int i : s.indices) {
      if (i < 1 || i > n) throw ConfigError("identities.indices: index outside 1..n");
      idx.push_back(i - 1);
    }
  }
  if (idx.empty()) throw ConfigError("identities: no indices");
  Rng rng(c.seed);
  double w1 = 0.0, w2 = 0.0, gr = 0.0;
  bool passed = true;
  const bool do_gr = s.r <= 3 && static_cast<int>(idx.size()) == s.r + 1;
  for (int k = 0; k < s.points; ++k) {
    const auto x = random_point(graph, rng, std::max(c.grid.inset, 0.05), c.grid.window);
    const auto a = w_derivative_identity_check(graph, x, s.r, std::span<const int>(idx.data(), 1), s.w_tol);
    w1 = std::max(w1, a.rel_error);
    passed = passed && a.passed;
    if (idx.size() >= 2) {
      const auto b = w_derivative_identity_check(graph, x, s.r, std::span<const int>(idx.data(), 2), s.w_tol);
      w2 = std::max(w2, b.rel_error);
      passed = passed && b.passed;
    }
    if (do_gr) {
      const auto g = gr_derivative_identity_check(graph, x, s.r, idx, s.gr_tol, s.base_step);
      gr = std::max(gr, g.rel_error);
      passed = passed && g.passed;
    }
  }
  json report{{"graph", json{{"description", describe(graph)}, {"config", gs.source}}},
              {"r", s.r},
              {"points", s.points},
              {"w_identity_m1_max_rel_error", w1},
              {"w_identity_m2_max_rel_error", idx.size() >= 2 ? json(w2) : json(nullptr)},
              {"gr_identity_max_rel_error", do_gr ? json(gr) : json(nullptr)},
              {"tolerances", json{{"w", s.w_tol}, {"gr", s.gr_tol}}},
              {"seed", c.seed},
              {"passed", passed}};
  std::filesystem::create_directories(opt.out_dir);
  write_text(opt.out_dir / c.report_name, report.dump(2) + "\n");
  log << "identities on " << describe(graph) << ", r=" << s.r << ", " << s.points << " points\n";
  log << "  W^{r+2} identity m=1 max rel error = " << fmt17(w1) << '\n';
  if (idx.size() >= 2) log << "  W^{r+2} identity m=2 max rel error = " << fmt17(w2) << '\n';
  if (do_gr) log << "  G_r identity max rel error = " << fmt17(gr) << '\n';
  else log << "  G_r identity skipped (needs r <= 3 and r+1 indices)\n";
  log << (passed ? "PASSED" : "FAILED") << '\n';
  return {passed ? kOk : kAssertionFailed, report};
}

inline Outcome run_sym(const RunConfig& c, const Options& opt, std::ostream& log) {
  if (!c.sym) throw ConfigError("sym: config has no sym section");
  const auto& s = *c.sym;
  const int n = static_cast<int>(s.values.size());
  json report;
  bool passed = true;
  json sig = json::array(), hs = json::array();
  for (double v : elem_sym_all(s.values)) sig.push_back(v);
  for (double v : normalized_h_all(s.values)) hs.push_back(v);
  report["sigma"] = sig;
  report["h"] = hs;
  log << "sym: n=" << n << '\n';
  if (n >= 2) {
    const auto nr = newton_check(s.values, s.tol);
    json gaps = json::array();
    for (double g : nr.gaps) gaps.push_back(g);
    report["newton"] = json{{"gaps", gaps},
                            {"holds", nr.inequality_holds},
                            {"equality_case", nr.equality_case},
                            {"values_all_equal", nr.values_all_equal}};
    passed = passed && nr.inequality_holds && nr.consistent();
    log << "  Newton gaps:";
    for (double g : nr.gaps) log << ' ' << fmt17(g);
    log << "\n  all-equal verdict: " << (nr.equality_case ? "yes" : "no") << '\n';
  }
  const int r = s.r.value_or(n);
  const auto mr = maclaurin_check(s.values, r, s.tol);
  json roots = json::array();
  for (double v : mr.roots) roots.push_back(v);
  report["maclaurin"] = json{{"r", r}, {"applicable", mr.applicable}, {"roots", roots}, {"holds", mr.chain_holds}};
  passed = passed && (!mr.applicable || mr.chain_holds);
  log << "  Maclaurin chain (r=" << r << "): "
      << (mr.applicable ? (mr.chain_holds ? "holds" : "VIOLATED") : "not applicable") << '\n';
  json zp = json::array();
  for (int k = 1; k < n; ++k) {
    const bool ok = zero_propagation_check(s.values, k, s.tol);
    zp.push_back(json{{"r", k}, {"holds", ok}});
    passed = passed && ok;
  }
  report["zero_propagation"] = zp;
  report["passed"] = passed;
  std::filesystem::create_directories(opt.out_dir);
  write_text(opt.out_dir / c.report_name, report.dump(2) + "\n");
  log << (passed ? "PASSED" : "FAILED") << '\n';
  return {passed ? kOk : kAssertionFailed, report};
}

/// Dispatch a subcommand, mapping errors to exit statuses.
inline int run(const std::string& subcommand, const Options& opt, std::ostream& log, std::ostream& err) {
  static const std::set<std::string> known{"scan", "family", "ode", "identities", "sym"};
  if (!known.count(subcommand)) {
    err << "error: unknown subcommand \"" << subcommand << "\"\n";
    return kParseError;
  }
  try {
    RunConfig c = load_config(opt.config);
    if (opt.seed) c.seed = *opt.seed;
    Outcome o;
    if (subcommand == "scan") o = run_scan(c, opt, log);
    else if (subcommand == "family") o = run_family(c, opt, log);
    else if (subcommand == "ode") o = run_ode(c, opt, log);
    else if (subcommand == "identities") o = run_identities(c, opt, log);
    else o = run_sym(c, opt, log);
    return o.status;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const DegenerateParameterError& e) {
    err << "parameter error: degenerate symmetric function: " << e.what() << '\n';
    return kDomainError;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kDomainError;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomainError;
  } catch (const RangeError& e) {
    err << "range error: " << e.what() << '\n';
    return kDomainError;
  } catch (const SingularityError& e) {
    err << "singularity: " << e.what() << '\n';
    return kDomainError;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << '\n';
    return kDomainError;
  }
}

}  // namespace transhyp::cli
