#pragma once

// Grid scans of S_r over translation graphs, constancy verdicts, and
// finite-difference checks of the derivative identities for W^{r+2} and G_r.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "transhyp/errors.hpp"
#include "transhyp/hypersurface.hpp"
#include "transhyp/profile.hpp"
#include "transhyp/sympoly.hpp"

namespace transhyp {

// ---------------------------------------------------------------------------
// Random sources

/// Seeded stream with a fixed mapping to [0, 1), so sequences do not depend on
/// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }
  double sign() { return uniform() < 0.5 ? -1.0 : 1.0; }

 private:
  std::mt19937_64 engine_;
};

/// Polynomial profile of degree in [min_degree, max_degree] with coefficients in [-2, 2].
inline Profile random_polynomial_profile(Rng& rng, int min_degree = 2, int max_degree = 4) {
  const int deg = rng.integer(min_degree, max_degree);
  std::vector<double> c(static_cast<std::size_t>(deg) + 1);
  for (auto& v : c) v = rng.uniform(-2.0, 2.0);
  if (std::abs(c.back()) < 0.1) c.back() = c.back() < 0 ? -0.1 : 0.1;
  return Profile::polynomial(std::move(c));
}

inline Profile random_logcos_profile(Rng& rng) {
  const double a = rng.sign() * rng.uniform(0.5, 2.0);
  const double beta = rng.uniform(0.5, 3.0);
  const double b = rng.uniform(-0.5, 0.5);
  return Profile::logcos(a, beta, b, rng.uniform(-1.0, 1.0));
}

/// Negative-control generator: all profiles polynomial, degree 2..4.
inline TranslationGraph random_polynomial_graph(int n, Rng& rng, int min_degree = 2, int max_degree = 4) {
  std::vector<Profile> ps;
  for (int i = 0; i < n; ++i) ps.push_back(random_polynomial_profile(rng, min_degree, max_degree));
  return TranslationGraph(std::move(ps));
}

/// Each profile independently polynomial or log-cos.
inline TranslationGraph random_mixed_graph(int n, Rng& rng) {
  std::vector<Profile> ps;
  for (int i = 0; i < n; ++i)
    ps.push_back(rng.uniform() < 0.5 ? random_polynomial_profile(rng) : random_logcos_profile(rng));
  return TranslationGraph(std::move(ps));
}

/// Sampling window of one axis: the domain (clipped to `window` where
/// unbounded) shrunk by `inset` times its length at both ends.
inline Interval inset_range(const Interval& domain, double inset, Interval window = {-1.0, 1.0}) {
  Interval base = domain;
  if (!std::isfinite(base.lo) && !std::isfinite(base.hi)) {
    base = window;
  } else if (!std::isfinite(base.lo)) {
    base.lo = window.lo < base.hi ? window.lo : base.hi - window.length();
  } else if (!std::isfinite(base.hi)) {
    base.hi = window.hi > base.lo ? window.hi : base.lo + window.length();
  }
  const double d = inset * base.length();
  return {base.lo + d, base.hi - d};
}

inline std::vector<double> random_point(const TranslationGraph& g, Rng& rng, double inset = 0.05,
                                        Interval window = {-1.0, 1.0}) {
  std::vector<double> x;
  for (const auto& p : g.profiles()) {
    const auto iv = inset_range(p.domain(), inset, window);
    x.push_back(rng.uniform(iv.lo, iv.hi));
  }
  return x;
}

// ---------------------------------------------------------------------------
// Grids

enum class SamplingMode { Lattice, Random };

struct AxisSpec {
  int count = 2;
  std::optional<Interval> range;  // closed sampling range; derived from the domain when absent
};

struct GridSpec {
  std::vector<AxisSpec> axes;
  double inset = 0.05;
  SamplingMode mode = SamplingMode::Lattice;
  std::uint64_t seed = 0;
  std::size_t cap = 1'000'000;
  Interval window{-1.0, 1.0};  // stands in for unbounded domain ends

  static GridSpec uniform(int n, int count, SamplingMode mode = SamplingMode::Lattice,
                          std::uint64_t seed = 0) {
    GridSpec s;
    s.axes.assign(static_cast<std::size_t>(n), AxisSpec{count, std::nullopt});
    s.mode = mode;
    s.seed = seed;
    return s;
  }

  std::size_t total_points() const {
    std::size_t t = 1;
    for (const auto& a : axes) t *= static_cast<std::size_t>(std::max(a.count, 0));
    return t;
  }

  /// Sampling ranges per axis; throws DomainError naming the offending axis.
  std::vector<Interval> resolve(const TranslationGraph& g) const {
    if (static_cast<int>(axes.size()) != g.dimension())
      throw DomainError("grid has " + std::to_string(axes.size()) + " axes, graph has n=" +
                        std::to_string(g.dimension()));
    if (!(inset >= 0.0 && inset < 0.5)) throw DomainError("grid inset must lie in [0, 0.5)");
    if (total_points() > cap)
      throw DomainError("grid has " + std::to_string(total_points()) + " points, cap is " +
                        std::to_string(cap));
    std::vector<Interval> out;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const auto& ax = axes[i];
      const auto& dom = g[static_cast<int>(i)].domain();
      const std::string name = "axis x_" + std::to_string(i + 1);
      if (ax.count < 2) throw DomainError(name + ": sample count must be >= 2");
      if (!ax.range) {
        out.push_back(inset_range(dom, inset, window));
        continue;
      }
      const Interval rg = *ax.range;
      if (!(rg.lo <= rg.hi) || !std::isfinite(rg.lo) || !std::isfinite(rg.hi))
        throw DomainError(name + ": sampling range " + to_string(rg) + " is not a finite interval");
      Interval allowed = dom;
      if (dom.bounded()) allowed = {dom.lo + inset * dom.length(), dom.hi - inset * dom.length()};
      const bool inside = dom.contains(rg.lo) && dom.contains(rg.hi) && rg.lo >= allowed.lo && rg.hi <= allowed.hi;
      if (!inside)
        throw DomainError(name + ": sampling range " + to_string(rg) + " leaves the inset domain " +
                          to_string(allowed));
      out.push_back(rg);
    }
    return out;
  }

  /// Points in row-major order (x_1 slowest) for lattices; seeded draws otherwise.
  std::vector<std::vector<double>> points(const TranslationGraph& g) const {
    const auto ranges = resolve(g);
    const std::size_t n = ranges.size();
    const std::size_t total = total_points();
    std::vector<std::vector<double>> pts;
    pts.reserve(total);
    if (mode == SamplingMode::Random) {
      Rng rng(seed);
      for (std::size_t k = 0; k < total; ++k) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(ranges[i].lo, ranges[i].hi);
        pts.push_back(std::move(x));
      }
      return pts;
    }
    std::vector<int> idx(n, 0);
    for (std::size_t k = 0; k < total; ++k) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(idx[i]) / (axes[i].count - 1);
        x[i] = ranges[i].lo + t * ranges[i].length();
      }
      pts.push_back(std::move(x));
      for (std::size_t i = n; i-- > 0;) {
        if (++idx[i] < axes[i].count) break;
        idx[i] = 0;
      }
    }
    return pts;
  }
};

// ---------------------------------------------------------------------------
// Scans

struct Tolerances {
  double zero = 1e-8;          // |S_r| below this counts as zero
  double constancy = 1e-7;     // (max - min) <= constancy * max(1, max|S_r|)
  double oracle_rel = 1e-8;    // closed vs eigenvalue route
  double oracle_abs = 1e-10;   // absolute floor for the oracle comparison
};

/// |a - b| / max(|a|, |b|, abs/rel): <= rel exactly when |a - b| <= max(rel * max(|a|,|b|), abs).
inline double oracle_discrepancy(double a, double b, const Tolerances& t) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), t.oracle_abs / t.oracle_rel});
}

struct PointSample {
  std::vector<double> x;
  double w = 1.0;
  std::vector<double> s;        // S_0 .. S_n, closed form
  std::vector<double> s_eigen;  // S_0 .. S_n, from principal curvatures
  double det_residual = 0.0;    // |det G - W^2| / W^2
};

inline PointSample sample_point(const TranslationGraph& g, std::vector<double> x) {
  const auto f = frame_at(g, x);
  PointSample ps;
  ps.w = f.w;
  ps.s = f.s;
  ps.s_eigen = elem_sym_all(std::span<const double>(f.principal.data(), static_cast<std::size_t>(f.principal.size())));
  ps.det_residual = metric_det_residual(f);
  ps.x = std::move(x);
  return ps;
}

/// Evaluate every point; threads only split the index range, results are
/// written by index so the output does not depend on the thread count.
inline std::vector<PointSample> evaluate_points(const TranslationGraph& g,
                                                std::vector<std::vector<double>> pts,
                                                unsigned threads = 1) {
  std::vector<PointSample> out(pts.size());
  for (const auto& x : pts) g.require_inside(x);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(pts.size(), 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = sample_point(g, std::move(pts[i]));
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  const std::size_t chunk = (pts.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        const std::size_t lo = t * chunk, hi = std::min(pts.size(), lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) out[i] = sample_point(g, std::move(pts[i]));
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

struct RStats {
  int r = 0;
  double max_abs = 0.0;
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
  bool constant = false;
  double value = std::numeric_limits<double>::quiet_NaN();  // mean when constant
  double oracle_max_disc = 0.0;
  std::size_t argmin = 0;
  std::size_t argmax = 0;
};

/// Statistics of S_r over the samples, reduced sequentially in index order.
inline RStats summarize(std::span<const PointSample> samples, int r, const Tolerances& tol) {
  RStats st;
  st.r = r;
  if (samples.empty()) return st;
  const auto k = static_cast<std::size_t>(r);
  st.min = st.max = samples[0].s[k];
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double v = samples[i].s[k];
    sum += v;
    st.max_abs = std::max(st.max_abs, std::abs(v));
    if (v < st.min) { st.min = v; st.argmin = i; }
    if (v > st.max) { st.max = v; st.argmax = i; }
    st.oracle_max_disc = std::max(st.oracle_max_disc, oracle_discrepancy(v, samples[i].s_eigen[k], tol));
  }
  st.mean = sum / static_cast<double>(samples.size());
  double sq = 0.0;
  for (const auto& p : samples) sq += (p.s[k] - st.mean) * (p.s[k] - st.mean);
  st.std = std::sqrt(sq / static_cast<double>(samples.size()));
  st.constant = (st.max - st.min) <= tol.constancy * std::max(1.0, st.max_abs);
  if (st.constant) st.value = st.mean;
  return st;
}

struct VerificationReport {
  std::string graph;
  GridSpec grid;
  Tolerances tolerances;
  std::vector<RStats> per_r;
  std::size_t points = 0;
  double max_det_residual = 0.0;

  bool oracle_agreement() const {
    return std::all_of(per_r.begin(), per_r.end(),
                       [&](const RStats& s) { return s.oracle_max_disc <= tolerances.oracle_rel; });
  }
  const RStats* find(int r) const {
    for (const auto& s : per_r)
      if (s.r == r) return &s;
    return nullptr;
  }
};

inline std::string describe(const TranslationGraph& g) {
  std::string d = "translation graph n=" + std::to_string(g.dimension()) + " [";
  for (int i = 0; i < g.dimension(); ++i) d += (i ? ", " : "") + g[i].describe();
  return d + "]";
}

inline void require_r_set(const TranslationGraph& g, std::span<const int> r_set) {
  for (int r : r_set)
    if (r < 1 || r > g.dimension())
      throw RangeError("r=" + std::to_string(r) + " outside 1.." + std::to_string(g.dimension()));
}

inline VerificationReport scan(const TranslationGraph& g, const GridSpec& spec, std::span<const int> r_set,
                               const Tolerances& tol = {}, unsigned threads = 1,
                               std::vector<PointSample>* samples_out = nullptr) {
  require_r_set(g, r_set);
  auto samples = evaluate_points(g, spec.points(g), threads);
  VerificationReport rep;
  rep.graph = describe(g);
  rep.grid = spec;
  rep.tolerances = tol;
  rep.points = samples.size();
  for (const auto& s : samples) rep.max_det_residual = std::max(rep.max_det_residual, s.det_residual);
  for (int r : r_set) rep.per_r.push_back(summarize(samples, r, tol));
  if (samples_out) *samples_out = std::move(samples);
  return rep;
}

enum class ConstancyVerdict { ConstantZero, ConstantNonzero, Nonconstant };

inline const char* to_string(ConstancyVerdict v) {
  switch (v) {
    case ConstancyVerdict::ConstantZero: return "constant-zero";
    case ConstancyVerdict::ConstantNonzero: return "constant-nonzero";
    default: return "nonconstant";
  }
}

struct ConstancyReport {
  ConstancyVerdict verdict = ConstancyVerdict::Nonconstant;
  RStats stats;
  GridSpec grid;
  Tolerances tolerances;
  // Points attaining min and max of S_r; the witness for any constant verdict.
  std::vector<double> witness_min;
  std::vector<double> witness_max;
  // A constant nonzero S_r contradicts the classification; flag it loudly.
  bool anomaly() const { return verdict == ConstancyVerdict::ConstantNonzero; }
};

/// Constant-then-zero classification of S_r over the grid, for 2 < r < n.
inline ConstancyReport constancy_witness_scan(const TranslationGraph& g, const GridSpec& spec, int r,
                                            const Tolerances& tol = {}, unsigned threads = 1) {
  if (!(2 < r && r < g.dimension()))
    throw ParameterError("constancy_witness_scan requires 2 < r < n");
  const auto samples = evaluate_points(g, spec.points(g), threads);
  ConstancyReport rep;
  rep.grid = spec;
  rep.tolerances = tol;
  rep.stats = summarize(samples, r, tol);
  if (!rep.stats.constant) rep.verdict = ConstancyVerdict::Nonconstant;
  else if (rep.stats.max_abs <= tol.zero) rep.verdict = ConstancyVerdict::ConstantZero;
  else rep.verdict = ConstancyVerdict::ConstantNonzero;
  if (!samples.empty()) {
    rep.witness_min = samples[rep.stats.argmin].x;
    rep.witness_max = samples[rep.stats.argmax].x;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Derivative identities

struct IdentityReport {
  double lhs = 0.0;        // finite-difference side
  double rhs = 0.0;        // analytic side
  double scale = 1.0;      // max(|rhs|, |function value|, 1)
  double rel_error = 0.0;  // |lhs - rhs| / scale
  double prefactor = 1.0;  // prod_j (r + 4 - 2j) for the W identity, 1 otherwise
  bool passed = false;
};

namespace detail {

inline void require_distinct(std::span<const int> idx, int n) {
  for (std::size_t a = 0; a < idx.size(); ++a) {
    if (idx[a] < 0 || idx[a] >= n) throw RangeError("identity index out of range");
    for (std::size_t b = a + 1; b < idx.size(); ++b)
      if (idx[a] == idx[b]) throw ParameterError("identity indices must be distinct");
  }
}

// Mixed central difference d^m F / dx_{i_1}...dx_{i_m} over the 2^m corner stencil.
inline double mixed_central_difference(const TranslationGraph& g,
                                       const std::function<double(std::span<const double>)>& fn,
                                       std::span<const double> x, std::span<const int> idx,
                                       std::span<const double> steps) {
  const std::size_t m = idx.size();
  std::vector<double> y(x.begin(), x.end());
  double acc = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    double sign = 1.0;
    std::copy(x.begin(), x.end(), y.begin());
    for (std::size_t k = 0; k < m; ++k) {
      const bool minus = (mask >> k) & 1U;
      y[static_cast<std::size_t>(idx[k])] += minus ? -steps[k] : steps[k];
      if (minus) sign = -sign;
    }
    if (!g.contains(y)) throw StencilError("finite-difference stencil leaves the graph domain");
    acc += sign * fn(y);
  }
  double denom = 1.0;
  for (double h : steps) denom *= 2.0 * h;
  return acc / denom;
}

inline double w_power(const TranslationGraph& g, std::span<const double> x, int p) {
  double w2 = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = g[static_cast<int>(i)].eval(x[i], 1);
    w2 += d * d;
  }
  return std::pow(w2, 0.5 * p);
}

}  // namespace detail

/// d^m W^{r+2} / dx_{i_1}..dx_{i_m} = prod_{j=1}^m (r+4-2j) prod_k f'_{i_k} f''_{i_k} W^{r+2-2m},
/// checked by central differences with base step 1e-4 max(1, |x_i|), one
/// Richardson level. Indices are 0-based.
inline IdentityReport w_derivative_identity_check(const TranslationGraph& g, std::span<const double> x,
                                                  int r, std::span<const int> indices, double tol) {
  const int n = g.dimension();
  g.require_inside(x);
  if (r < 1 || r > n) throw RangeError("r outside 1..n");
  if (indices.empty() || indices.size() > 2) throw RangeError("W identity supports m = 1 or 2");
  detail::require_distinct(indices, n);
  const int m = static_cast<int>(indices.size());

  std::vector<double> steps;
  for (int i : indices) steps.push_back(1e-4 * std::max(1.0, std::abs(x[static_cast<std::size_t>(i)])));
  auto fn = [&](std::span<const double> y) { return detail::w_power(g, y, r + 2); };

  // steps h and h/2 combined once by Richardson; plain central differences
  // leave an h^2 term that is ~1e-5 near log-cos branch ends
  auto half = steps;
  for (auto& v : half) v *= 0.5;
  const double d0 = detail::mixed_central_difference(g, fn, x, indices, steps);
  const double d1 = detail::mixed_central_difference(g, fn, x, indices, half);
  IdentityReport rep;
  rep.lhs = (4.0 * d1 - d0) / 3.0;
  rep.prefactor = 1.0;
  for (int j = 1; j <= m; ++j) rep.prefactor *= static_cast<double>(r + 4 - 2 * j);
  double prod = 1.0;
  for (int i : indices) {
    const double xi = x[static_cast<std::size_t>(i)];
    prod *= g[i].eval(xi, 1) * g[i].eval(xi, 2);
  }
  rep.rhs = rep.prefactor * prod * detail::w_power(g, x, r + 2 - 2 * m);
  rep.scale = std::max({std::abs(rep.rhs), detail::w_power(g, x, r + 2), 1.0});
  rep.rel_error = std::abs(rep.lhs - rep.rhs) / rep.scale;
  rep.passed = rep.rel_error <= tol;
  return rep;
}

/// d^{r+1} G_r / dx_{l_1}..dx_{l_{r+1}} = 2 sum_k f'_{l_k} f''_{l_k} prod_{m != k} f'''_{l_m}.
///
/// The left side is a nested central difference of g_r at steps h, h/2, h/4
/// (h = base_step max(1, |x_l|)) combined by two Richardson levels, which
/// removes the h^2 and h^4 error terms. Only r <= 3 is supported: the stencil
/// has 2^{r+1} points per level. Indices are 0-based.
inline IdentityReport gr_derivative_identity_check(const TranslationGraph& g, std::span<const double> x,
                                                   int r, std::span<const int> indices, double tol,
                                                   double base_step = 0.1) {
  const int n = g.dimension();
  g.require_inside(x);
  if (r < 1 || r > n) throw RangeError("r outside 1..n");
  if (r > 3)
    throw UnsupportedError("G_r identity by finite differences is limited to r <= 3, got r=" +
                           std::to_string(r));
  if (static_cast<int>(indices.size()) != r + 1)
    throw ParameterError("G_r identity needs r+1 distinct indices");
  detail::require_distinct(indices, n);

  auto fn = [&](std::span<const double> y) { return g_r(g, y, r); };
  std::vector<double> h;
  for (int i : indices) h.push_back(base_step * std::max(1.0, std::abs(x[static_cast<std::size_t>(i)])));
  auto level = [&](double frac) {
    std::vector<double> s(h);
    for (auto& v : s) v *= frac;
    return detail::mixed_central_difference(g, fn, x, indices, s);
  };
  const double d0 = level(1.0), d1 = level(0.5), d2 = level(0.25);
  const double r0 = (4.0 * d1 - d0) / 3.0;
  const double r1 = (4.0 * d2 - d1) / 3.0;

  IdentityReport rep;
  rep.lhs = (16.0 * r1 - r0) / 15.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const int lk = indices[k];
    const double xk = x[static_cast<std::size_t>(lk)];
    double term = g[lk].eval(xk, 1) * g[lk].eval(xk, 2);
    for (std::size_t j = 0; j < indices.size(); ++j)
      if (j != k) term *= g[indices[j]].eval(x[static_cast<std::size_t>(indices[j])], 3);
    sum += term;
  }
  rep.rhs = 2.0 * sum;
  rep.scale = std::max({std::abs(rep.rhs), std::abs(g_r(g, x, r)), 1.0});
  rep.rel_error = std::abs(rep.lhs - rep.rhs) / rep.scale;
  rep.passed = rep.rel_error <= tol;
  return rep;
}

}  // namespace transhyp
