#pragma once

// The two families of translation hypersurfaces with S_r = 0 (2 < r < n):
// vertical cylinders over r-1 free profiles, and generalized periodic Enneper
// hypersurfaces built from r+1 log-cos profiles with sum of 1/a_k = 0.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "transhyp/errors.hpp"
#include "transhyp/hypersurface.hpp"
#include "transhyp/profile.hpp"
#include "transhyp/sympoly.hpp"

namespace transhyp {

inline constexpr double kDegeneracyTol = 1e-12;

namespace detail {

inline void require_family_orders(int n, int r) {
  if (!(2 < r && r < n))
    throw ParameterError("family requires 2 < r < n, got n=" + std::to_string(n) +
                         ", r=" + std::to_string(r));
}

// sigma_deg(a) / max|a|^deg, the scale-free value tested against kDegeneracyTol.
inline double normalized_sigma(std::span<const double> a, int deg) {
  double amax = 0.0;
  for (double v : a) amax = std::max(amax, std::abs(v));
  return elem_sym(a, deg) / std::pow(amax, deg);
}

}  // namespace detail

struct CylinderParams {
  int n = 0;
  int r = 0;
  std::vector<double> linear;   // a_1 .. a_{n-r+1}
  std::vector<Profile> free;    // f_{n-r+2} .. f_n
  double offset = 0.0;          // b

  void validate() const {
    detail::require_family_orders(n, r);
    if (static_cast<int>(linear.size()) != n - r + 1)
      throw ParameterError("cylinder needs n-r+1=" + std::to_string(n - r + 1) +
                           " linear coefficients, got " + std::to_string(linear.size()));
    if (static_cast<int>(free.size()) != r - 1)
      throw ParameterError("cylinder needs r-1=" + std::to_string(r - 1) + " free profiles, got " +
                           std::to_string(free.size()));
  }
};

inline TranslationGraph make_cylinder(const CylinderParams& p) {
  p.validate();
  std::vector<Profile> profiles;
  profiles.reserve(static_cast<std::size_t>(p.n));
  for (std::size_t i = 0; i < p.linear.size(); ++i)
    profiles.push_back(Profile::linear(p.linear[i], i == 0 ? p.offset : 0.0));
  for (const auto& f : p.free) profiles.push_back(f);
  return TranslationGraph(std::move(profiles));
}

struct LogCosFamily {
  std::vector<Profile> profiles;  // m log-cos profiles
  std::vector<double> slopes;     // a_1 .. a_m, a_m derived
  std::vector<double> phases;     // b_1 .. b_m
  double beta = 1.0;

  int size() const { return static_cast<int>(profiles.size()); }
  double derived_slope() const { return slopes.back(); }
};

/// a_m = -(a_1 ... a_{m-1}) / sigma_{m-2}(a_1, ..., a_{m-1}), equivalent to sum_k 1/a_k = 0.
inline double derived_last_slope(std::span<const double> slopes) {
  if (slopes.empty()) throw ParameterError("derived slope needs at least one slope");
  for (double a : slopes)
    if (!(a != 0.0) || !std::isfinite(a)) throw ParameterError("family slopes must be nonzero and finite");
  const int deg = static_cast<int>(slopes.size()) - 1;
  if (std::abs(detail::normalized_sigma(slopes, deg)) <= kDegeneracyTol)
    throw DegenerateParameterError("sigma_" + std::to_string(deg) + " of the slopes a_1..a_" +
                                   std::to_string(slopes.size()) +
                                   " vanishes; the derived last slope is undefined");
  double prod = 1.0;
  for (double a : slopes) prod *= a;
  return -prod / elem_sym(slopes, deg);
}

/// Profiles f_k = -(1/a_k) ln cos(a_k sqrt(beta) x + b_k) + c_k with c_1 = c and
/// c_k = 0 otherwise; the last slope is derived. These solve
/// sum_k prod_{j != k} f_j'' (beta + f_k'^2) = 0 identically.
inline LogCosFamily make_logcos_family(int m, double beta, std::span<const double> slopes,
                                     std::span<const double> phases, double c) {
  if (m < 2) throw ParameterError("log-cos family needs m >= 2");
  if (!(beta > 0.0)) throw ParameterError("log-cos family needs beta > 0");
  if (static_cast<int>(slopes.size()) != m - 1)
    throw ParameterError("log-cos family needs m-1=" + std::to_string(m - 1) + " slopes, got " +
                         std::to_string(slopes.size()));
  if (static_cast<int>(phases.size()) != m)
    throw ParameterError("log-cos family needs m=" + std::to_string(m) + " phases, got " +
                         std::to_string(phases.size()));

  LogCosFamily fam;
  fam.beta = beta;
  fam.slopes.assign(slopes.begin(), slopes.end());
  fam.slopes.push_back(derived_last_slope(slopes));
  fam.phases.assign(phases.begin(), phases.end());
  for (int k = 0; k < m; ++k)
    fam.profiles.push_back(Profile::logcos(fam.slopes[k], beta, fam.phases[k], k == 0 ? c : 0.0));
  return fam;
}

/// Residual of sum_k prod_{j != k} f_j''(x_j) (beta + f_k'(x_k)^2) divided by
/// the largest term magnitude.
inline double logcos_family_residual(const LogCosFamily& fam, std::span<const double> x) {
  const auto m = static_cast<std::size_t>(fam.size());
  if (x.size() != m) throw DomainError("family residual point has the wrong dimension");
  std::vector<double> d1(m), d2(m);
  for (std::size_t k = 0; k < m; ++k) {
    d1[k] = fam.profiles[k].eval(x[k], 1);
    d2[k] = fam.profiles[k].eval(x[k], 2);
  }
  double sum = 0.0, biggest = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double term = fam.beta + d1[k] * d1[k];
    for (std::size_t j = 0; j < m; ++j)
      if (j != k) term *= d2[j];
    sum += term;
    biggest = std::max(biggest, std::abs(term));
  }
  return std::abs(sum) / std::max(biggest, kAbsFloor);
}

/// |sum_k 1/a_k| / sum_k |1/a_k|.
inline double slope_constraint_residual(std::span<const double> slopes) {
  double sum = 0.0, mag = 0.0;
  for (double a : slopes) {
    sum += 1.0 / a;
    mag += std::abs(1.0 / a);
  }
  return std::abs(sum) / std::max(mag, kAbsFloor);
}

struct EnneperParams {
  int n = 0;
  int r = 0;
  std::vector<double> linear;  // a_1 .. a_{n-r-1}, possibly empty
  std::vector<double> slopes;  // a_{n-r} .. a_{n-1}
  std::vector<double> phases;  // b_{n-r} .. b_n
  double offset = 0.0;         // c

  void validate() const {
    detail::require_family_orders(n, r);
    if (static_cast<int>(linear.size()) != n - r - 1)
      throw ParameterError("Enneper needs n-r-1=" + std::to_string(n - r - 1) +
                           " linear coefficients, got " + std::to_string(linear.size()));
    if (static_cast<int>(slopes.size()) != r)
      throw ParameterError("Enneper needs r=" + std::to_string(r) + " slopes, got " +
                           std::to_string(slopes.size()));
    if (static_cast<int>(phases.size()) != r + 1)
      throw ParameterError("Enneper needs r+1=" + std::to_string(r + 1) + " phases, got " +
                           std::to_string(phases.size()));
    for (double a : slopes)
      if (!(a != 0.0) || !std::isfinite(a)) throw ParameterError("Enneper slopes must be nonzero and finite");
    if (std::abs(detail::normalized_sigma(slopes, r - 1)) <= kDegeneracyTol)
      throw DegenerateParameterError("sigma_" + std::to_string(r - 1) + "(a_" + std::to_string(n - r) +
                                     ",...,a_" + std::to_string(n - 1) + ") vanishes");
  }

  /// beta = 1 + sum of squared linear coefficients.
  double beta() const {
    double b = 1.0;
    for (double a : linear) b += a * a;
    return b;
  }

  /// a_n = -(a_{n-r} ... a_{n-1}) / sigma_{r-1}(a_{n-r}, ..., a_{n-1}).
  double last_slope() const {
    validate();
    return derived_last_slope(slopes);
  }
};

inline TranslationGraph make_enneper(const EnneperParams& p) {
  p.validate();
  std::vector<Profile> profiles;
  profiles.reserve(static_cast<std::size_t>(p.n));
  for (double a : p.linear) profiles.push_back(Profile::linear(a));
  // The r+1 curved profiles form a log-cos family with m = r+1.
  auto fam = make_logcos_family(p.r + 1, p.beta(), p.slopes, p.phases, p.offset);
  for (auto& f : fam.profiles) profiles.push_back(std::move(f));
  return TranslationGraph(std::move(profiles));
}

/// R for the linear block, then |a_k sqrt(beta) x + b_k| < pi/2 for the curved block.
inline std::vector<Interval> admissible_domain(const EnneperParams& p) {
  return make_enneper(p).domains();
}

/// Slopes a_{n-r} .. a_n of the curved block, a_n derived.
inline std::vector<double> enneper_all_slopes(const EnneperParams& p) {
  auto s = p.slopes;
  s.push_back(p.last_slope());
  return s;
}

}  // namespace transhyp
