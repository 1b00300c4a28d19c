#pragma once

// Elementary symmetric polynomials, their normalized means and the
// Newton / Maclaurin / zero-propagation inequalities between them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "transhyp/errors.hpp"

namespace transhyp {

// Relative comparisons in this library use this absolute floor.
inline constexpr double kAbsFloor = 1e-12;

namespace detail {

inline void require_sym_input(std::span<const double> values) {
  if (values.empty()) throw ParameterError("symmetric-function input must hold at least one value");
  for (double v : values)
    if (!std::isfinite(v)) throw ParameterError("symmetric-function input contains a non-finite value");
}

inline void require_order(std::size_t n, int r) {
  if (r < 0 || static_cast<std::size_t>(r) > n)
    throw RangeError("order r=" + std::to_string(r) + " outside 0.." + std::to_string(n));
}

}  // namespace detail

/// sigma_0 .. sigma_n of `values` by the one-pass recurrence
/// e_j <- e_j + x * e_{j-1}, processed in the given order.
inline std::vector<double> elem_sym_all(std::span<const double> values) {
  detail::require_sym_input(values);
  std::vector<double> e(values.size() + 1, 0.0);
  e[0] = 1.0;
  std::size_t filled = 0;
  for (double x : values) {
    ++filled;
    for (std::size_t j = filled; j >= 1; --j) e[j] += x * e[j - 1];
  }
  return e;
}

/// sigma_r, truncating the recurrence at order r (O(n r)).
inline double elem_sym(std::span<const double> values, int r) {
  detail::require_sym_input(values);
  detail::require_order(values.size(), r);
  const auto rr = static_cast<std::size_t>(r);
  std::vector<double> e(rr + 1, 0.0);
  e[0] = 1.0;
  std::size_t filled = 0;
  for (double x : values) {
    filled = std::min(filled + 1, rr);
    for (std::size_t j = filled; j >= 1; --j) e[j] += x * e[j - 1];
  }
  return e[rr];
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

/// H_r = sigma_r / C(n, r).
inline double normalized_h(std::span<const double> values, int r) {
  const double s = elem_sym(values, r);
  return s / binomial(static_cast<int>(values.size()), r);
}

inline std::vector<double> normalized_h_all(std::span<const double> values) {
  auto e = elem_sym_all(values);
  const int n = static_cast<int>(values.size());
  for (int r = 0; r <= n; ++r) e[r] /= binomial(n, r);
  return e;
}

namespace detail {

inline double spread(std::span<const double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

inline double spread_scale(std::span<const double> values) {
  double m = 1.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace detail

struct NewtonReport {
  // gaps[k] = H_{k+1}^2 - H_k H_{k+2}, for r = k+1 = 1 .. n-1
  std::vector<double> gaps;
  std::vector<bool> equality;     // gap within tolerance of zero
  bool inequality_holds = true;   // every gap >= -tol * scale
  bool equality_case = false;     // an equality that forces all values equal was seen
  bool values_all_equal = false;  // max - min <= tol * spread-scale
  // The equality-case detector agrees with the direct all-equal test.
  bool consistent() const { return equality_case == values_all_equal; }
};

/// Newton's inequality H_r^2 >= H_{r-1} H_{r+1} for r = 1..n-1.
///
/// Equality at r = 1, or at 1 < r < n with H_{r+1} != 0, must only happen
/// for all-equal inputs; `equality_case` reports whether such an equality was
/// observed so the caller can compare it against `values_all_equal`.
inline NewtonReport newton_check(std::span<const double> values, double tol) {
  detail::require_sym_input(values);
  if (values.size() < 2) throw ParameterError("newton_check needs n >= 2");
  if (!(tol > 0)) throw ParameterError("newton_check needs tol > 0");

  const int n = static_cast<int>(values.size());
  const auto h = normalized_h_all(values);
  double scale = 1.0;
  for (double v : h) scale = std::max(scale, v * v);

  NewtonReport rep;
  for (int r = 1; r <= n - 1; ++r) {
    const double gap = h[r] * h[r] - h[r - 1] * h[r + 1];
    const bool eq = std::abs(gap) <= tol * scale;
    rep.gaps.push_back(gap);
    rep.equality.push_back(eq);
    if (gap < -tol * scale) rep.inequality_holds = false;
    if (eq && (r == 1 || std::abs(h[r + 1]) > tol)) rep.equality_case = true;
  }
  rep.values_all_equal = detail::spread(values) <= tol * detail::spread_scale(values);
  return rep;
}

struct MaclaurinReport {
  bool applicable = false;      // H_1 .. H_r all > 0
  std::vector<double> roots;    // H_k^{1/k}, k = 1..r (empty when not applicable)
  bool chain_holds = true;      // roots non-increasing within tolerance
  bool equality_case = false;   // some consecutive pair equal within tolerance
  bool values_all_equal = false;
};

/// Maclaurin chain H_1 >= H_2^{1/2} >= ... >= H_r^{1/r}, valid when H_1..H_r > 0.
/// The chain length is r; positivity of every H_k, k <= r, is the premise.
inline MaclaurinReport maclaurin_check(std::span<const double> values, int r, double tol) {
  detail::require_sym_input(values);
  if (r < 1) throw RangeError("maclaurin_check needs r >= 1");
  detail::require_order(values.size(), r);

  const auto h = normalized_h_all(values);
  MaclaurinReport rep;
  rep.values_all_equal = detail::spread(values) <= tol * detail::spread_scale(values);
  for (int k = 1; k <= r; ++k)
    if (!(h[k] > 0)) return rep;

  rep.applicable = true;
  for (int k = 1; k <= r; ++k) rep.roots.push_back(std::pow(h[k], 1.0 / k));
  for (std::size_t k = 0; k + 1 < rep.roots.size(); ++k) {
    const double a = rep.roots[k];
    const double b = rep.roots[k + 1];
    const double band = tol * std::max({std::abs(a), std::abs(b), kAbsFloor});
    if (b > a + band) rep.chain_holds = false;
    if (std::abs(a - b) <= band) rep.equality_case = true;
  }
  return rep;
}

/// If |H_r| <= tol and |H_{r+1}| <= tol then |H_j| <= 10 tol for r <= j <= n
/// and at most r-1 of the values exceed tol in magnitude. Returns true when the
/// premise fails (vacuous) or when the conclusion holds.
inline bool zero_propagation_check(std::span<const double> values, int r, double tol) {
  detail::require_sym_input(values);
  const int n = static_cast<int>(values.size());
  if (r < 1 || r >= n) throw RangeError("zero_propagation_check needs 1 <= r < n");

  const auto h = normalized_h_all(values);
  if (std::abs(h[r]) > tol || std::abs(h[r + 1]) > tol) return true;

  const double tol_h = 10.0 * tol;
  for (int j = r; j <= n; ++j)
    if (std::abs(h[j]) > tol_h) return false;
  const auto nonzero = std::count_if(values.begin(), values.end(),
                                     [tol](double v) { return std::abs(v) > tol; });
  return nonzero <= r - 1;
}

}  // namespace transhyp
