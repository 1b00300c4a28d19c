#pragma once

// Single-variable profile curves f(x) with analytic derivatives up to order 3.

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <functional>
#include <limits>
#include <type_traits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "transhyp/errors.hpp"

namespace transhyp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool contains(double x) const { return x > lo && x < hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

inline std::string to_string(const Interval& iv) {
  auto end = [](double v) {
    if (std::isinf(v)) return std::string(v < 0 ? "-inf" : "inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  return "(" + end(iv.lo) + ", " + end(iv.hi) + ")";
}

struct LinearKind {
  double slope = 0.0;
  double offset = 0.0;
};

/// Coefficients in ascending powers: c0 + c1 x + c2 x^2 + ...
struct PolynomialKind {
  std::vector<double> coefficients;
};

/// f(x) = -(1/a) ln cos(a sqrt(beta) x + b) + c on the branch where cos > 0.
/// Solves f'' / (beta + f'^2) = a with f' = sqrt(beta) tan(a sqrt(beta) x + b).
struct LogCosKind {
  double slope = 1.0;  // a
  double beta = 1.0;
  double phase = 0.0;  // b
  double offset = 0.0; // c
};

/// User-supplied evaluators for orders 0..3.
struct CustomKind {
  std::array<std::function<double(double)>, 4> eval;
  std::string name = "custom";
};

class Profile {
 public:
  using Kind = std::variant<LinearKind, PolynomialKind, LogCosKind, CustomKind>;

  static Profile linear(double slope, double offset = 0.0) {
    return Profile(LinearKind{slope, offset}, Interval{});
  }

  static Profile polynomial(std::vector<double> coefficients, Interval domain = {}) {
    if (coefficients.empty()) coefficients.push_back(0.0);
    for (double c : coefficients)
      if (!std::isfinite(c)) throw ParameterError("polynomial coefficient is not finite");
    return Profile(PolynomialKind{std::move(coefficients)}, domain);
  }

  /// Log-cos profile on the maximal interval |a sqrt(beta) x + b| < pi/2.
  static Profile logcos(double slope, double beta, double phase = 0.0, double offset = 0.0) {
    if (!(slope != 0.0) || !std::isfinite(slope)) throw ParameterError("log-cos slope must be nonzero");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("log-cos beta must be positive");
    const double k = slope * std::sqrt(beta);
    const double center = -phase / k;
    const double half = std::numbers::pi / (2.0 * std::abs(k));
    return Profile(LogCosKind{slope, beta, phase, offset}, Interval{center - half, center + half});
  }

  /// Log-cos profile restricted to a sub-interval of its maximal domain.
  static Profile logcos(double slope, double beta, double phase, double offset, Interval domain) {
    Profile p = logcos(slope, beta, phase, offset);
    if (domain.lo < p.domain_.lo || domain.hi > p.domain_.hi || !(domain.lo < domain.hi))
      throw ParameterError("log-cos domain " + to_string(domain) + " leaves the branch " +
                           to_string(p.domain_));
    p.domain_ = domain;
    return p;
  }

  static Profile custom(std::array<std::function<double(double)>, 4> eval, Interval domain,
                        std::string name = "custom") {
    for (const auto& f : eval)
      if (!f) throw ParameterError("custom profile must supply evaluators for orders 0..3");
    if (!(domain.lo < domain.hi)) throw ParameterError("custom profile domain is empty");
    return Profile(CustomKind{std::move(eval), std::move(name)}, domain);
  }

  const Kind& kind() const { return kind_; }
  const Interval& domain() const { return domain_; }

  /// f, f', f'' or f''' at x. Throws DomainError outside the open domain.
  double eval(double x, int order) const {
    if (order < 0 || order > 3) throw RangeError("profile derivative order must be 0..3");
    if (!domain_.contains(x))
      throw DomainError("x=" + std::to_string(x) + " outside profile domain " + to_string(domain_));
    const double v = std::visit([&](const auto& k) { return eval_kind(k, x, order); }, kind_);
    if (!std::isfinite(v))
      throw DomainError("profile evaluator returned a non-finite value at x=" + std::to_string(x));
    return v;
  }

  double operator()(double x) const { return eval(x, 0); }

  std::string describe() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, LinearKind>) return "linear";
          else if constexpr (std::is_same_v<K, PolynomialKind>) return "polynomial";
          else if constexpr (std::is_same_v<K, LogCosKind>) return "logcos";
          else return k.name;
        },
        kind_);
  }

 private:
  Profile(Kind kind, Interval domain) : kind_(std::move(kind)), domain_(domain) {}

  static double eval_kind(const LinearKind& k, double x, int order) {
    switch (order) {
      case 0: return k.slope * x + k.offset;
      case 1: return k.slope;
      default: return 0.0;
    }
  }

  static double eval_kind(const PolynomialKind& k, double x, int order) {
    // Horner on the order-th derivative's coefficients.
    const auto& c = k.coefficients;
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > static_cast<std::size_t>(order);) {
      double falling = 1.0;
      for (int j = 0; j < order; ++j) falling *= static_cast<double>(i - j);
      acc = acc * x + falling * c[i];
    }
    return acc;
  }

  static double eval_kind(const LogCosKind& k, double x, int order) {
    const double sb = std::sqrt(k.beta);
    const double u = k.slope * sb * x + k.phase;
    const double cu = std::cos(u);
    switch (order) {
      case 0: return -std::log(cu) / k.slope + k.offset;
      case 1: return sb * std::tan(u);
      case 2: return k.slope * k.beta / (cu * cu);
      default: return 2.0 * k.slope * k.slope * k.beta * sb * std::tan(u) / (cu * cu);
    }
  }

  static double eval_kind(const CustomKind& k, double x, int order) { return k.eval[order](x); }

  Kind kind_;
  Interval domain_;
};

/// Slope-parametrized log-cos profile on its maximal branch.
inline Profile logcos_from_slope(double a, double beta, double b, double c) {
  return Profile::logcos(a, beta, b, c);
}

struct ConsistencyReport {
  // max_rel_error[k-1]: order-k analytic derivative vs central difference of order k-1
  std::array<double, 3> max_rel_error{0.0, 0.0, 0.0};
  double worst() const { return *std::max_element(max_rel_error.begin(), max_rel_error.end()); }
  bool passed = true;
  int samples = 0;
};

/// Compare analytic derivatives of orders 1..3 with central differences of the
/// order below, at `samples` evenly spaced interior points of `window`
/// (defaults to the profile domain clipped to [-1, 1] where unbounded).
/// Relative error uses max(|analytic|, 1) as denominator.
inline ConsistencyReport derivative_consistency(const Profile& p, int samples, double tol,
                                                std::optional<Interval> window = std::nullopt) {
  if (samples < 1) throw ParameterError("derivative_consistency needs samples >= 1");
  Interval w = window.value_or(Interval{std::max(p.domain().lo, -1.0), std::min(p.domain().hi, 1.0)});
  if (!(w.lo < w.hi)) throw StencilError("derivative_consistency window is empty");

  ConsistencyReport rep;
  rep.samples = samples;
  for (int i = 0; i < samples; ++i) {
    const double x = w.lo + (i + 0.5) / samples * w.length();
    const double h = std::max(1e-5, 1e-5 * std::abs(x));
    if (!p.domain().contains(x - h) || !p.domain().contains(x + h))
      throw StencilError("stencil at x=" + std::to_string(x) + " leaves profile domain " +
                         to_string(p.domain()));
    for (int k = 1; k <= 3; ++k) {
      const double fd = (p.eval(x + h, k - 1) - p.eval(x - h, k - 1)) / (2.0 * h);
      const double an = p.eval(x, k);
      const double err = std::abs(fd - an) / std::max(std::abs(an), 1.0);
      rep.max_rel_error[k - 1] = std::max(rep.max_rel_error[k - 1], err);
    }
  }
  rep.passed = rep.worst() <= tol;
  return rep;
}

}  // namespace transhyp
