#pragma once

// Numerical integration of f'' = a (beta + f'^2) with fixed-step classic RK4,
// compared against the log-cos closed form.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "transhyp/errors.hpp"

namespace transhyp {

struct OdeParams {
  double slope = 1.0;  // a
  double beta = 1.0;
  double phase = 0.0;  // b

  double frequency() const { return slope * std::sqrt(beta); }
  double argument(double x) const { return frequency() * x + phase; }

  /// Closed-form solution with zero offset: f = -(1/a) ln cos(u), f' = sqrt(beta) tan(u).
  double exact_value(double x) const { return -std::log(std::cos(argument(x))) / slope; }
  double exact_slope(double x) const { return std::sqrt(beta) * std::tan(argument(x)); }
};

struct OdeRun {
  OdeParams params;
  double x_lo = 0.0;
  double x_hi = 0.0;
  double step = 1e-3;
  double margin = 0.05;  // required clearance |u| <= pi/2 - margin on the span

  void validate() const {
    if (!(params.slope != 0.0)) throw ParameterError("ODE slope must be nonzero");
    if (!(params.beta > 0.0)) throw ParameterError("ODE beta must be positive");
    if (!(step > 0.0)) throw ParameterError("ODE step must be positive");
    if (!(margin >= 0.05)) throw ParameterError("ODE margin must be at least 0.05");
    if (!(x_lo <= x_hi)) throw ParameterError("ODE span must satisfy x_lo <= x_hi");
    // |u| is convex in x, so checking the endpoints covers the span.
    const double limit = std::numbers::pi / 2 - margin;
    for (double x : {x_lo, x_hi})
      if (std::abs(params.argument(x)) > limit + 1e-12)
        throw ParameterError("ODE span endpoint x=" + std::to_string(x) +
                             " is closer than the margin to a cos singularity");
  }

  /// Span inset by `inset` (in x) from both singularities; the inset is widened
  /// when needed so the clearance in u is at least 0.05.
  static OdeRun inset_span(OdeParams p, double step, double inset = 0.05) {
    const double k = std::abs(p.frequency());
    const double dx = std::max(inset, 0.05 / k);
    const double center = -p.phase / p.frequency();
    const double half = std::numbers::pi / (2.0 * k);
    return OdeRun{p, center - half + dx, center + half - dx, step, std::max(0.05, dx * k)};
  }
};

struct TrajectoryPoint {
  double x;
  double f;
  double v;  // f'
};

using Trajectory = std::vector<TrajectoryPoint>;

/// Classic RK4 on (f, v)' = (v, a (beta + v^2)), seeded from the closed form at
/// x_lo. The span is divided into ceil(span/step) equal steps.
inline Trajectory integrate(const OdeRun& run) {
  run.validate();
  const auto& p = run.params;
  const double span = run.x_hi - run.x_lo;
  const auto steps = static_cast<long>(std::ceil(span / run.step - 1e-9));
  Trajectory traj;
  traj.reserve(static_cast<std::size_t>(steps) + 1);

  double x = run.x_lo;
  double f = p.exact_value(x);
  double v = p.exact_slope(x);
  traj.push_back({x, f, v});
  if (steps <= 0) return traj;

  const double h = span / static_cast<double>(steps);
  auto accel = [&](double vv) { return p.slope * (p.beta + vv * vv); };
  for (long i = 0; i < steps; ++i) {
    const double k1f = v, k1v = accel(v);
    const double k2f = v + 0.5 * h * k1v, k2v = accel(k2f);
    const double k3f = v + 0.5 * h * k2v, k3v = accel(k3f);
    const double k4f = v + h * k3v, k4v = accel(k4f);
    f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    x = run.x_lo + static_cast<double>(i + 1) * h;
    if (!std::isfinite(v) || std::abs(v) > 1e12)
      throw SingularityError("ODE solution blew up near x=" + std::to_string(x));
    traj.push_back({x, f, v});
  }
  return traj;
}

/// Sampled closed-form trajectory on the same abscissae as `like`.
inline Trajectory exact_trajectory(const OdeParams& p, const Trajectory& like) {
  Trajectory t;
  t.reserve(like.size());
  for (const auto& pt : like) t.push_back({pt.x, p.exact_value(pt.x), p.exact_slope(pt.x)});
  return t;
}

struct OdeErrorReport {
  double sup_error_f = 0.0;
  double sup_error_v = 0.0;
  double sup_error() const { return std::max(sup_error_f, sup_error_v); }
};

/// Sup over the trajectory of |numeric - exact| for f and f'.
inline OdeErrorReport closed_form_error(const OdeParams& p, const Trajectory& traj) {
  OdeErrorReport rep;
  for (const auto& pt : traj) {
    const double fe = p.exact_value(pt.x);
    const double ve = p.exact_slope(pt.x);
    rep.sup_error_f = std::max(rep.sup_error_f, std::abs(pt.f - fe));
    rep.sup_error_v = std::max(rep.sup_error_v, std::abs(pt.v - ve));
  }
  return rep;
}

struct FirstIntegralReport {
  double max_deviation = 0.0;  // max |arctan(v / sqrt(beta)) - a sqrt(beta) x - b|
  bool passed = true;
};

/// arctan(f'/sqrt(beta)) - a sqrt(beta) x must stay equal to b along the trajectory.
inline FirstIntegralReport arctan_first_integral_check(const Trajectory& traj, const OdeParams& p,
                                                       double tol) {
  FirstIntegralReport rep;
  const double sb = std::sqrt(p.beta);
  for (const auto& pt : traj) {
    const double dev = std::abs(std::atan(pt.v / sb) - p.frequency() * pt.x - p.phase);
    rep.max_deviation = std::max(rep.max_deviation, dev);
  }
  rep.passed = rep.max_deviation <= tol;
  return rep;
}

struct ConvergenceReport {
  std::vector<double> steps;
  std::vector<double> errors;   // sup error at each step
  std::vector<double> factors;  // errors[i] / errors[i+1]
};

/// Sup error against the closed form for step, step/2, ..., step/2^halvings.
inline ConvergenceReport convergence_study(OdeRun run, int halvings) {
  ConvergenceReport rep;
  for (int i = 0; i <= halvings; ++i) {
    rep.steps.push_back(run.step);
    rep.errors.push_back(closed_form_error(run.params, integrate(run)).sup_error());
    run.step /= 2.0;
  }
  for (std::size_t i = 0; i + 1 < rep.errors.size(); ++i)
    rep.factors.push_back(rep.errors[i] / rep.errors[i + 1]);
  return rep;
}

}  // namespace transhyp
