#pragma once

// Translation graphs x_{n+1} = f_1(x_1) + ... + f_n(x_n) and their extrinsic
// geometry at a point: metric, second fundamental form, shape operator,
// principal curvatures and the r-th mean curvatures S_r.

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "transhyp/errors.hpp"
#include "transhyp/profile.hpp"
#include "transhyp/sympoly.hpp"

namespace transhyp {

class TranslationGraph {
 public:
  explicit TranslationGraph(std::vector<Profile> profiles) : profiles_(std::move(profiles)) {
    if (profiles_.size() < 2) throw ParameterError("a translation graph needs n >= 2 profiles");
  }

  int dimension() const { return static_cast<int>(profiles_.size()); }
  const std::vector<Profile>& profiles() const { return profiles_; }
  const Profile& operator[](int i) const { return profiles_[static_cast<std::size_t>(i)]; }

  std::vector<Interval> domains() const {
    std::vector<Interval> d;
    d.reserve(profiles_.size());
    for (const auto& p : profiles_) d.push_back(p.domain());
    return d;
  }

  /// Throws DomainError naming the first offending axis.
  void require_inside(std::span<const double> x) const {
    if (x.size() != profiles_.size())
      throw DomainError("point has " + std::to_string(x.size()) + " coordinates, graph has n=" +
                        std::to_string(profiles_.size()));
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!profiles_[i].domain().contains(x[i]))
        throw DomainError("coordinate x_" + std::to_string(i + 1) + "=" + std::to_string(x[i]) +
                          " outside domain " + to_string(profiles_[i].domain()));
  }

  bool contains(std::span<const double> x) const {
    if (x.size() != profiles_.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!profiles_[i].domain().contains(x[i])) return false;
    return true;
  }

  /// F(x) = sum_i f_i(x_i)
  double height(std::span<const double> x) const {
    require_inside(x);
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) f += profiles_[i].eval(x[i], 0);
    return f;
  }

 private:
  std::vector<Profile> profiles_;
};

/// Upward: W xi = e_{n+1} - grad F, giving B_ii = +f_i''/W.
enum class Orientation { Upward, Downward };

struct PointFrame {
  Eigen::VectorXd point;
  Eigen::VectorXd grad;       // f_i'
  double w = 1.0;             // sqrt(1 + |grad F|^2)
  Eigen::MatrixXd metric;     // I + grad grad^T
  Eigen::VectorXd secff;      // diagonal of B
  Eigen::MatrixXd shape;      // A = G^{-1} B
  Eigen::VectorXd principal;  // eigenvalues of A, ascending
  std::vector<double> s;      // S_0 .. S_n
  Orientation orientation = Orientation::Upward;

  int dimension() const { return static_cast<int>(point.size()); }
};

namespace detail {

struct Jet {
  std::vector<double> d1;
  std::vector<double> d2;
};

inline Jet jet_at(const TranslationGraph& g, std::span<const double> x) {
  g.require_inside(x);
  Jet j;
  j.d1.reserve(x.size());
  j.d2.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    j.d1.push_back(g[static_cast<int>(i)].eval(x[i], 1));
    j.d2.push_back(g[static_cast<int>(i)].eval(x[i], 2));
  }
  return j;
}

inline double w_squared(const std::vector<double>& d1) {
  double s = 1.0;
  for (double v : d1) s += v * v;
  return s;
}

// Unnormalized sums G_k = sum_{|I|=k} prod_{i in I} f_i'' (1 + sum_{m not in I} f_m'^2)
// for k = 0..kmax. Two accumulators are carried while profiles are added one
// at a time: e_k = sigma_k(f'') over the profiles seen so far, and
// c_k = sum_{|I|=k} prod_I f'' * sum_{m seen, m not in I} f_m'^2. Adding a
// profile with (a, q) = (f'', f'^2) either leaves it out of I (it joins the
// excluded sum: + q e_k) or puts it in I (+ a c_{k-1}), so
//   c_k <- c_k + q e_k + a c_{k-1},   e_k <- e_k + a e_{k-1},
// and G_k = e_k + c_k. Every term keeps its sign; no cancellation is introduced.
inline std::vector<double> curvature_sums(const Jet& j, int kmax) {
  const auto K = static_cast<std::size_t>(kmax);
  std::vector<double> e(K + 1, 0.0), c(K + 1, 0.0);
  e[0] = 1.0;
  std::size_t seen = 0;
  for (std::size_t i = 0; i < j.d1.size(); ++i) {
    const double a = j.d2[i];
    const double q = j.d1[i] * j.d1[i];
    seen = std::min(seen + 1, K);
    for (std::size_t k = seen; k >= 1; --k) {
      c[k] += q * e[k] + a * c[k - 1];
      e[k] += a * e[k - 1];
    }
    c[0] += q;
  }
  std::vector<double> G(K + 1);
  for (std::size_t k = 0; k <= K; ++k) G[k] = e[k] + c[k];
  return G;
}

inline void require_r(int n, int r) {
  if (r < 1 || r > n)
    throw RangeError("curvature order r=" + std::to_string(r) + " outside 1.." + std::to_string(n));
}

}  // namespace detail

/// W^{r+2} S_r = sum_{i_1<...<i_r} f''_{i_1}...f''_{i_r} (1 + sum_{m not in I} f_m'^2).
inline double g_r(const TranslationGraph& g, std::span<const double> x, int r) {
  detail::require_r(g.dimension(), r);
  const auto j = detail::jet_at(g, x);
  return detail::curvature_sums(j, r)[static_cast<std::size_t>(r)];
}

/// Closed-form S_r = G_r / W^{r+2} for the upward normal.
inline double s_r_closed(const TranslationGraph& g, std::span<const double> x, int r) {
  detail::require_r(g.dimension(), r);
  const auto j = detail::jet_at(g, x);
  const double w = std::sqrt(detail::w_squared(j.d1));
  return detail::curvature_sums(j, r)[static_cast<std::size_t>(r)] / std::pow(w, r + 2);
}

/// S_0 .. S_n from the closed form in one pass.
inline std::vector<double> s_all_closed(const TranslationGraph& g, std::span<const double> x,
                                        Orientation o = Orientation::Upward) {
  const auto j = detail::jet_at(g, x);
  const int n = g.dimension();
  const double w = std::sqrt(detail::w_squared(j.d1));
  auto G = detail::curvature_sums(j, n);
  std::vector<double> s(static_cast<std::size_t>(n) + 1);
  s[0] = 1.0;
  const double flip = o == Orientation::Upward ? 1.0 : -1.0;
  double sign = 1.0;
  for (int r = 1; r <= n; ++r) {
    sign *= flip;
    s[static_cast<std::size_t>(r)] = sign * G[static_cast<std::size_t>(r)] / std::pow(w, r + 2);
  }
  return s;
}

inline PointFrame frame_at(const TranslationGraph& g, std::span<const double> x,
                           Orientation o = Orientation::Upward) {
  const auto j = detail::jet_at(g, x);
  const int n = g.dimension();
  const double w2 = detail::w_squared(j.d1);
  const double w = std::sqrt(w2);
  const double sign = o == Orientation::Upward ? 1.0 : -1.0;

  PointFrame f;
  f.orientation = o;
  f.point = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  f.grad = Eigen::Map<const Eigen::VectorXd>(j.d1.data(), n);
  f.w = w;
  f.metric = Eigen::MatrixXd::Identity(n, n) + f.grad * f.grad.transpose();
  f.secff = sign * Eigen::Map<const Eigen::VectorXd>(j.d2.data(), n) / w;

  // G^{-1} = I - grad grad^T / W^2 (rank-one inverse).
  const Eigen::MatrixXd ginv = Eigen::MatrixXd::Identity(n, n) - f.grad * f.grad.transpose() / w2;
  f.shape = ginv * f.secff.asDiagonal();

  // G^{-1/2} = I - grad grad^T / (W (W + 1)); G^{-1/2} B G^{-1/2} is symmetric and similar to A.
  const Eigen::MatrixXd ginv_half =
      Eigen::MatrixXd::Identity(n, n) - f.grad * f.grad.transpose() / (w * (w + 1.0));
  const Eigen::MatrixXd sym = ginv_half * f.secff.asDiagonal() * ginv_half;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  f.principal = es.eigenvalues();

  f.s = s_all_closed(g, x, o);
  return f;
}

inline double s_r_oracle_eigen(const PointFrame& f, int r) {
  detail::require_order(static_cast<std::size_t>(f.dimension()), r);
  return elem_sym(std::span<const double>(f.principal.data(), static_cast<std::size_t>(f.principal.size())), r);
}

/// Coefficients of det(A - lambda I) = sum_k (-1)^{n-k} S_k lambda^{n-k},
/// returned as S_0..S_n, by the Faddeev-LeVerrier recursion
///   M_k = A M_{k-1} + p_{n-k+1} I,  p_{n-k} = -tr(A M_k) / k
/// for the monic det(lambda I - A) = sum p_j lambda^j, with S_k = (-1)^k p_{n-k}.
inline std::vector<double> characteristic_sums(const Eigen::MatrixXd& a) {
  const auto n = a.rows();
  std::vector<double> p(static_cast<std::size_t>(n) + 1, 0.0);
  p[static_cast<std::size_t>(n)] = 1.0;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m;
    m.diagonal().array() += p[static_cast<std::size_t>(n - k + 1)];
    p[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
  }
  std::vector<double> s(static_cast<std::size_t>(n) + 1);
  for (Eigen::Index k = 0; k <= n; ++k)
    s[static_cast<std::size_t>(k)] = (k % 2 == 0 ? 1.0 : -1.0) * p[static_cast<std::size_t>(n - k)];
  return s;
}

inline double s_r_oracle_charpoly(const PointFrame& f, int r) {
  detail::require_order(static_cast<std::size_t>(f.dimension()), r);
  return characteristic_sums(f.shape)[static_cast<std::size_t>(r)];
}

/// |det G - W^2| / W^2 with det G from an LU factorization.
inline double metric_det_residual(const PointFrame& f) {
  const double w2 = f.w * f.w;
  return std::abs(f.metric.partialPivLu().determinant() - w2) / w2;
}

}  // namespace transhyp
