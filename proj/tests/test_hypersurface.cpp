#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "transhyp/families.hpp"
#include "transhyp/hypersurface.hpp"
#include "transhyp/verify.hpp"

using namespace transhyp;

namespace {

TranslationGraph quadratics(int n) {
  return TranslationGraph(std::vector<Profile>(static_cast<std::size_t>(n), Profile::polynomial({0, 0, 0.5})));
}

oracle::Mat to_mat(const Eigen::MatrixXd& m) {
  oracle::Mat out(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return out;
}

}  // namespace

TEST(TranslationGraph, NeedsTwoProfiles) {
  EXPECT_THROW(TranslationGraph({Profile::linear(1)}), ParameterError);
  const TranslationGraph g({Profile::linear(1, 2), Profile::polynomial({0, 0, 1})});
  EXPECT_EQ(g.dimension(), 2);
  EXPECT_DOUBLE_EQ(g.height(std::vector<double>{1, 3}), 3 + 9);
}

TEST(Frame, IdentityCase) {
  const auto g = quadratics(2);
  const auto f = frame_at(g, std::vector<double>{0, 0});
  EXPECT_EQ(f.w, 1.0);
  EXPECT_TRUE(f.metric.isApprox(Eigen::MatrixXd::Identity(2, 2)));
  EXPECT_TRUE(f.shape.isApprox(Eigen::MatrixXd::Identity(2, 2)));
  EXPECT_NEAR(f.principal(0), 1.0, 1e-15);
  EXPECT_NEAR(f.principal(1), 1.0, 1e-15);
  EXPECT_EQ(f.s[0], 1.0);
  EXPECT_DOUBLE_EQ(f.s[1], 2.0);
  EXPECT_DOUBLE_EQ(f.s[2], 1.0);
  EXPECT_DOUBLE_EQ(s_r_oracle_eigen(f, 2), 1.0);
  EXPECT_DOUBLE_EQ(s_r_oracle_charpoly(f, 1), 2.0);
  EXPECT_DOUBLE_EQ(s_r_oracle_charpoly(f, 2), 1.0);
}

TEST(Frame, OneCurvedProfile) {
  const TranslationGraph g({Profile::polynomial({0, 0, 0.5}), Profile::linear(0)});
  const std::vector<double> x{1, 0};
  const auto f = frame_at(g, x);
  EXPECT_DOUBLE_EQ(f.w, std::sqrt(2.0));
  EXPECT_NEAR(f.s[1], std::pow(2.0, -1.5), 1e-15);
  EXPECT_NEAR(s_r_oracle_eigen(f, 1), std::pow(2.0, -1.5), 1e-15);
  EXPECT_NEAR(s_r_closed(g, x, 1), std::pow(2.0, -1.5), 1e-15);
}

TEST(Frame, FlatHyperplane) {
  const TranslationGraph g({Profile::linear(1), Profile::linear(-2), Profile::linear(0.5)});
  const std::vector<double> x{0.3, -4, 7};
  const auto f = frame_at(g, x);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(f.principal(i), 0.0);
  for (int r = 1; r <= 3; ++r) {
    EXPECT_EQ(f.s[static_cast<std::size_t>(r)], 0.0);
    EXPECT_EQ(s_r_closed(g, x, r), 0.0);
    EXPECT_EQ(g_r(g, x, r), 0.0);
    EXPECT_EQ(s_r_oracle_eigen(f, r), 0.0);
    EXPECT_EQ(s_r_oracle_charpoly(f, r), 0.0);
  }
}

TEST(Frame, Invariants) {
  Rng rng(1);
  for (int t = 0; t < 300; ++t) {
    const int n = rng.integer(2, 6);
    const auto g = random_mixed_graph(n, rng);
    const auto x = random_point(g, rng);
    const auto f = frame_at(g, x);
    double w2 = 1.0;
    for (int i = 0; i < n; ++i) w2 += f.grad(i) * f.grad(i);
    EXPECT_NEAR(f.w * f.w, w2, 1e-12 * w2);
    EXPECT_LE(metric_det_residual(f), 1e-9);
    EXPECT_TRUE(f.metric.isApprox(f.metric.transpose(), 0.0));
    Eigen::LLT<Eigen::MatrixXd> llt(f.metric);
    EXPECT_EQ(llt.info(), Eigen::Success);
    EXPECT_EQ(f.s[0], 1.0);
    EXPECT_TRUE(std::is_sorted(f.principal.data(), f.principal.data() + n));
    // shape operator against a solve of G A = B
    const auto a = oracle::shape_operator(std::vector<double>(f.grad.data(), f.grad.data() + n),
                                          [&] {
                                            std::vector<double> d2;
                                            for (int i = 0; i < n; ++i) d2.push_back(g[i].eval(x[static_cast<std::size_t>(i)], 2));
                                            return d2;
                                          }());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        EXPECT_NEAR(f.shape(i, j), a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                    1e-12 * std::max(1.0, std::abs(f.shape(i, j))));
  }
}

TEST(GR, HandValues) {
  EXPECT_DOUBLE_EQ(g_r(quadratics(2), std::vector<double>{0, 0}, 2), 1.0);
  EXPECT_DOUBLE_EQ(g_r(quadratics(3), std::vector<double>{1, 0, 0}, 2), 4.0);
  const TranslationGraph flat({Profile::linear(2), Profile::linear(3)});
  EXPECT_EQ(g_r(flat, std::vector<double>{0, 0}, 1), 0.0);
}

TEST(GR, OrderAndDomainErrors) {
  const auto g = quadratics(3);
  EXPECT_THROW(g_r(g, std::vector<double>{0, 0, 0}, 0), RangeError);
  EXPECT_THROW(s_r_closed(g, std::vector<double>{0, 0, 0}, 4), RangeError);
  const TranslationGraph lc({Profile::logcos(1, 1), Profile::linear(1)});
  EXPECT_THROW(frame_at(lc, std::vector<double>{2.0, 0.0}), DomainError);
  try {
    s_r_closed(lc, std::vector<double>{2.0, 0.0}, 1);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("x_1"), std::string::npos);
  }
}

TEST(GR, DynamicProgramMatchesEnumeration) {
  Rng rng(3);
  for (int t = 0; t < 500; ++t) {
    const int n = rng.integer(2, 10);
    const auto g = random_mixed_graph(n, rng);
    const auto x = random_point(g, rng);
    std::vector<double> d1, d2;
    for (int i = 0; i < n; ++i) {
      d1.push_back(g[i].eval(x[static_cast<std::size_t>(i)], 1));
      d2.push_back(g[i].eval(x[static_cast<std::size_t>(i)], 2));
    }
    for (int r = 1; r <= n; ++r) {
      const double dp = g_r(g, x, r), en = oracle::gr_enum(d1, d2, r);
      EXPECT_LE(oracle::rel_diff(dp, en, 1e-12, 1e-10), 1e-10) << "n=" << n << " r=" << r;
    }
  }
}

TEST(SR, ScherkIsMinimal) {
  const std::vector<double> a1{1.0};
  const std::vector<double> b{0.0, 0.0};
  const auto fam = make_logcos_family(2, 1.0, a1, b, 0.0);
  const TranslationGraph g(fam.profiles);
  Rng rng(6);
  for (int t = 0; t < 500; ++t) {
    const std::vector<double> x{rng.uniform(-1.4, 1.4), rng.uniform(-1.4, 1.4)};
    EXPECT_LE(std::abs(s_r_closed(g, x, 1)), 1e-10);
  }
}

TEST(SR, TripleAgreementWithMinorOracle) {
  Rng rng(10);
  for (int t = 0; t < 300; ++t) {
    const int n = rng.integer(2, 6);
    const auto g = random_mixed_graph(n, rng);
    const auto x = random_point(g, rng);
    const auto f = frame_at(g, x);
    const auto minors = to_mat(f.shape);
    for (int r = 1; r <= n; ++r) {
      const double c = s_r_closed(g, x, r);
      EXPECT_LE(oracle::rel_diff(c, s_r_oracle_eigen(f, r)), 1e-8);
      EXPECT_LE(oracle::rel_diff(c, s_r_oracle_charpoly(f, r)), 1e-8);
      EXPECT_LE(oracle::rel_diff(c, oracle::principal_minor_sum(minors, r)), 1e-8);
    }
  }
}

TEST(SR, CharacteristicSumsMatchMinors) {
  Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    const int n = rng.integer(1, 6);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-2, 2);
    const auto s = characteristic_sums(a);
    const auto m = to_mat(a);
    for (int r = 0; r <= n; ++r)
      EXPECT_NEAR(s[static_cast<std::size_t>(r)], oracle::principal_minor_sum(m, r), 1e-10 * std::pow(4.0, r));
  }
  EXPECT_EQ(characteristic_sums(Eigen::MatrixXd::Zero(3, 3)), (std::vector<double>{1, 0, 0, 0}));
}

TEST(SR, OrientationFlip) {
  Rng rng(14);
  for (int t = 0; t < 100; ++t) {
    const int n = rng.integer(2, 6);
    const auto g = random_mixed_graph(n, rng);
    const auto x = random_point(g, rng);
    const auto up = frame_at(g, x, Orientation::Upward);
    const auto down = frame_at(g, x, Orientation::Downward);
    for (int r = 1; r <= n; ++r) {
      const double sign = r % 2 ? -1.0 : 1.0;
      EXPECT_EQ(down.s[static_cast<std::size_t>(r)], sign * up.s[static_cast<std::size_t>(r)]);
      EXPECT_LE(oracle::rel_diff(s_r_oracle_eigen(down, r), sign * s_r_oracle_eigen(up, r)), 1e-8);
    }
  }
}

TEST(SR, PermutationInvariant) {
  Rng rng(15);
  std::mt19937 shuf(15);
  for (int t = 0; t < 200; ++t) {
    const int n = rng.integer(2, 6);
    const auto g = random_mixed_graph(n, rng);
    const auto x = random_point(g, rng);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), shuf);
    std::vector<Profile> ps;
    std::vector<double> y;
    for (int i : perm) {
      ps.push_back(g[i]);
      y.push_back(x[static_cast<std::size_t>(i)]);
    }
    const TranslationGraph h(ps);
    for (int r = 1; r <= n; ++r) EXPECT_LE(oracle::rel_diff(s_r_closed(g, x, r), s_r_closed(h, y, r), 1e-12, 1e-12), 1e-12);
  }
}

TEST(SR, ZeroIffGrZero) {
  Rng rng(16);
  for (int t = 0; t < 200; ++t) {
    const int n = rng.integer(3, 6);
    // mix linear profiles in so some S_r vanish exactly
    std::vector<Profile> ps;
    for (int i = 0; i < n; ++i)
      ps.push_back(rng.uniform() < 0.4 ? Profile::linear(rng.uniform(-2, 2)) : random_polynomial_profile(rng));
    const TranslationGraph g(ps);
    const auto x = random_point(g, rng);
    for (int r = 1; r <= n; ++r) {
      const double s = s_r_closed(g, x, r), gr = g_r(g, x, r);
      EXPECT_EQ(s == 0.0, gr == 0.0);
      EXPECT_EQ(std::signbit(s) && s != 0.0, std::signbit(gr) && gr != 0.0);
    }
  }
}
