#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "transhyp/sympoly.hpp"
#include "transhyp/verify.hpp"

using namespace transhyp;

TEST(ElemSym, SmallCases) {
  const std::vector<double> ones{1, 1, 1, 1};
  EXPECT_EQ(elem_sym(ones, 2), 6.0);
  const std::vector<double> v{1, 2, 3};
  EXPECT_EQ(elem_sym(v, 2), 11.0);
  EXPECT_EQ(elem_sym(v, 0), 1.0);
  const std::vector<double> z{5, 0, 7};
  EXPECT_EQ(elem_sym(z, 3), 0.0);
}

TEST(ElemSym, OrderOutOfRange) {
  const std::vector<double> v{1, 2, 3};
  EXPECT_THROW(elem_sym(v, 4), RangeError);
  EXPECT_THROW(elem_sym(v, -1), RangeError);
  EXPECT_THROW(normalized_h(v, 4), RangeError);
}

TEST(ElemSym, RejectsNonFinite) {
  const std::vector<double> v{1, NAN};
  EXPECT_THROW(elem_sym(v, 1), ParameterError);
  EXPECT_THROW(elem_sym_all(std::vector<double>{}), ParameterError);
}

TEST(ElemSym, TruncatedMatchesFull) {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const int n = rng.integer(1, 12);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.uniform(-10, 10);
    const auto all = elem_sym_all(v);
    for (int r = 0; r <= n; ++r) EXPECT_EQ(all[static_cast<std::size_t>(r)], elem_sym(v, r));
  }
}

TEST(ElemSym, MatchesSubsetEnumeration) {
  Rng rng(2024);
  for (int t = 0; t < 2000; ++t) {
    const int n = rng.integer(1, 8);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.uniform(-10, 10);
    for (int r = 0; r <= n; ++r) {
      const double a = elem_sym(v, r), b = oracle::sigma_enum(v, r);
      // cancellation makes small sigma noisy; measure against the magnitude sum
      std::vector<double> av(v);
      for (auto& x : av) x = std::abs(x);
      const double mag = std::max(oracle::sigma_enum(av, r), 1e-12);
      EXPECT_LE(std::abs(a - b), 1e-10 * std::max(std::abs(b), 1e-2 * mag)) << "n=" << n << " r=" << r;
    }
  }
}

TEST(ElemSym, PermutationInvariantSorted) {
  Rng rng(5);
  std::mt19937 shuf(5);
  for (int t = 0; t < 200; ++t) {
    const int n = rng.integer(2, 10);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.uniform(-10, 10);
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    auto w = v;
    std::shuffle(w.begin(), w.end(), shuf);
    auto ws = w;
    std::sort(ws.begin(), ws.end());
    for (int r = 0; r <= n; ++r) {
      EXPECT_EQ(elem_sym(sorted, r), elem_sym(ws, r));
      const double a = elem_sym(v, r), b = elem_sym(w, r);
      std::vector<double> av(v);
      for (auto& x : av) x = std::abs(x);
      EXPECT_LE(std::abs(a - b), 1e-12 * std::max({std::abs(a), 1e-3 * oracle::sigma_enum(av, r), 1.0}));
    }
  }
}

TEST(ElemSym, GeneratingFunction) {
  Rng rng(9);
  for (int t = 0; t < 300; ++t) {
    const int n = rng.integer(1, 10);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.uniform(-3, 3);
    const auto e = elem_sym_all(v);
    for (double s : {0.5, 1.0, 2.0}) {
      double prod = 1.0, series = 0.0, mag = 0.0, tp = 1.0;
      for (double x : v) prod *= 1.0 + s * x;
      for (double c : e) {
        series += c * tp;
        mag += std::abs(c * tp);
        tp *= s;
      }
      EXPECT_LE(std::abs(prod - series), 1e-9 * std::max(std::abs(prod), 1e-3 * mag + 1e-12));
    }
  }
}

TEST(NormalizedH, Examples) {
  const std::vector<double> v{1, 2, 3};
  EXPECT_DOUBLE_EQ(normalized_h(v, 1), 2.0);
  EXPECT_DOUBLE_EQ(normalized_h(v, 2), 11.0 / 3.0);
  for (int n = 1; n <= 6; ++n) {
    const std::vector<double> c(static_cast<std::size_t>(n), 1.7);
    for (int r = 0; r <= n; ++r) EXPECT_NEAR(normalized_h(c, r), std::pow(1.7, r), 1e-12 * std::pow(1.7, r));
  }
}

TEST(Binomial, Values) {
  EXPECT_EQ(binomial(4, 2), 6.0);
  EXPECT_EQ(binomial(10, 3), 120.0);
  EXPECT_EQ(binomial(3, 5), 0.0);
}

TEST(Newton, EqualValues) {
  const std::vector<double> v{2, 2, 2, 2};
  const auto rep = newton_check(v, 1e-12);
  ASSERT_EQ(rep.gaps.size(), 3u);
  for (double g : rep.gaps) EXPECT_EQ(g, 0.0);
  EXPECT_TRUE(rep.equality_case);
  EXPECT_TRUE(rep.values_all_equal);
  EXPECT_TRUE(rep.consistent());
}

TEST(Newton, StrictlyPositiveGaps) {
  const std::vector<double> v{1, 2, 3, 4};
  const auto rep = newton_check(v, 1e-12);
  for (double g : rep.gaps) EXPECT_GT(g, 0.0);
  EXPECT_FALSE(rep.equality_case);
  EXPECT_TRUE(rep.consistent());
}

TEST(Newton, PairOfOpposites) {
  const std::vector<double> v{1, -1};
  const auto rep = newton_check(v, 1e-12);
  ASSERT_EQ(rep.gaps.size(), 1u);
  EXPECT_DOUBLE_EQ(rep.gaps[0], 1.0);
}

TEST(Newton, Preconditions) {
  EXPECT_THROW(newton_check(std::vector<double>{1.0}, 1e-12), ParameterError);
  EXPECT_THROW(newton_check(std::vector<double>{1.0, 2.0}, 0.0), ParameterError);
}

TEST(Newton, RandomVectorsHold) {
  Rng rng(77);
  for (int t = 0; t < 10000; ++t) {
    const int n = rng.integer(2, 8);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.uniform(-5, 5);
    const auto rep = newton_check(v, 1e-12);
    ASSERT_TRUE(rep.inequality_holds);
    ASSERT_TRUE(rep.consistent());
  }
}

TEST(Maclaurin, Examples) {
  const auto eq = maclaurin_check(std::vector<double>{1, 1, 1}, 3, 1e-12);
  ASSERT_TRUE(eq.applicable);
  EXPECT_TRUE(eq.chain_holds);
  EXPECT_TRUE(eq.equality_case);
  for (double r : eq.roots) EXPECT_NEAR(r, 1.0, 1e-15);

  const auto m = maclaurin_check(std::vector<double>{1, 2, 3}, 2, 1e-12);
  ASSERT_TRUE(m.applicable);
  EXPECT_TRUE(m.chain_holds);
  EXPECT_DOUBLE_EQ(m.roots[0], 2.0);
  EXPECT_NEAR(m.roots[1], std::sqrt(11.0 / 3.0), 1e-15);
  EXPECT_NEAR(m.roots[1], 1.9149, 1e-4);

  // H_2 = (1*-2 + 1*3 + -2*3)/3 < 0
  const auto na = maclaurin_check(std::vector<double>{1, -2, 3}, 3, 1e-12);
  EXPECT_FALSE(na.applicable);
  EXPECT_TRUE(na.roots.empty());
}

TEST(Maclaurin, PositiveRandomVectors) {
  Rng rng(31);
  for (int t = 0; t < 2000; ++t) {
    const int n = rng.integer(1, 8);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.uniform(0.01, 5);
    const auto rep = maclaurin_check(v, n, 1e-12);
    ASSERT_TRUE(rep.applicable);
    ASSERT_TRUE(rep.chain_holds);
  }
}

TEST(ZeroPropagation, Examples) {
  EXPECT_TRUE(zero_propagation_check(std::vector<double>{3, 5, 0, 0, 0}, 2, 1e-12));
  EXPECT_TRUE(zero_propagation_check(std::vector<double>{7, 0, 0, 0}, 1, 1e-12));
  EXPECT_TRUE(zero_propagation_check(std::vector<double>{0, 0, 0, 0}, 1, 1e-12));
  EXPECT_TRUE(zero_propagation_check(std::vector<double>{4.5, 0, 0, 0}, 2, 1e-12));
  EXPECT_THROW(zero_propagation_check(std::vector<double>{1, 2}, 2, 1e-12), RangeError);
  EXPECT_THROW(zero_propagation_check(std::vector<double>{1, 2}, 0, 1e-12), RangeError);
}

TEST(ZeroPropagation, ToleranceBandViolation) {
  // H_1 = 0 and H_2 = -1e-12/3 sit inside the band, yet two entries are nonzero
  EXPECT_FALSE(zero_propagation_check(std::vector<double>{1e-6, -1e-6, 0.0}, 1, 1e-9));
}

TEST(ZeroPropagation, StructuralZeros) {
  Rng rng(8);
  for (int t = 0; t < 1000; ++t) {
    const int n = rng.integer(3, 8);
    const int r = rng.integer(2, n - 1);
    const int k = rng.integer(0, r - 1);
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = rng.sign() * rng.uniform(0.5, 5);
    std::shuffle(v.begin(), v.end(), std::mt19937(static_cast<unsigned>(t)));
    const auto e = elem_sym_all(v);
    for (int j = k + 1; j <= n; ++j) ASSERT_EQ(e[static_cast<std::size_t>(j)], 0.0);
    ASSERT_TRUE(zero_propagation_check(v, r, 1e-12));
  }
}
