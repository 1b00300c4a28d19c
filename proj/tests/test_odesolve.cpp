#include <gtest/gtest.h>

#include <cmath>

#include "transhyp/odesolve.hpp"

using namespace transhyp;

TEST(Ode, EmptySpan) {
  const auto traj = integrate(OdeRun{{1, 1, 0}, 0, 0, 1e-3});
  ASSERT_EQ(traj.size(), 1u);
  EXPECT_EQ(traj[0].x, 0.0);
  EXPECT_EQ(traj[0].f, 0.0);
  EXPECT_EQ(traj[0].v, 0.0);
}

TEST(Ode, MatchesClosedFormAtHalf) {
  const auto traj = integrate(OdeRun{{1, 1, 0}, 0, 0.5, 1e-3});
  const auto& end = traj.back();
  EXPECT_DOUBLE_EQ(end.x, 0.5);
  EXPECT_NEAR(end.f, -std::log(std::cos(0.5)), 1e-10);
  EXPECT_NEAR(end.v, std::tan(0.5), 1e-10);
}

TEST(Ode, InsetSpanSupError) {
  for (const OdeParams p : {OdeParams{-2, 4, 0.3}, OdeParams{1, 1, 0}, OdeParams{0.5, 2, -0.4}}) {
    const auto run = OdeRun::inset_span(p, 1e-3);
    const auto err = closed_form_error(p, integrate(run));
    EXPECT_LE(err.sup_error(), 1e-6) << "a=" << p.slope << " beta=" << p.beta;
  }
}

TEST(Ode, FirstIntegral) {
  const OdeParams p{-2, 4, 0.3};
  const auto traj = integrate(OdeRun::inset_span(p, 1e-3));
  EXPECT_TRUE(arctan_first_integral_check(traj, p, 1e-7).passed);
  EXPECT_LE(arctan_first_integral_check(exact_trajectory(p, traj), p, 1e-7).max_deviation, 1e-14);
  // integrated with a, checked with a different slope
  const OdeParams wrong{-2.1, 4, 0.3};
  EXPECT_FALSE(arctan_first_integral_check(traj, wrong, 1e-7).passed);
}

TEST(Ode, FourthOrder) {
  const auto run = OdeRun::inset_span({1, 1, 0}, 1e-2);
  const auto study = convergence_study(run, 3);
  ASSERT_EQ(study.factors.size(), 3u);
  for (double f : study.factors) {
    EXPECT_GE(f, 12.0);
    EXPECT_LE(f, 20.0);
  }
}

TEST(Ode, Validation) {
  EXPECT_THROW(integrate(OdeRun{{0, 1, 0}, 0, 0.1, 1e-3}), ParameterError);
  EXPECT_THROW(integrate(OdeRun{{1, 0, 0}, 0, 0.1, 1e-3}), ParameterError);
  EXPECT_THROW(integrate(OdeRun{{1, 1, 0}, 0, 0.1, 0}), ParameterError);
  EXPECT_THROW(integrate(OdeRun{{1, 1, 0}, 0, 1.55, 1e-3}), ParameterError);
  EXPECT_THROW(integrate(OdeRun{{1, 1, 0}, 0, 0.1, 1e-3, 0.01}), ParameterError);
}

TEST(Ode, BlowUpDetected) {
  // a huge step jumps the solution past its pole
  EXPECT_THROW(integrate(OdeRun{{1, 1, 0}, -1.5, 1.5, 1.0}), SingularityError);
}
