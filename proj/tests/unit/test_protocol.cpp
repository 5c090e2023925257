#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "softsp/protocol.hpp"
#include "test_support.hpp"

using namespace softsp;

TEST(Protocol, DefaultsAndTickCounts) {
  const Protocol p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(p.ticks(), 3000);
  EXPECT_EQ(p.transient_ticks(), 1115);
}

TEST(Reference, StartsAtTheCenter) {
  const ReferenceSample s = reference(0.0, Protocol{});
  EXPECT_TRUE(s.r.isZero(0.0));
  // Radius grows at 0.05 / 20 m/s along +x.
  EXPECT_DOUBLE_EQ(s.r_dot(0), 0.0025);
  EXPECT_DOUBLE_EQ(s.r_dot(1), 0.0);
}

TEST(Reference, HandEvaluatedPoints) {
  const Protocol p;
  const ReferenceSample mid = reference(10.0, p);
  EXPECT_NEAR(mid.r(0), 0.025 * std::cos(5.0), 1e-15);
  EXPECT_NEAR(mid.r(1), 0.025 * std::sin(5.0), 1e-15);
  EXPECT_NEAR(mid.r_dot(0), 0.0025 * std::cos(5.0) - 0.0125 * std::sin(5.0), 1e-15);

  const ReferenceSample late = reference(30.0, p);
  EXPECT_NEAR(std::hypot(late.r(0), late.r(1)), 0.05, 1e-15);
  EXPECT_NEAR(std::hypot(late.r_dot(0), late.r_dot(1)), 0.025, 1e-15);
  EXPECT_EQ(late.r.tail<4>(), Eigen::Vector4d::Zero());
}

TEST(Reference, OffsetsAndOrientationPassThrough) {
  Protocol p;
  p.center_x = 0.1;
  p.center_y = -0.2;
  p.z_ref = 0.03;
  p.orientation_ref = Eigen::Vector3d(0.1, 0.2, 0.3);
  const ReferenceSample s = reference(0.0, p);
  EXPECT_EQ(s.r(0), 0.1);
  EXPECT_EQ(s.r(1), -0.2);
  EXPECT_EQ(s.r(2), 0.03);
  EXPECT_EQ(s.r.tail<3>(), p.orientation_ref);
}

TEST(Reference, PeriodicAfterBuildup) {
  const Protocol p;
  const double period = 2.0 * std::numbers::pi / p.omega;
  softsp::testing::Gen gen(1);
  for (int trial = 0; trial < 50; ++trial) {
    const double t = gen.uniform(p.buildup, p.duration - period);
    EXPECT_LT((reference(t, p).r - reference(t + period, p).r).norm(), 1e-12);
  }
}

TEST(Reference, RateMatchesFiniteDifference) {
  const Protocol p;
  softsp::testing::Gen gen(2);
  for (int trial = 0; trial < 50; ++trial) {
    const double t = gen.uniform(0.01, p.duration - 0.01);
    if (std::abs(t - p.buildup) < 1e-3) continue;
    const double h = 1e-6;
    const Vec6 fd = (reference(t + h, p).r - reference(t - h, p).r) / (2 * h);
    EXPECT_LT((fd - reference(t, p).r_dot).norm(), 1e-8);
  }
}

TEST(Reference, RejectsTimesOutsideTheRun) {
  const Protocol p;
  EXPECT_THROW(reference(-0.01, p), InvalidArgument);
  EXPECT_THROW(reference(60.5, p), InvalidArgument);
  EXPECT_NO_THROW(reference(3000 * 0.02, p));
}

TEST(Protocol, ValidationRejectsBadWindows) {
  Protocol p;
  p.transient_end = 61.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = Protocol{};
  p.dt = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = Protocol{};
  p.buildup = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
}
