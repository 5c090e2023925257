#include <cmath>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "softsp/linalg.hpp"
#include "test_support.hpp"

using softsp::linalg::expm;
using softsp::linalg::spectral_abscissa;
using softsp::linalg::zoh_discretize;

TEST(Expm, ZeroMatrixGivesIdentity) {
  EXPECT_TRUE(expm(Eigen::MatrixXd::Zero(4, 4)).isApprox(Eigen::MatrixXd::Identity(4, 4)));
}

TEST(Expm, DiagonalExponentiatesEntries) {
  Eigen::MatrixXd d = Eigen::Vector3d(-3.0, 0.5, 7.0).asDiagonal();
  const Eigen::MatrixXd e = expm(d);
  EXPECT_NEAR(e(0, 0), std::exp(-3.0), 1e-15);
  EXPECT_NEAR(e(1, 1), std::exp(0.5), 1e-14);
  EXPECT_NEAR(e(2, 2) / std::exp(7.0), 1.0, 1e-13);
  EXPECT_EQ(e(0, 1), 0.0);
}

TEST(Expm, RotationGenerator) {
  Eigen::MatrixXd m(2, 2);
  m << 0.0, -1.2, 1.2, 0.0;
  const Eigen::MatrixXd e = expm(m);
  EXPECT_NEAR(e(0, 0), std::cos(1.2), 1e-14);
  EXPECT_NEAR(e(1, 0), std::sin(1.2), 1e-14);
}

TEST(Expm, MatchesEigenPadeOnRandomMatrices) {
  softsp::testing::Gen gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = gen.integer(1, 7);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < m.size(); ++i) m(i) = gen.uniform(-4.0, 4.0);
    const Eigen::MatrixXd oracle = m.exp();
    EXPECT_LT((expm(m) - oracle).norm() / oracle.norm(), 1e-12) << "trial " << trial;
  }
}

TEST(Zoh, ScalarClosedForm) {
  Eigen::MatrixXd a(1, 1), b(1, 1), ad, bd;
  a << -2.0;
  b << 3.0;
  zoh_discretize(a, b, 0.1, &ad, &bd);
  EXPECT_NEAR(ad(0, 0), std::exp(-0.2), 1e-15);
  EXPECT_NEAR(bd(0, 0), (std::exp(-0.2) - 1.0) / -2.0 * 3.0, 1e-15);
}

TEST(Zoh, MatchesFineIntegrationOfHeldInput) {
  Eigen::MatrixXd a(2, 2), b(2, 1), ad, bd;
  a << -1.0, 2.0, -3.0, -0.5;
  b << 1.0, -2.0;
  const double dt = 0.05;
  zoh_discretize(a, b, dt, &ad, &bd);

  // RK4 with 1000 substeps, u = 1 held, from the origin and from e_0.
  const auto integrate = [&](Eigen::Vector2d x) {
    const int n = 1000;
    const double h = dt / n;
    const auto f = [&](const Eigen::Vector2d& s) -> Eigen::Vector2d { return a * s + b; };
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector2d k1 = f(x), k2 = f(x + 0.5 * h * k1), k3 = f(x + 0.5 * h * k2),
                            k4 = f(x + h * k3);
      x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return x;
  };
  EXPECT_LT((integrate(Eigen::Vector2d::Zero()) - bd).norm(), 1e-12);
  EXPECT_LT((integrate(Eigen::Vector2d(1.0, 0.0)) - (ad.col(0) + bd)).norm(), 1e-12);
}

TEST(Zoh, RejectsBadArguments) {
  Eigen::MatrixXd ad, bd;
  EXPECT_THROW(zoh_discretize(Eigen::MatrixXd::Zero(2, 3), Eigen::MatrixXd::Zero(2, 1), 0.1,
                              &ad, &bd),
               softsp::InvalidArgument);
  EXPECT_THROW(zoh_discretize(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(3, 1), 0.1,
                              &ad, &bd),
               softsp::InvalidArgument);
  EXPECT_THROW(zoh_discretize(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 1), 0.0,
                              &ad, &bd),
               softsp::InvalidArgument);
}

TEST(SpectralAbscissa, KnownSpectra) {
  Eigen::MatrixXd m(2, 2);
  m << -1.0, 5.0, -5.0, -1.0;  // -1 +- 5i
  EXPECT_NEAR(spectral_abscissa(m), -1.0, 1e-12);
  m << 0.5, 0.0, 0.0, -3.0;
  EXPECT_NEAR(spectral_abscissa(m), 0.5, 1e-12);
}
