#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "softsp/krlst.hpp"
#include "test_support.hpp"

using namespace softsp::krlst;

namespace {

/// Exact batch GP posterior with the same prior the tracker uses.
struct BatchGp {
  Eigen::MatrixXd x, y;
  KernelParams params;

  Eigen::MatrixXd prior(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) const {
    Eigen::MatrixXd k(a.rows(), b.rows());
    for (int i = 0; i < a.rows(); ++i) {
      for (int j = 0; j < b.rows(); ++j) {
        const double d2 = (a.row(i) - b.row(j)).squaredNorm();
        k(i, j) = std::exp(-d2 / (2.0 * params.sigma2));
      }
    }
    return k;
  }

  Prediction at(const Eigen::VectorXd& z) const {
    const int n = static_cast<int>(x.rows());
    Eigen::MatrixXd cov = prior(x, x);
    cov.diagonal().array() += params.jitter + params.noise_var;
    const Eigen::VectorXd k = prior(x, z.transpose()).col(0);
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    Prediction p;
    p.mean = y.topRows(n).transpose() * llt.solve(k);
    p.variance = 1.0 + params.jitter - k.dot(llt.solve(k)) + params.noise_var;
    return p;
  }
};

Eigen::VectorXd smooth_target(const Eigen::VectorXd& z, double shift = 0.0) {
  Eigen::VectorXd y(2);
  y << std::sin(2.0 * z(0) + shift) + 0.5 * z(1) * z(2), std::cos(z.sum() + shift);
  return y;
}

KernelParams exact_params() {
  KernelParams p;
  p.sigma2 = 0.5;
  p.noise_var = 0.01;
  p.lambda = 1.0;
  p.budget = 200;
  return p;
}

}  // namespace

TEST(GaussianKernel, KnownValues) {
  const Eigen::Vector2d a(0.0, 0.0), b(1.0, 1.0);
  EXPECT_EQ(gaussian_kernel(a, a, 3.0), 1.0);
  EXPECT_NEAR(gaussian_kernel(a, b, 1.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(gaussian_kernel(a, b, 0.25), std::exp(-4.0), 1e-15);
  EXPECT_THROW(gaussian_kernel(a, Eigen::Vector3d::Zero(), 1.0), softsp::InvalidArgument);
}

TEST(KernelParams, Validation) {
  const auto bad = [](auto mutate) {
    KernelParams p;
    mutate(p);
    return p;
  };
  EXPECT_NO_THROW(KernelParams{}.validate());
  EXPECT_THROW(bad([](auto& p) { p.sigma2 = 0.0; }).validate(), softsp::InvalidArgument);
  EXPECT_THROW(bad([](auto& p) { p.noise_var = -1.0; }).validate(), softsp::InvalidArgument);
  EXPECT_THROW(bad([](auto& p) { p.lambda = 0.0; }).validate(), softsp::InvalidArgument);
  EXPECT_THROW(bad([](auto& p) { p.lambda = 1.01; }).validate(), softsp::InvalidArgument);
  EXPECT_THROW(bad([](auto& p) { p.budget = 0; }).validate(), softsp::InvalidArgument);
  EXPECT_THROW(KrlstModel(KernelParams{}, 0, 6), softsp::InvalidArgument);
}

TEST(Krlst, EmptyModelReturnsPrior) {
  KrlstModel model(KernelParams{}, 3, 6);
  const Prediction p = model.predict(Eigen::Vector3d(0.1, 0.2, 0.3));
  EXPECT_TRUE(p.mean.isZero(0.0));
  EXPECT_DOUBLE_EQ(p.variance, 1.0 + KernelParams{}.noise_var);
}

TEST(Krlst, RejectsMalformedSamples) {
  KrlstModel model(KernelParams{}, 3, 2);
  EXPECT_THROW(model.predict(Eigen::Vector2d::Zero()), softsp::InvalidArgument);
  EXPECT_THROW(model.train(Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()),
               softsp::InvalidArgument);
  EXPECT_THROW(model.train(Eigen::Vector3d(0.0, NAN, 0.0), Eigen::Vector2d::Zero()),
               softsp::InvalidArgument);
  EXPECT_THROW(model.train(Eigen::Vector3d::Zero(), Eigen::Vector2d(INFINITY, 0.0)),
               softsp::InvalidArgument);
  EXPECT_EQ(model.size(), 0);
}

TEST(Krlst, SinglePointClosedForm) {
  KernelParams params = exact_params();
  KrlstModel model(params, 2, 1);
  const Eigen::Vector2d z(0.3, -0.2), q(0.5, 0.1);
  model.train(z, Eigen::VectorXd::Constant(1, 2.0));
  const double kzq = gaussian_kernel(z, q, params.sigma2);
  const double denom = 1.0 + params.jitter + params.noise_var;
  const Prediction p = model.predict(q);
  EXPECT_NEAR(p.mean(0), kzq * 2.0 / denom, 1e-12);
  EXPECT_NEAR(p.variance, 1.0 + params.jitter - kzq * kzq / denom + params.noise_var, 1e-12);
}

TEST(Krlst, MatchesBatchGpOnEveryPrefix) {
  softsp::testing::Gen gen(41);
  const KernelParams params = exact_params();
  KrlstModel model(params, 5, 2);
  BatchGp oracle{Eigen::MatrixXd(0, 5), Eigen::MatrixXd(0, 2), params};
  std::vector<Eigen::VectorXd> probes;
  for (int i = 0; i < 5; ++i) probes.push_back(gen.vector(5, -1, 1));

  for (int n = 0; n < 30; ++n) {
    const Eigen::VectorXd z = gen.vector(5, -1, 1);
    const Eigen::VectorXd y = smooth_target(z);
    model.train(z, y);
    oracle.x.conservativeResize(n + 1, Eigen::NoChange);
    oracle.y.conservativeResize(n + 1, Eigen::NoChange);
    oracle.x.row(n) = z.transpose();
    oracle.y.row(n) = y.transpose();
    ASSERT_EQ(model.size(), n + 1);
    for (const auto& probe : probes) {
      const Prediction got = model.predict(probe);
      const Prediction want = oracle.at(probe);
      EXPECT_LT((got.mean - want.mean).cwiseAbs().maxCoeff(), 1e-6) << "prefix " << n + 1;
      EXPECT_NEAR(got.variance, want.variance, 1e-6) << "prefix " << n + 1;
    }
  }
}

TEST(Krlst, OrderOfSamplesDoesNotMatterWithoutForgetting) {
  softsp::testing::Gen gen(43);
  std::vector<Eigen::VectorXd> zs;
  for (int i = 0; i < 25; ++i) zs.push_back(gen.vector(5, -1, 1));
  std::vector<int> order(zs.size());
  std::iota(order.begin(), order.end(), 0);

  const auto fit = [&](const std::vector<int>& idx) {
    KrlstModel model(exact_params(), 5, 2);
    for (int i : idx) model.train(zs[i], smooth_target(zs[i]));
    return model;
  };
  const KrlstModel reference = fit(order);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(order.begin(), order.end(), gen.engine());
    const KrlstModel shuffled = fit(order);
    for (int i = 0; i < 5; ++i) {
      const Eigen::VectorXd probe = gen.vector(5, -1, 1);
      EXPECT_LT((shuffled.predict(probe).mean - reference.predict(probe).mean).norm(), 1e-8);
    }
  }
}

TEST(Krlst, VarianceNeverBelowNoiseAndShrinksWithData) {
  softsp::testing::Gen gen(47);
  const KernelParams params = exact_params();
  KrlstModel model(params, 5, 2);
  const Eigen::VectorXd probe = gen.vector(5, -0.5, 0.5);
  double last = model.predict(probe).variance;
  for (int n = 0; n < 60; ++n) {
    const Eigen::VectorXd z = gen.vector(5, -1, 1);
    model.train(z, smooth_target(z));
    const double v = model.predict(probe).variance;
    EXPECT_GE(v, params.noise_var);
    EXPECT_LE(v, last + 1e-12) << "sample " << n;
    last = v;
  }
}

TEST(Krlst, DictionaryStaysWithinBudget) {
  softsp::testing::Gen gen(53);
  KernelParams params;
  params.sigma2 = 0.2;
  params.budget = 80;
  KrlstModel model(params, 5, 6);
  for (int n = 0; n < 10000; ++n) {
    const Eigen::VectorXd z = gen.vector(5, -1, 1);
    Eigen::VectorXd y(6);
    y << smooth_target(z), smooth_target(z, 1.0), z(3), z(4) * z(4);
    model.train(z, y);
    ASSERT_LE(model.size(), 80);
  }
  EXPECT_EQ(model.size(), 80);
}

TEST(Krlst, InternalMatricesStayConsistent) {
  softsp::testing::Gen gen(59);
  KernelParams params;
  params.sigma2 = 0.5;
  params.budget = 40;
  params.lambda = 0.995;
  KrlstModel model(params, 5, 2);
  for (int n = 0; n < 2000; ++n) {
    const Eigen::VectorXd z = gen.vector(5, -1, 1);
    model.train(z, smooth_target(z));
    if (n % 200 != 199) continue;
    const Eigen::Index m = model.size();
    const Eigen::MatrixXd eye = model.q_inv() * model.gram();
    EXPECT_LT((eye - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff(), 1e-6);
    const Eigen::MatrixXd& s = model.sigma();
    EXPECT_LT((s - s.transpose()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_GE(s.diagonal().minCoeff(), 0.0);
  }
}

TEST(Krlst, ErrorScoresFollowWeightsOverInverseDiagonal) {
  // Far-apart bases give a diagonal Gram matrix, so scores are |mu_i|^2 / (1 + jitter).
  KernelParams params;
  params.sigma2 = 1.0;
  params.budget = 3;
  Eigen::MatrixXd dict(3, 1), mu(3, 2);
  dict << 0.0, 100.0, 200.0;
  mu << 1.0, 0.0, 0.1, 0.2, 2.0, 0.0;
  const KrlstModel model = KrlstModel::from_state(params, dict, mu, Eigen::MatrixXd::Identity(3, 3));
  const Eigen::VectorXd s = model.error_scores();
  const double d = 1.0 + params.jitter;
  EXPECT_NEAR(s(0), 1.0 / d, 1e-12);
  EXPECT_NEAR(s(1), 0.05 / d, 1e-12);
  EXPECT_NEAR(s(2), 4.0 / d, 1e-12);
}

TEST(Krlst, PruneDropsLowestScore) {
  KernelParams params;
  params.sigma2 = 1.0;
  params.budget = 2;
  Eigen::MatrixXd dict(3, 1), mu(3, 1), sigma = Eigen::Matrix3d::Identity();
  dict << 0.0, 100.0, 200.0;
  mu << 1.0, 0.1, 2.0;
  KrlstModel model = KrlstModel::from_state(params, dict, mu, sigma);
  model.prune_to_budget();
  ASSERT_EQ(model.size(), 2);
  EXPECT_EQ(model.dictionary()(0, 0), 0.0);
  EXPECT_EQ(model.dictionary()(1, 0), 200.0);
  EXPECT_EQ(model.mu()(1, 0), 2.0);
}

TEST(Krlst, PruneTieGoesToLowestIndex) {
  KernelParams params;
  params.sigma2 = 1.0;
  params.budget = 2;
  Eigen::MatrixXd dict(3, 1), mu = Eigen::MatrixXd::Ones(3, 1);
  dict << 0.0, 100.0, 200.0;
  KrlstModel model = KrlstModel::from_state(params, dict, mu, Eigen::Matrix3d::Identity());
  model.prune_to_budget();
  EXPECT_EQ(model.dictionary()(0, 0), 100.0);
}

TEST(Krlst, RemoveBasisMatchesRebuild) {
  softsp::testing::Gen gen(61);
  KernelParams params = exact_params();
  KrlstModel model(params, 3, 2);
  for (int n = 0; n < 12; ++n) {
    const Eigen::VectorXd z = gen.vector(3, -1, 1);
    model.train(z, smooth_target(z));
  }
  KrlstModel trimmed = model;
  trimmed.remove_basis(4);
  ASSERT_EQ(trimmed.size(), model.size() - 1);
  // q_inv after the Schur downdate equals the inverse of the smaller Gram matrix.
  const Eigen::MatrixXd direct = trimmed.gram().inverse();
  EXPECT_LT((trimmed.q_inv() - direct).cwiseAbs().maxCoeff(), 1e-6 * direct.cwiseAbs().maxCoeff());
  EXPECT_EQ(Eigen::VectorXd(trimmed.dictionary().row(4)), Eigen::VectorXd(model.dictionary().row(5)));
  EXPECT_THROW(trimmed.remove_basis(trimmed.size()), softsp::InvalidArgument);
}

TEST(Krlst, ForgettingTracksAChangingFunction) {
  double with_forgetting = 0.0, without = 0.0;
  for (int seed = 0; seed < 5; ++seed) {
    for (double lambda : {0.995, 1.0}) {
      softsp::testing::Gen gen(100 + seed);
      KernelParams params;
      params.sigma2 = 0.5;
      params.noise_var = 0.01;
      params.lambda = lambda;
      params.budget = 60;
      KrlstModel model(params, 3, 2);
      double err = 0.0;
      for (int n = 0; n < 3000; ++n) {
        const Eigen::VectorXd z = gen.vector(3, -1, 1);
        // The target jumps halfway through.
        const Eigen::VectorXd y = smooth_target(z, n < 1500 ? 0.0 : 1.5);
        if (n >= 2000) err += (model.predict(z).mean - y).squaredNorm();
        model.train(z, y);
      }
      (lambda < 1.0 ? with_forgetting : without) += err;
    }
  }
  EXPECT_LT(with_forgetting, without);
}

TEST(Krlst, SnapshotHasOneRowPerBasis) {
  softsp::testing::Gen gen(67);
  KrlstModel model(exact_params(), 2, 3);
  for (int n = 0; n < 4; ++n) model.train(gen.vector(2, -1, 1), gen.vector(3, -1, 1));
  std::ostringstream os;
  model.write_snapshot(os);
  const std::string text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
  EXPECT_EQ(text.substr(0, text.find('\n')), "basis,z0,z1,w0,w1,w2");
}
