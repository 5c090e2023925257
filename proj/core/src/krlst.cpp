#include "softsp/krlst.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include <Eigen/Cholesky>
#include <fmt/format.h>

#include "softsp/types.hpp"

namespace softsp::krlst {

namespace {

void erase_row(Eigen::MatrixXd& m, Eigen::Index i) {
  const Eigen::Index tail = m.rows() - i - 1;
  if (tail > 0) {
    m.middleRows(i, tail) = m.bottomRows(tail).eval();
  }
  m.conservativeResize(m.rows() - 1, Eigen::NoChange);
}

void erase_col(Eigen::MatrixXd& m, Eigen::Index i) {
  const Eigen::Index tail = m.cols() - i - 1;
  if (tail > 0) {
    m.middleCols(i, tail) = m.rightCols(tail).eval();
  }
  m.conservativeResize(Eigen::NoChange, m.cols() - 1);
}

}  // namespace

void KernelParams::validate() const {
  if (!(sigma2 > 0.0)) throw InvalidArgument("krlst: sigma2 must be > 0");
  if (!(noise_var > 0.0)) throw InvalidArgument("krlst: noise_var must be > 0");
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw InvalidArgument("krlst: lambda must lie in (0, 1]");
  }
  if (budget < 1) throw InvalidArgument("krlst: budget must be >= 1");
  if (!(jitter >= 0.0)) throw InvalidArgument("krlst: jitter must be >= 0");
  if (!(novelty_factor > 0.0)) {
    throw InvalidArgument("krlst: novelty_factor must be > 0");
  }
}

double gaussian_kernel(const Eigen::Ref<const Eigen::VectorXd>& a,
                       const Eigen::Ref<const Eigen::VectorXd>& b,
                       double sigma2) {
  if (a.size() != b.size()) {
    throw InvalidArgument("gaussian_kernel: dimension mismatch (" +
                          std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  }
  return std::exp(-(a - b).squaredNorm() / (2.0 * sigma2));
}

KrlstModel::KrlstModel(KernelParams params, int input_dim, int output_dim)
    : params_(params), input_dim_(input_dim), output_dim_(output_dim) {
  params_.validate();
  if (input_dim < 1 || output_dim < 1) {
    throw InvalidArgument("KrlstModel: dimensions must be positive");
  }
  dictionary_.resize(0, input_dim);
  mu_.resize(0, output_dim);
  sigma_.resize(0, 0);
  q_inv_.resize(0, 0);
}

KrlstModel KrlstModel::from_state(KernelParams params,
                                  const Eigen::MatrixXd& dictionary,
                                  const Eigen::MatrixXd& mu,
                                  const Eigen::MatrixXd& sigma) {
  const Eigen::Index m = dictionary.rows();
  if (mu.rows() != m || sigma.rows() != m || sigma.cols() != m) {
    throw InvalidArgument("KrlstModel::from_state: inconsistent sizes");
  }
  KrlstModel model(params, static_cast<int>(dictionary.cols()),
                   static_cast<int>(mu.cols()));
  model.dictionary_ = dictionary;
  model.mu_ = mu;
  model.sigma_ = sigma;
  const Eigen::MatrixXd k = model.gram();
  model.q_inv_ = k.ldlt().solve(Eigen::MatrixXd::Identity(m, m));
  return model;
}

void KrlstModel::check_input(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != input_dim_) {
    throw InvalidArgument("krlst: feature dimension " +
                          std::to_string(z.size()) + " does not match " +
                          std::to_string(input_dim_));
  }
}

Eigen::VectorXd KrlstModel::kernel_vector(
    const Eigen::Ref<const Eigen::VectorXd>& z) const {
  const Eigen::VectorXd sq = (dictionary_.rowwise() - z.transpose())
                                 .rowwise()
                                 .squaredNorm();
  return (-sq / (2.0 * params_.sigma2)).array().exp();
}

Eigen::MatrixXd KrlstModel::gram() const {
  const Eigen::Index m = dictionary_.rows();
  Eigen::MatrixXd k(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    k(i, i) = 1.0 + params_.jitter;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = gaussian_kernel(dictionary_.row(i).transpose(),
                                       dictionary_.row(j).transpose(),
                                       params_.sigma2);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

Prediction KrlstModel::predict(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  check_input(z);
  Prediction out;
  if (size() == 0) {
    out.mean = Eigen::VectorXd::Zero(output_dim_);
    out.variance = 1.0 + params_.noise_var;
    return out;
  }
  const Eigen::VectorXd k = kernel_vector(z);
  const Eigen::VectorXd q = q_inv_ * k;
  out.mean = mu_.transpose() * q;
  const double gamma2 = std::max(1.0 + params_.jitter - k.dot(q), 0.0);
  const double sf2 = std::max(gamma2 + q.dot(sigma_ * q), 0.0);
  out.variance = sf2 + params_.noise_var;
  return out;
}

void KrlstModel::forget() {
  if (params_.lambda == 1.0 || size() == 0) {
    return;
  }
  sigma_ = params_.lambda * sigma_ + (1.0 - params_.lambda) * gram();
  mu_ *= std::sqrt(params_.lambda);
}

void KrlstModel::train(const Eigen::Ref<const Eigen::VectorXd>& z,
                       const Eigen::Ref<const Eigen::VectorXd>& y) {
  check_input(z);
  if (y.size() != output_dim_) {
    throw InvalidArgument("krlst: target dimension mismatch");
  }
  if (!z.allFinite() || !y.allFinite()) {
    throw InvalidArgument("krlst: non-finite training sample");
  }

  forget();

  const Eigen::Index m = size();
  const double kss = 1.0 + params_.jitter;
  const Eigen::VectorXd k = kernel_vector(z);
  const Eigen::VectorXd q = q_inv_ * k;
  const Eigen::VectorXd y_mean = mu_.transpose() * q;
  double gamma2 = kss - k.dot(q);
  if (gamma2 < 0.0) gamma2 = 0.0;
  const Eigen::VectorXd h = sigma_ * q;
  double sf2 = gamma2 + q.dot(h);
  if (sf2 < 0.0) sf2 = 0.0;
  const double sy2 = params_.noise_var + sf2;
  if (sy2 < params_.jitter) {
    throw NumericalError(
        "krlst: predictive variance underflow; hyperparameters are "
        "ill-conditioned");
  }

  // Posterior over [f(bases); f(z)] after observing y at z.
  Eigen::VectorXd p(m + 1);
  p << h, sf2;
  const Eigen::RowVectorXd innovation = (y - y_mean).transpose() / sy2;

  if (gamma2 > params_.jitter * params_.novelty_factor) {
    Eigen::MatrixXd mu_new(m + 1, output_dim_);
    mu_new << mu_, y_mean.transpose();
    mu_new += p * innovation;

    Eigen::MatrixXd sigma_new(m + 1, m + 1);
    sigma_new << sigma_, h, h.transpose(), sf2;
    sigma_new -= (p * p.transpose()) / sy2;

    Eigen::VectorXd e(m + 1);
    e << q, -1.0;
    Eigen::MatrixXd q_new = Eigen::MatrixXd::Zero(m + 1, m + 1);
    q_new.topLeftCorner(m, m) = q_inv_;
    q_new += (e * e.transpose()) / gamma2;

    dictionary_.conservativeResize(m + 1, Eigen::NoChange);
    dictionary_.row(m) = z.transpose();
    mu_ = std::move(mu_new);
    sigma_ = std::move(sigma_new);
    q_inv_ = std::move(q_new);
    prune_to_budget();
  } else {
    // z lies in the span of the dictionary: keep the marginal over the bases.
    mu_ += p.head(m) * innovation;
    sigma_ -= (p.head(m) * p.head(m).transpose()) / sy2;
  }
}

Eigen::VectorXd KrlstModel::error_scores() const {
  const Eigen::MatrixXd alpha = q_inv_ * mu_;
  return alpha.rowwise().squaredNorm().array() / q_inv_.diagonal().array();
}

void KrlstModel::prune_to_budget() {
  while (size() > params_.budget) {
    const Eigen::VectorXd scores = error_scores();
    Eigen::Index worst = 0;
    for (Eigen::Index i = 1; i < scores.size(); ++i) {
      if (scores(i) < scores(worst)) worst = i;
    }
    remove_basis(worst);
  }
}

void KrlstModel::remove_basis(Eigen::Index r) {
  if (r < 0 || r >= size()) {
    throw InvalidArgument("KrlstModel::remove_basis: index out of range");
  }
  // Inverse of the reduced Gram matrix via the Schur complement.
  const Eigen::VectorXd qs = q_inv_.col(r);
  const double qrr = q_inv_(r, r);
  q_inv_ -= (qs * qs.transpose()) / qrr;
  erase_row(q_inv_, r);
  erase_col(q_inv_, r);
  erase_row(sigma_, r);
  erase_col(sigma_, r);
  erase_row(mu_, r);
  erase_row(dictionary_, r);
}

void KrlstModel::write_snapshot(std::ostream& os) const {
  os << "basis";
  for (int j = 0; j < input_dim_; ++j) os << ",z" << j;
  for (int j = 0; j < output_dim_; ++j) os << ",w" << j;
  os << '\n';
  const Eigen::MatrixXd w = weights();
  for (Eigen::Index i = 0; i < size(); ++i) {
    os << i;
    for (int j = 0; j < input_dim_; ++j) {
      os << fmt::format(",{:.17g}", dictionary_(i, j));
    }
    for (int j = 0; j < output_dim_; ++j) {
      os << fmt::format(",{:.17g}", w(i, j));
    }
    os << '\n';
  }
}

}  // namespace softsp::krlst
