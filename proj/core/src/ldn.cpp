#include "softsp/ldn.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "softsp/linalg.hpp"
#include "softsp/types.hpp"

namespace softsp::ldn {

namespace {

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
  }
  return c;
}

}  // namespace

LdnSystem build_ldn(int order, double theta, double dt) {
  if (order < 1) {
    throw InvalidArgument("build_ldn: order must be >= 1, got " +
                          std::to_string(order));
  }
  if (!(theta > 0.0) || !(dt > 0.0)) {
    throw InvalidArgument("build_ldn: theta and dt must be positive");
  }
  if (!(dt < theta)) {
    throw InvalidArgument("build_ldn: dt must be shorter than theta");
  }

  LdnSystem sys;
  sys.order = order;
  sys.theta = theta;
  sys.dt = dt;
  sys.a_cont.resize(order, order);
  sys.b_cont.resize(order);
  for (int i = 0; i < order; ++i) {
    const double scale = 2.0 * i + 1.0;
    for (int j = 0; j < order; ++j) {
      const double sign = i < j ? -1.0 : ((i - j + 1) % 2 == 0 ? 1.0 : -1.0);
      sys.a_cont(i, j) = scale * sign;
    }
    sys.b_cont(i) = scale * (i % 2 == 0 ? 1.0 : -1.0);
  }

  Eigen::MatrixXd a_disc;
  Eigen::MatrixXd b_disc;
  linalg::zoh_discretize(sys.a_cont / theta, sys.b_cont / theta, dt, &a_disc,
                         &b_disc);
  sys.a_disc = std::move(a_disc);
  sys.b_disc = b_disc.col(0);
  return sys;
}

Eigen::VectorXd unit_steady_state(const LdnSystem& sys) {
  return -sys.a_cont.partialPivLu().solve(sys.b_cont);
}

Eigen::VectorXd decode_weights(int order, double r) {
  if (order < 1) {
    throw InvalidArgument("decode_weights: order must be >= 1");
  }
  if (!(r >= 0.0 && r <= 1.0)) {
    throw InvalidArgument("decode_weights: r must lie in [0, 1]");
  }
  Eigen::VectorXd w(order);
  for (int i = 0; i < order; ++i) {
    double sum = 0.0;
    for (int j = 0; j <= i; ++j) {
      sum += binomial(i, j) * binomial(i + j, j) * std::pow(-r, j);
    }
    w(i) = (i % 2 == 0 ? 1.0 : -1.0) * sum;
  }
  return w;
}

LdnBank::LdnBank(LdnSystem system, int channels) : system_(std::move(system)) {
  if (channels < 1) {
    throw InvalidArgument("LdnBank: need at least one channel");
  }
  states_ = Eigen::MatrixXd::Zero(channels, system_.order);
}

void LdnBank::step(const Eigen::Ref<const Eigen::VectorXd>& u) {
  if (u.size() != states_.rows()) {
    throw InvalidArgument("LdnBank::step: expected " +
                          std::to_string(states_.rows()) + " inputs");
  }
  if (!u.allFinite()) {
    throw InvalidArgument("LdnBank::step: non-finite input");
  }
  // Rows are channels, so m_c <- A_d m_c + B_d u_c is a right-multiply.
  states_ = states_ * system_.a_disc.transpose() +
            u * system_.b_disc.transpose();
}

Eigen::VectorXd LdnBank::decode_delayed(double r) const {
  return states_ * decode_weights(system_.order, r);
}

void LdnBank::reset() { states_.setZero(); }

Eigen::VectorXd LdnBank::flattened() const {
  Eigen::VectorXd out(states_.size());
  for (Eigen::Index c = 0; c < states_.rows(); ++c) {
    out.segment(c * states_.cols(), states_.cols()) = states_.row(c).transpose();
  }
  return out;
}

}  // namespace softsp::ldn
