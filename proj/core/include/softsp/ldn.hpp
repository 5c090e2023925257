#pragma once

#include <Eigen/Core>

namespace softsp::ldn {

/**
 * Legendre delay network for a single scalar channel.
 *
 *   theta * dm/dt = A m + B u
 *
 * The p states are the coefficients of a shifted-Legendre expansion of the
 * input over the sliding window [t - theta, t]. The discrete pair is the
 * exact zero-order-hold discretization of (A / theta, B / theta) at dt.
 */
struct LdnSystem {
  int order = 3;
  double theta = 0.14;
  double dt = 0.02;
  Eigen::MatrixXd a_cont;
  Eigen::VectorXd b_cont;
  Eigen::MatrixXd a_disc;
  Eigen::VectorXd b_disc;
};

/// Decode position that reads the oldest end of the window (u(t - theta)).
/// Fixed against a ring-buffer delay in the test suite.
inline constexpr double kFullDelay = 1.0;
/// Decode position that reads the newest end of the window (u(t)).
inline constexpr double kNoDelay = 0.0;

LdnSystem build_ldn(int order, double theta, double dt);

/// Fixed point of the theta-scaled continuous system under unit input,
/// -(A)^-1 B. Unit input held forever leaves the state here.
Eigen::VectorXd unit_steady_state(const LdnSystem& sys);

/// Shifted-Legendre decode weights w_i(r) for r in [0, 1].
Eigen::VectorXd decode_weights(int order, double r);

/// One LdnSystem shared by several channels; states are channels x order.
class LdnBank {
 public:
  LdnBank(LdnSystem system, int channels);

  /// Advance every channel by one sample with its input held over dt.
  void step(const Eigen::Ref<const Eigen::VectorXd>& u);

  /// Per-channel value of the input `r * theta` seconds ago.
  Eigen::VectorXd decode_delayed(double r) const;

  void reset();

  int channels() const { return static_cast<int>(states_.rows()); }
  int order() const { return system_.order; }
  const LdnSystem& system() const { return system_; }
  /// Row c holds the memory of channel c.
  const Eigen::MatrixXd& states() const { return states_; }
  /// States in channel-major order: [m_0(ch0) .. m_{p-1}(ch0), m_0(ch1), ...].
  Eigen::VectorXd flattened() const;

 private:
  LdnSystem system_;
  Eigen::MatrixXd states_;
};

}  // namespace softsp::ldn
