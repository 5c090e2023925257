#pragma once

#include <cstdint>
#include <deque>
#include <random>

#include "softsp/types.hpp"

namespace softsp::plant {

/**
 * First-order nonlinear pose dynamics with an input delay:
 *
 *   dx/dt = A x + f_A(x) + (B1 + B2(x)) u(t - d) + g(u(t - d))
 *
 *   f_A(x)_i = -fa_i x_i |x_i|
 *   B2(x)    = b2_gain * x_0 * C
 *   g(u)_i   = g_sat_i (tanh(u_i) - u_i)
 */
struct PlantParams {
  Mat6 a_lin = Mat6::Zero();
  Vec6 fa_coeff = Vec6::Zero();
  Mat6 b1 = Mat6::Zero();
  double b2_gain = 0.0;
  Mat6 coupling = Mat6::Zero();
  Vec6 g_sat = Vec6::Zero();
  int delay_steps = 7;
  /// Measurement noise standard deviation for position (m) and orientation (rad).
  double noise_pos = 3e-4;
  double noise_rot = 3e-3;
  double dt = 0.02;
  /// The simulation is declared diverged once |x| exceeds this.
  double workspace_bound = 0.5;

  /// Throws InvalidArgument unless a_lin is Hurwitz and the scalars are sane.
  void validate() const;
};

/// Calibrated surrogate of a two-module cable-driven arm.
PlantParams default_params();

/// State-dependent drift f(x) = A x + f_A(x).
Vec6 drift(const Vec6& x, const PlantParams& p);
/// Input map h(x, u) = (B1 + B2(x)) u + g(u).
Vec6 input_map(const Vec6& x, const Vec6& u, const PlantParams& p);
/// dh/du at (x, u).
Mat6 input_jacobian(const Vec6& x, const Vec6& u, const PlantParams& p);
/// Full right-hand side f(x) + h(x, u_delayed).
Vec6 plant_dynamics(const Vec6& x, const Vec6& u_delayed, const PlantParams& p);

/// Copy of `p` with a_lin, b1 and fa_coeff scaled element-wise by factors
/// drawn uniformly from [1 - rel, 1 + rel]. Deterministic in `seed`.
PlantParams perturbed(const PlantParams& p, double rel, std::uint64_t seed);

/// Ground-truth plant: RK4 integration at the control rate, a FIFO delay
/// line zero-padded at start, and seeded Gaussian measurement noise.
class Plant {
 public:
  Plant(PlantParams params, const Vec6& x0, std::uint64_t seed);

  /// Applies the command issued `delay_steps` ticks ago, queues `u`, and
  /// returns the noisy measurement of the new pose.
  Vec6 step(const Vec6& u);
  /// Noisy measurement of the current pose.
  Vec6 measure();

  const Vec6& state() const { return x_; }
  const PlantParams& params() const { return params_; }
  const std::deque<Vec6>& delay_line() const { return delay_line_; }

 private:
  PlantParams params_;
  Vec6 x_;
  std::deque<Vec6> delay_line_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};
};

/// One RK4 step of plant_dynamics with the input held constant.
Vec6 rk4_step(const Vec6& x, const Vec6& u, const PlantParams& p, double dt);

}  // namespace softsp::plant
