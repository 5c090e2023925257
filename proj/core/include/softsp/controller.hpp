#pragma once

#include <string_view>

#include "softsp/plant.hpp"
#include "softsp/types.hpp"

namespace softsp::control {

enum class GainCondition { Low, Medium, High };

std::string_view to_string(GainCondition g);
GainCondition parse_gain(std::string_view s);
/// Multiplier applied to the low-gain k1: 1, 2 or 3.
double k1_multiplier(GainCondition g);

struct GainSet {
  Mat6 k1 = Mat6::Zero();
  Mat6 k2 = Mat6::Zero();
  /// Input estimator gain (Gamma).
  Mat6 gamma = Mat6::Zero();
  /// Velocity observer gain (L).
  Mat6 l_obs = Mat6::Zero();
  GainCondition condition = GainCondition::Low;

  /// Diagonals must be strictly positive.
  void validate() const;
};

/// The gain ladder: Medium and High double and triple k1 of the low set.
GainSet for_condition(const GainSet& low, GainCondition condition);

struct ControllerState {
  /// Accumulated k2 * sign(e) integral of the super-twisting law.
  Vec6 integral_term = Vec6::Zero();
  /// Proportional term k1 |e|^1/2 sign(e) from the latest step (logged).
  Vec6 proportional_term = Vec6::Zero();
  Vec6 u_est = Vec6::Zero();
  Vec6 x_hat = Vec6::Zero();
  Vec6 v_hat = Vec6::Zero();
  /// Some u_est component sat on the actuator limit after the last update.
  bool saturated = false;
};

/// Observer seeded on the first measurement so it starts without a transient.
ControllerState initial_state(const Vec6& first_measurement);

/// Component-wise |w_i|^a sgn(w_i) with sgn(0) = 0.
Vec6 signed_power(const Vec6& w, double a);

/// Super-twisting law. Returns v_smc and advances the integral term by
/// forward Euler; the integral is held while the input estimate is saturated.
Vec6 stsmc_step(ControllerState& state, const Vec6& e, const GainSet& gains,
                double dt);

/// v = r_dot - f(x) - v_smc.
Vec6 desired_speed(const Vec6& r_dot, const Vec6& f_of_x, const Vec6& v_smc);

/// u <- u + Gamma J^T (v - h(x, u)) dt with J = dh/du of the controller
/// model; clamps the result to [-u_max, u_max].
void input_estimator_step(ControllerState& state, const Vec6& x, const Vec6& v,
                          const GainSet& gains, const plant::PlantParams& model,
                          double u_max, double dt);

/// v_hat = L (x - x_hat); x_hat <- x_hat + v_hat dt.
void observer_step(ControllerState& state, const Vec6& x_measured,
                   const GainSet& gains, double dt);

}  // namespace softsp::control
