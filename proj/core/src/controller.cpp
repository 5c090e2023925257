#include "softsp/controller.hpp"

#include <cmath>
#include <string>

namespace softsp::control {

std::string_view to_string(GainCondition g) {
  switch (g) {
    case GainCondition::Low: return "low";
    case GainCondition::Medium: return "med";
    case GainCondition::High: return "high";
  }
  return "?";
}

GainCondition parse_gain(std::string_view s) {
  if (s == "low") return GainCondition::Low;
  if (s == "med" || s == "medium") return GainCondition::Medium;
  if (s == "high") return GainCondition::High;
  throw InvalidArgument("unknown gain condition '" + std::string(s) + "'");
}

double k1_multiplier(GainCondition g) {
  switch (g) {
    case GainCondition::Low: return 1.0;
    case GainCondition::Medium: return 2.0;
    case GainCondition::High: return 3.0;
  }
  return 1.0;
}

void GainSet::validate() const {
  const auto positive = [](const Mat6& m) {
    return (m.diagonal().array() > 0.0).all() && m.allFinite();
  };
  if (!positive(k1) || !positive(k2) || !positive(gamma) || !positive(l_obs)) {
    throw InvalidArgument("gain set: diagonals must be strictly positive");
  }
}

GainSet for_condition(const GainSet& low, GainCondition condition) {
  GainSet out = low;
  out.k1 = low.k1 * k1_multiplier(condition);
  out.condition = condition;
  return out;
}

ControllerState initial_state(const Vec6& first_measurement) {
  ControllerState s;
  s.x_hat = first_measurement;
  return s;
}

Vec6 signed_power(const Vec6& w, double a) {
  Vec6 out;
  for (int i = 0; i < 6; ++i) {
    const double sgn = (w(i) > 0.0) - (w(i) < 0.0);
    out(i) = sgn == 0.0 ? 0.0 : sgn * std::pow(std::abs(w(i)), a);
  }
  return out;
}

Vec6 stsmc_step(ControllerState& state, const Vec6& e, const GainSet& gains,
                double dt) {
  if (!state.saturated) {
    state.integral_term += gains.k2 * signed_power(e, 0.0) * dt;
  }
  state.proportional_term = gains.k1 * signed_power(e, 0.5);
  return state.proportional_term + state.integral_term;
}

Vec6 desired_speed(const Vec6& r_dot, const Vec6& f_of_x, const Vec6& v_smc) {
  return r_dot - f_of_x - v_smc;
}

void input_estimator_step(ControllerState& state, const Vec6& x, const Vec6& v,
                          const GainSet& gains, const plant::PlantParams& model,
                          double u_max, double dt) {
  const Mat6 jac = plant::input_jacobian(x, state.u_est, model);
  if (!jac.allFinite()) {
    throw NumericalError("input estimator: non-finite input Jacobian");
  }
  const Vec6 residual = v - plant::input_map(x, state.u_est, model);
  state.u_est += gains.gamma * jac.transpose() * residual * dt;
  state.saturated = false;
  for (int i = 0; i < 6; ++i) {
    if (state.u_est(i) >= u_max) {
      state.u_est(i) = u_max;
      state.saturated = true;
    } else if (state.u_est(i) <= -u_max) {
      state.u_est(i) = -u_max;
      state.saturated = true;
    }
  }
}

void observer_step(ControllerState& state, const Vec6& x_measured,
                   const GainSet& gains, double dt) {
  state.v_hat = gains.l_obs * (x_measured - state.x_hat);
  state.x_hat += state.v_hat * dt;
}

}  // namespace softsp::control
