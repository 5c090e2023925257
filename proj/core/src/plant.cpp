#include "softsp/plant.hpp"

#include <cmath>
#include <string>

#include "softsp/linalg.hpp"

namespace softsp::plant {

void PlantParams::validate() const {
  if (delay_steps < 0) throw InvalidArgument("plant: delay_steps must be >= 0");
  if (!(dt > 0.0)) throw InvalidArgument("plant: dt must be > 0");
  if (!(noise_pos >= 0.0) || !(noise_rot >= 0.0)) {
    throw InvalidArgument("plant: noise levels must be >= 0");
  }
  if (!(workspace_bound > 0.0)) {
    throw InvalidArgument("plant: workspace_bound must be > 0");
  }
  if (!a_lin.allFinite() || !b1.allFinite() || !coupling.allFinite() ||
      !fa_coeff.allFinite() || !g_sat.allFinite() || !std::isfinite(b2_gain)) {
    throw InvalidArgument("plant: non-finite parameter");
  }
  const double abscissa = linalg::spectral_abscissa(a_lin);
  if (!(abscissa < 0.0)) {
    throw InvalidArgument("plant: a_lin is not Hurwitz (max Re(eig) = " +
                          std::to_string(abscissa) + ")");
  }
}

PlantParams default_params() {
  PlantParams p;
  // Viscoelastic relaxation plus a skew-symmetric exchange between pose
  // coordinates; the skew part leaves x'Ax = -x'Dx, so the unforced arm
  // loses energy monotonically.
  Vec6 relax;
  relax << 5.0, 5.0, 6.0, 7.0, 7.0, 8.0;
  p.a_lin = Mat6(relax.asDiagonal()) * -1.0;
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      const double s = std::sqrt(relax(i) * relax(j)) * std::sin(0.9 * (i + 1) * (j + 2) + 0.3);
      p.a_lin(i, j) += s;
      p.a_lin(j, i) -= s;
    }
  }

  p.fa_coeff << 15.0, 15.0, 10.0, 5.0, 5.0, 5.0;

  // Each servo pulls on every pose coordinate. A skew cross-coupling keeps
  // the input map well conditioned (singular values in [1, 1.5]).
  p.b1.setIdentity();
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      const double c = 0.5 * std::cos(1.3 * (i + 1) * (j + 1));
      p.b1(i, j) += c;
      p.b1(j, i) -= c;
    }
  }
  p.b2_gain = 3.0;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      p.coupling(i, j) = i == j ? 1.0 : 0.2 * std::sin(0.7 * (i + 2) * (j + 1));
    }
  }
  p.g_sat.setConstant(0.3);

  p.delay_steps = 7;
  p.dt = 0.02;
  p.noise_pos = 3e-4;
  p.noise_rot = 3e-3;
  p.workspace_bound = 0.5;
  return p;
}

Vec6 drift(const Vec6& x, const PlantParams& p) {
  return p.a_lin * x - (p.fa_coeff.array() * x.array() * x.array().abs()).matrix();
}

Vec6 input_map(const Vec6& x, const Vec6& u, const PlantParams& p) {
  const Mat6 gain = p.b1 + p.b2_gain * x(0) * p.coupling;
  const Vec6 g = (p.g_sat.array() * (u.array().tanh() - u.array())).matrix();
  return gain * u + g;
}

Mat6 input_jacobian(const Vec6& x, const Vec6& u, const PlantParams& p) {
  Mat6 j = p.b1 + p.b2_gain * x(0) * p.coupling;
  for (int i = 0; i < 6; ++i) {
    const double t = std::tanh(u(i));
    j(i, i) += p.g_sat(i) * (1.0 - t * t - 1.0);
  }
  return j;
}

Vec6 plant_dynamics(const Vec6& x, const Vec6& u_delayed, const PlantParams& p) {
  if (!x.allFinite() || !u_delayed.allFinite()) {
    throw SimulationDiverged("plant_dynamics: non-finite state or input");
  }
  return drift(x, p) + input_map(x, u_delayed, p);
}

Vec6 rk4_step(const Vec6& x, const Vec6& u, const PlantParams& p, double dt) {
  const Vec6 k1 = plant_dynamics(x, u, p);
  const Vec6 k2 = plant_dynamics(x + 0.5 * dt * k1, u, p);
  const Vec6 k3 = plant_dynamics(x + 0.5 * dt * k2, u, p);
  const Vec6 k4 = plant_dynamics(x + dt * k3, u, p);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

PlantParams perturbed(const PlantParams& p, double rel, std::uint64_t seed) {
  if (!(rel >= 0.0 && rel < 1.0)) {
    throw InvalidArgument("perturbed: relative mismatch must lie in [0, 1)");
  }
  PlantParams out = p;
  if (rel == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> factor(1.0 - rel, 1.0 + rel);
  for (int i = 0; i < out.a_lin.size(); ++i) out.a_lin(i) *= factor(rng);
  for (int i = 0; i < out.b1.size(); ++i) out.b1(i) *= factor(rng);
  for (int i = 0; i < out.fa_coeff.size(); ++i) out.fa_coeff(i) *= factor(rng);
  return out;
}

Plant::Plant(PlantParams params, const Vec6& x0, std::uint64_t seed)
    : params_(std::move(params)), x_(x0), rng_(seed) {
  params_.validate();
  delay_line_.assign(static_cast<std::size_t>(params_.delay_steps), Vec6::Zero());
}

Vec6 Plant::measure() {
  Vec6 y = x_;
  for (int i = 0; i < 6; ++i) {
    const double sd = i < 3 ? params_.noise_pos : params_.noise_rot;
    const double n = noise_(rng_);
    if (sd > 0.0) y(i) += sd * n;
  }
  return y;
}

Vec6 Plant::step(const Vec6& u) {
  if (!u.allFinite()) {
    throw SimulationDiverged("plant: non-finite command");
  }
  Vec6 applied = u;
  if (params_.delay_steps > 0) {
    applied = delay_line_.front();
    delay_line_.pop_front();
    delay_line_.push_back(u);
  }
  x_ = rk4_step(x_, applied, params_, params_.dt);
  if (!x_.allFinite() || x_.norm() > params_.workspace_bound) {
    throw SimulationDiverged("plant: pose left the workspace bound");
  }
  return measure();
}

}  // namespace softsp::plant
