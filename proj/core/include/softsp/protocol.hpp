#pragma once

#include "softsp/types.hpp"

namespace softsp {

/// Circular tracking protocol: a spiral whose radius grows linearly during
/// the buildup, then constant-radius circles in the XY plane.
struct Protocol {
  double duration = 60.0;
  double buildup = 20.0;
  double omega = 0.5;
  double radius = 0.05;
  double transient_end = 22.3;
  double dt = 0.02;
  double center_x = 0.0;
  double center_y = 0.0;
  double z_ref = 0.0;
  /// Constant roll, pitch, yaw target.
  Eigen::Vector3d orientation_ref = Eigen::Vector3d::Zero();

  void validate() const;
  /// Number of control ticks, duration / dt.
  int ticks() const;
  /// First tick of the stable window.
  int transient_ticks() const;
};

struct ReferenceSample {
  Vec6 r = Vec6::Zero();
  Vec6 r_dot = Vec6::Zero();
};

/// Reference pose and its analytic rate at time t in [0, duration].
ReferenceSample reference(double t, const Protocol& proto);

}  // namespace softsp
