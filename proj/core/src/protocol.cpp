#include "softsp/protocol.hpp"

#include <cmath>
#include <string>

namespace softsp {

void Protocol::validate() const {
  if (!(dt > 0.0) || !(duration > dt)) {
    throw InvalidArgument("protocol: need 0 < dt < duration");
  }
  if (!(buildup > 0.0) || !(radius >= 0.0) || !std::isfinite(omega)) {
    throw InvalidArgument("protocol: invalid circle parameters");
  }
  if (!(transient_end > 0.0 && transient_end < duration)) {
    throw InvalidArgument("protocol: transient_end must lie inside the run");
  }
}

int Protocol::ticks() const {
  return static_cast<int>(std::lround(duration / dt));
}

int Protocol::transient_ticks() const {
  return static_cast<int>(std::lround(transient_end / dt));
}

ReferenceSample reference(double t, const Protocol& proto) {
  // Tolerate the rounding of k * dt at the end of the run.
  if (!(t >= 0.0 && t <= proto.duration + 1e-9)) {
    throw InvalidArgument("reference: t = " + std::to_string(t) +
                          " outside [0, duration]");
  }
  const bool growing = t < proto.buildup;
  const double rho = proto.radius * (growing ? t / proto.buildup : 1.0);
  const double rho_dot = growing ? proto.radius / proto.buildup : 0.0;
  const double c = std::cos(proto.omega * t);
  const double s = std::sin(proto.omega * t);

  ReferenceSample out;
  out.r(0) = proto.center_x + rho * c;
  out.r(1) = proto.center_y + rho * s;
  out.r(2) = proto.z_ref;
  out.r.tail<3>() = proto.orientation_ref;
  out.r_dot(0) = rho_dot * c - rho * proto.omega * s;
  out.r_dot(1) = rho_dot * s + rho * proto.omega * c;
  return out;
}

}  // namespace softsp
