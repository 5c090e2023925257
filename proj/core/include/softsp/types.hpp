#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace softsp {

/// Pose layout: (x, y, z) in meters followed by (roll, pitch, yaw) in radians.
inline constexpr int kPoseDim = 6;
/// Number of servomotor input channels.
inline constexpr int kInputDim = 6;

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Raised for malformed arguments: wrong dimensions, out-of-range settings.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine cannot produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The simulated plant left its workspace bound.
class SimulationDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

}  // namespace softsp
