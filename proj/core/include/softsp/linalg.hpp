#pragma once

#include <Eigen/Core>

namespace softsp::linalg {

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
/// Intended for the small, well-scaled matrices met in discretization.
Eigen::MatrixXd expm(const Eigen::MatrixXd& m);

/// Zero-order-hold discretization of dx/dt = A x + B u at step dt, through
/// the exponential of the augmented matrix [[A, B], [0, 0]] * dt.
void zoh_discretize(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                    double dt, Eigen::MatrixXd* a_disc,
                    Eigen::MatrixXd* b_disc);

/// Largest real part among the eigenvalues of a square matrix.
double spectral_abscissa(const Eigen::MatrixXd& a);

}  // namespace softsp::linalg
