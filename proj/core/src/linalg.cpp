#include "softsp/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "softsp/types.hpp"

namespace softsp::linalg {

Eigen::MatrixXd expm(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw InvalidArgument("expm: matrix must be square");
  }
  if (!m.allFinite()) {
    throw NumericalError("expm: non-finite input");
  }
  const Eigen::Index n = m.rows();

  // Scale until the 1-norm is below 1/2 so 18 Taylor terms reach round-off.
  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  const Eigen::MatrixXd scaled = m / std::ldexp(1.0, squarings);

  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 18; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) {
    result = result * result;
  }
  return result;
}

void zoh_discretize(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                    double dt, Eigen::MatrixXd* a_disc,
                    Eigen::MatrixXd* b_disc) {
  const Eigen::Index states = a.rows();
  const Eigen::Index inputs = b.cols();
  if (a.cols() != states || b.rows() != states) {
    throw InvalidArgument("zoh_discretize: dimension mismatch");
  }
  if (!(dt > 0.0)) throw InvalidArgument("zoh_discretize: dt must be positive");
  //  M = [A  B]      exp(M dt) = [A_d  B_d]
  //      [0  0]                  [ 0    I ]
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(states + inputs, states + inputs);
  aug.topLeftCorner(states, states) = a;
  aug.topRightCorner(states, inputs) = b;
  const Eigen::MatrixXd phi = expm(aug * dt);
  *a_disc = phi.topLeftCorner(states, states);
  *b_disc = phi.topRightCorner(states, inputs);
}

double spectral_abscissa(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  return solver.eigenvalues().real().maxCoeff();
}

}  // namespace softsp::linalg
