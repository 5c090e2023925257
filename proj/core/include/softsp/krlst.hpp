#pragma once

#include <iosfwd>

#include <Eigen/Core>

namespace softsp::krlst {

struct KernelParams {
  /// Squared Gaussian kernel width, in (normalized) feature units squared.
  double sigma2 = 30.0;
  /// Observation noise variance; plays the role of the regularizer nu.
  double noise_var = 0.05;
  /// Forgetting factor in (0, 1]. 1 disables forgetting.
  double lambda = 0.999;
  int budget = 80;
  double jitter = 1e-8;
  /// A sample joins the dictionary when its novelty exceeds jitter * this.
  double novelty_factor = 10.0;

  void validate() const;
};

/// exp(-|a - b|^2 / (2 sigma2)).
double gaussian_kernel(const Eigen::Ref<const Eigen::VectorXd>& a,
                       const Eigen::Ref<const Eigen::VectorXd>& b,
                       double sigma2);

struct Prediction {
  Eigen::VectorXd mean;
  double variance = 0.0;
};

/**
 * Kernel recursive least squares tracker with a shared dictionary for all
 * output columns.
 *
 * The model is an online Gaussian-process posterior over the function values
 * at the dictionary bases: `mu` holds one posterior-mean column per output,
 * `sigma` the shared posterior covariance and `q_inv` the inverse of the
 * jittered Gram matrix of the bases. Predictions are k^T (q_inv mu).
 *
 * Each training step forgets toward the prior, performs the Bayesian update,
 * admits the sample as a basis if it is novel enough and finally deletes the
 * basis with the smallest error score once the budget is exceeded.
 */
class KrlstModel {
 public:
  KrlstModel(KernelParams params, int input_dim, int output_dim);

  /// Rebuild a model from a stored dictionary and posterior. q_inv is
  /// recomputed from the jittered Gram matrix of `dictionary` (rows = bases).
  static KrlstModel from_state(KernelParams params,
                               const Eigen::MatrixXd& dictionary,
                               const Eigen::MatrixXd& mu,
                               const Eigen::MatrixXd& sigma);

  Prediction predict(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  void train(const Eigen::Ref<const Eigen::VectorXd>& z,
             const Eigen::Ref<const Eigen::VectorXd>& y);

  /// Deletes the basis with the lowest error score while the dictionary is
  /// over budget. Ties go to the lowest index.
  void prune_to_budget();
  /// Error score of every basis: sum over outputs of (q_inv mu)_i^2 / q_inv_ii.
  Eigen::VectorXd error_scores() const;
  /// Removes basis i and shrinks every matrix consistently.
  void remove_basis(Eigen::Index i);

  const KernelParams& params() const { return params_; }
  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }
  Eigen::Index size() const { return dictionary_.rows(); }
  const Eigen::MatrixXd& dictionary() const { return dictionary_; }
  const Eigen::MatrixXd& mu() const { return mu_; }
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  const Eigen::MatrixXd& q_inv() const { return q_inv_; }
  /// Jittered Gram matrix of the current dictionary.
  Eigen::MatrixXd gram() const;
  /// q_inv mu: the weights applied to the kernel vector.
  Eigen::MatrixXd weights() const { return q_inv_ * mu_; }

  /// Flat CSV dump: one row per basis, feature columns then mean weights.
  void write_snapshot(std::ostream& os) const;

 private:
  Eigen::VectorXd kernel_vector(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  void forget();
  void check_input(const Eigen::Ref<const Eigen::VectorXd>& z) const;

  KernelParams params_;
  int input_dim_;
  int output_dim_;
  Eigen::MatrixXd dictionary_;  // bases x input_dim
  Eigen::MatrixXd mu_;          // bases x output_dim
  Eigen::MatrixXd sigma_;       // bases x bases
  Eigen::MatrixXd q_inv_;       // bases x bases
};

}  // namespace softsp::krlst
