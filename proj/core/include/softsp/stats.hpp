#pragma once

#include <vector>

#include <Eigen/Core>

namespace softsp::stats {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// P(F > f) for an F(d1, d2) variable.
double f_survival(double f, double d1, double d2);

/// Two-sided P(|T| > |t|) for Student's t with `dof` degrees of freedom.
double student_t_two_sided(double t, double dof);

struct AnovaResult {
  double f = 0.0;
  double p = 1.0;
  double df_between = 0.0;
  double df_within = 0.0;
};

/// Classical one-way ANOVA. Needs at least two groups of two samples.
/// With zero within-group variance, p is 0 if the means differ, else 1.
AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups);

struct WelchResult {
  double t = 0.0;
  double dof = 0.0;
  double p = 1.0;
};

/// Welch's unequal-variance t test with Welch-Satterthwaite dof.
WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b);

/// Symmetric matrix of Bonferroni-corrected two-sided Welch p-values over
/// all group pairs; the diagonal is 1.
Eigen::MatrixXd pairwise_welch(const std::vector<std::vector<double>>& groups);

double mean(const std::vector<double>& v);
/// Sample standard deviation (n - 1); 0 for a single sample.
double stddev(const std::vector<double>& v);

}  // namespace softsp::stats
