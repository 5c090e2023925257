#include "softsp/stats.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "softsp/types.hpp"

namespace softsp::stats {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kEps = 1e-15;
constexpr int kMaxIterations = 10000;

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;

    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  throw NumericalError("incomplete_beta: continued fraction did not converge");
}

double sample_variance(const std::vector<double>& v, double m) {
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

void check_groups(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) {
    throw InvalidArgument("statistics: need at least two groups");
  }
  for (const auto& g : groups) {
    if (g.size() < 2) {
      throw InvalidArgument("statistics: every group needs two samples");
    }
  }
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw InvalidArgument("incomplete_beta: a and b must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw InvalidArgument("incomplete_beta: x must lie in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The fraction converges fastest on this side of the mean.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_survival(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) {
    throw InvalidArgument("f_survival: degrees of freedom must be positive");
  }
  if (std::isnan(f)) throw InvalidArgument("f_survival: NaN statistic");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return incomplete_beta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * f));
}

double student_t_two_sided(double t, double dof) {
  if (!(dof > 0.0)) {
    throw InvalidArgument("student_t_two_sided: dof must be positive");
  }
  if (std::isnan(t)) throw InvalidArgument("student_t_two_sided: NaN statistic");
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
}

double mean(const std::vector<double>& v) {
  if (v.empty()) throw InvalidArgument("mean of an empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  return std::sqrt(sample_variance(v, mean(v)));
}

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups) {
  check_groups(groups);
  std::size_t total = 0;
  double grand_sum = 0.0;
  for (const auto& g : groups) {
    total += g.size();
    grand_sum += std::accumulate(g.begin(), g.end(), 0.0);
  }
  const double grand_mean = grand_sum / static_cast<double>(total);

  double ss_between = 0.0;
  double ss_within = 0.0;
  for (const auto& g : groups) {
    const double m = mean(g);
    ss_between += static_cast<double>(g.size()) * (m - grand_mean) * (m - grand_mean);
    for (double x : g) ss_within += (x - m) * (x - m);
  }

  AnovaResult out;
  out.df_between = static_cast<double>(groups.size() - 1);
  out.df_within = static_cast<double>(total - groups.size());
  if (ss_within == 0.0) {
    bool same = true;
    const double m0 = mean(groups.front());
    for (const auto& g : groups) same = same && mean(g) == m0;
    out.f = same ? 0.0 : std::numeric_limits<double>::infinity();
    out.p = same ? 1.0 : 0.0;
    return out;
  }
  out.f = (ss_between / out.df_between) / (ss_within / out.df_within);
  out.p = f_survival(out.f, out.df_between, out.df_within);
  return out;
}

WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) {
    throw InvalidArgument("welch_t: every group needs two samples");
  }
  const double ma = mean(a);
  const double mb = mean(b);
  const double va = sample_variance(a, ma) / static_cast<double>(a.size());
  const double vb = sample_variance(b, mb) / static_cast<double>(b.size());
  WelchResult out;
  if (va + vb == 0.0) {
    out.t = ma == mb ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), ma - mb);
    out.dof = static_cast<double>(a.size() + b.size() - 2);
    out.p = ma == mb ? 1.0 : 0.0;
    return out;
  }
  out.t = (ma - mb) / std::sqrt(va + vb);
  const double num = (va + vb) * (va + vb);
  const double den = va * va / static_cast<double>(a.size() - 1) +
                     vb * vb / static_cast<double>(b.size() - 1);
  out.dof = num / den;
  out.p = student_t_two_sided(out.t, out.dof);
  return out;
}

Eigen::MatrixXd pairwise_welch(const std::vector<std::vector<double>>& groups) {
  check_groups(groups);
  const auto k = static_cast<Eigen::Index>(groups.size());
  const double pairs = static_cast<double>(k * (k - 1) / 2);
  Eigen::MatrixXd p = Eigen::MatrixXd::Ones(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double raw = welch_t(groups[static_cast<std::size_t>(i)],
                                 groups[static_cast<std::size_t>(j)]).p;
      p(i, j) = p(j, i) = std::min(1.0, raw * pairs);
    }
  }
  return p;
}

}  // namespace softsp::stats
