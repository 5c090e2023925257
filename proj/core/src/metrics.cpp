#include "softsp/metrics.hpp"

#include <cmath>
#include <limits>
#include <tuple>

namespace softsp::metrics {

std::vector<double> error_series(const ExperimentLog& log, Metric metric) {
  const std::size_t n = log.rows.size();
  std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
  const auto d = static_cast<std::size_t>(log.delay_steps);
  for (std::size_t k = 0; k < n; ++k) {
    const LogRow& row = log.rows[k];
    if (metric == Metric::Tracking) {
      out[k] = 1000.0 * (row.x - row.r).head<2>().norm();
      continue;
    }
    if (k < d) continue;
    const LogRow& past = log.rows[k - d];
    Eigen::Vector2d err = (row.x - past.x).head<2>();
    if (metric == Metric::Modeling) err -= past.y_hat.head<2>();
    out[k] = 1000.0 * err.norm();
  }
  return out;
}

double xy_rms(const ExperimentLog& log, Window window, Metric metric) {
  if (!log.complete()) {
    throw InvalidArgument("xy_rms: log does not cover the protocol windows");
  }
  const std::vector<double> series = error_series(log, metric);
  const std::size_t split = static_cast<std::size_t>(log.protocol.transient_ticks());
  const std::size_t begin = window == Window::Transient ? 0 : split;
  const std::size_t end = window == Window::Transient ? split : series.size();

  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = begin; k < end; ++k) {
    if (std::isnan(series[k])) continue;
    sum += series[k] * series[k];
    ++count;
  }
  if (count == 0) {
    throw InvalidArgument("xy_rms: window holds no scored ticks");
  }
  return std::sqrt(sum / static_cast<double>(count));
}

RunSummary summarize(const ExperimentLog& log) {
  RunSummary s;
  s.variant = log.variant;
  s.gain = log.gain;
  s.seed = log.seed;
  s.track_transient = xy_rms(log, Window::Transient, Metric::Tracking);
  s.track_stable = xy_rms(log, Window::Stable, Metric::Tracking);
  s.model_transient = xy_rms(log, Window::Transient, Metric::Modeling);
  s.model_stable = xy_rms(log, Window::Stable, Metric::Modeling);
  s.nopred_model_transient = xy_rms(log, Window::Transient, Metric::ModelingNoPred);
  s.nopred_model_stable = xy_rms(log, Window::Stable, Metric::ModelingNoPred);
  return s;
}

bool summary_less(const RunSummary& a, const RunSummary& b) {
  return std::tuple(static_cast<int>(a.gain), static_cast<int>(a.variant), a.seed) <
         std::tuple(static_cast<int>(b.gain), static_cast<int>(b.variant), b.seed);
}

}  // namespace softsp::metrics
