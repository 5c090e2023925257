#pragma once

#include <cstdint>
#include <vector>

#include "softsp/experiment.hpp"

namespace softsp::metrics {

enum class Window { Transient, Stable };
enum class Metric {
  /// |(x - r)_xy|.
  Tracking,
  /// |(x(t) - x(t-d))_xy - y_hat_xy(t-d)|.
  Modeling,
  /// Modeling error of the null predictor y_hat = 0 on the same data.
  ModelingNoPred,
};

/// Per-tick XY error magnitude in mm. Modeling entries before the first
/// realized delay interval are NaN.
std::vector<double> error_series(const ExperimentLog& log, Metric metric);

/// RMS of the per-tick XY error over a phase window, in mm. The transient
/// window holds ticks with t < transient_end, the stable window the rest.
/// Requires a complete log.
double xy_rms(const ExperimentLog& log, Window window, Metric metric);

struct RunSummary {
  predictor::Variant variant = predictor::Variant::NoPred;
  control::GainCondition gain = control::GainCondition::Low;
  std::uint64_t seed = 0;
  double track_transient = 0.0;
  double track_stable = 0.0;
  double model_transient = 0.0;
  double model_stable = 0.0;
  double nopred_model_transient = 0.0;
  double nopred_model_stable = 0.0;

  double track(Window w) const {
    return w == Window::Transient ? track_transient : track_stable;
  }
  double model(Window w) const {
    return w == Window::Transient ? model_transient : model_stable;
  }
  double nopred_model(Window w) const {
    return w == Window::Transient ? nopred_model_transient : nopred_model_stable;
  }
};

RunSummary summarize(const ExperimentLog& log);

/// Canonical order: gain, variant, seed.
bool summary_less(const RunSummary& a, const RunSummary& b);

}  // namespace softsp::metrics
