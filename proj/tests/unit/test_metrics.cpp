#include <cmath>

#include <gtest/gtest.h>

#include "softsp/metrics.hpp"

using namespace softsp;
using namespace softsp::metrics;

namespace {

/// Complete log with zero reference, an XY offset of `track` metres in x and
/// predictions `y_hat_x` on every tick.
ExperimentLog synthetic(double track, double step_x, double y_hat_x) {
  ExperimentLog log;
  log.delay_steps = 7;
  log.variant = predictor::Variant::Ldn3;
  log.gain = control::GainCondition::High;
  log.seed = 4;
  for (int k = 0; k < log.protocol.ticks(); ++k) {
    LogRow row;
    row.time = k * log.protocol.dt;
    row.x(0) = track + step_x * k;
    row.x(2) = 0.5;  // z errors are not scored
    row.y_hat(0) = y_hat_x;
    log.rows.push_back(row);
  }
  return log;
}

}  // namespace

TEST(Metrics, TrackingIsXyDistanceInMillimetres) {
  ExperimentLog log = synthetic(0.0, 0.0, 0.0);
  for (auto& row : log.rows) {
    row.x(0) = 0.003;
    row.x(1) = -0.004;
  }
  EXPECT_NEAR(xy_rms(log, Window::Stable, Metric::Tracking), 5.0, 1e-12);
  EXPECT_NEAR(xy_rms(log, Window::Transient, Metric::Tracking), 5.0, 1e-12);
}

TEST(Metrics, PhasesSplitAtTheTransientEnd) {
  ExperimentLog log = synthetic(0.0, 0.0, 0.0);
  for (int k = 0; k < 3000; ++k) log.rows[k].x(0) = k < 1115 ? 0.001 : 0.002;
  EXPECT_NEAR(xy_rms(log, Window::Transient, Metric::Tracking), 1.0, 1e-12);
  EXPECT_NEAR(xy_rms(log, Window::Stable, Metric::Tracking), 2.0, 1e-12);

  // RMS over the windows recombines into the whole-run RMS.
  const double whole = std::sqrt((1115 * 1.0 + 1885 * 4.0) / 3000.0);
  const double t = xy_rms(log, Window::Transient, Metric::Tracking);
  const double s = xy_rms(log, Window::Stable, Metric::Tracking);
  EXPECT_NEAR(std::sqrt((1115 * t * t + 1885 * s * s) / 3000.0), whole, 1e-12);
}

TEST(Metrics, ModelingComparesDelayedDeltaWithPastPrediction) {
  // x grows 1e-4 per tick, so every 7-tick delta is 0.7 mm.
  const ExperimentLog exact = synthetic(0.0, 1e-4, 7e-4);
  EXPECT_NEAR(xy_rms(exact, Window::Stable, Metric::Modeling), 0.0, 1e-9);
  EXPECT_NEAR(xy_rms(exact, Window::Stable, Metric::ModelingNoPred), 0.7, 1e-9);

  const ExperimentLog half = synthetic(0.0, 1e-4, 3.5e-4);
  EXPECT_NEAR(xy_rms(half, Window::Transient, Metric::Modeling), 0.35, 1e-9);
}

TEST(Metrics, ModelingSeriesStartsAfterOneDelay) {
  const ExperimentLog log = synthetic(0.0, 1e-4, 0.0);
  const auto series = error_series(log, Metric::Modeling);
  for (int k = 0; k < 7; ++k) EXPECT_TRUE(std::isnan(series[k]));
  EXPECT_NEAR(series[7], 0.7, 1e-9);
  const auto track = error_series(log, Metric::Tracking);
  EXPECT_FALSE(std::isnan(track[0]));
}

TEST(Metrics, SummaryCarriesRunIdentity) {
  const RunSummary s = summarize(synthetic(0.002, 0.0, 0.0));
  EXPECT_EQ(s.variant, predictor::Variant::Ldn3);
  EXPECT_EQ(s.gain, control::GainCondition::High);
  EXPECT_EQ(s.seed, 4u);
  EXPECT_NEAR(s.track_stable, 2.0, 1e-12);
  EXPECT_NEAR(s.track(Window::Transient), 2.0, 1e-12);
  EXPECT_NEAR(s.nopred_model_stable, 0.0, 1e-12);
}

TEST(Metrics, IncompleteLogsAreRejected) {
  ExperimentLog log = synthetic(0.0, 0.0, 0.0);
  log.rows.pop_back();
  EXPECT_THROW(xy_rms(log, Window::Stable, Metric::Tracking), InvalidArgument);
  log = synthetic(0.0, 0.0, 0.0);
  log.failure = "diverged";
  EXPECT_THROW(summarize(log), InvalidArgument);
}

TEST(Metrics, CanonicalOrderIsGainVariantSeed) {
  RunSummary a, b;
  a.gain = control::GainCondition::Low;
  a.variant = predictor::Variant::Hist7;
  b.gain = control::GainCondition::Medium;
  b.variant = predictor::Variant::Ldn3;
  EXPECT_TRUE(summary_less(a, b));
  b.gain = a.gain;
  EXPECT_TRUE(summary_less(b, a));
  a = b;
  b.seed = 1;
  EXPECT_TRUE(summary_less(a, b));
  EXPECT_FALSE(summary_less(b, a));
}
