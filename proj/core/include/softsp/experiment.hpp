#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "softsp/config.hpp"
#include "softsp/controller.hpp"
#include "softsp/predictor.hpp"
#include "softsp/types.hpp"

namespace softsp {

struct LogRow {
  double time = 0.0;
  Vec6 r = Vec6::Zero();
  Vec6 r_dot = Vec6::Zero();
  Vec6 x = Vec6::Zero();       // measured
  Vec6 x_true = Vec6::Zero();
  Vec6 v_hat = Vec6::Zero();
  Vec6 y_hat = Vec6::Zero();
  Vec6 u = Vec6::Zero();       // command issued on this tick
  Vec6 v_smc = Vec6::Zero();
  Vec6 integral = Vec6::Zero();
  Vec6 proportional = Vec6::Zero();
};

struct ExperimentLog {
  std::string config_hash;
  std::uint64_t seed = 0;
  predictor::Variant variant = predictor::Variant::NoPred;
  control::GainCondition gain = control::GainCondition::Low;
  int delay_steps = 0;
  Protocol protocol;
  std::vector<LogRow> rows;
  /// Set when the run stopped early; rows then hold the completed ticks.
  std::optional<std::string> failure;

  bool complete() const {
    return !failure && static_cast<int>(rows.size()) == protocol.ticks();
  }
  /// Comment header lines, one column-name row, then one row per tick with
  /// every number at 17 significant digits.
  void write_csv(std::ostream& os) const;
};

/// Seeds of the independent random streams used by one run.
struct RunSeeds {
  std::uint64_t noise;
  std::uint64_t mismatch;
};
RunSeeds derive_seeds(std::uint64_t seed);

/// Fits the feature normalizer of `variant` on a baseline run (No-Pred at
/// `gain`, seeded with cfg.calibration_seed).
predictor::Normalizer calibrate_normalizer(const ExperimentConfig& cfg,
                                           predictor::Variant variant,
                                           control::GainCondition gain);

/// Feature normalizer fitted on the ticks of a recorded log.
predictor::Normalizer fit_normalizer(const ExperimentLog& log,
                                     predictor::Variant variant, int ldn_order);

/**
 * Closed loop at the control rate: plant -> observer -> predictor (train,
 * then infer) -> super-twisting law on x_p - r -> desired speed -> input
 * estimator -> plant. Learning variants without a normalizer run the
 * calibration first. A diverged plant ends the run with `failure` set.
 */
ExperimentLog run_experiment(const ExperimentConfig& cfg,
                             predictor::Variant variant,
                             control::GainCondition gain, std::uint64_t seed,
                             const predictor::Normalizer* normalizer = nullptr);

}  // namespace softsp
