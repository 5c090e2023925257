#pragma once

#include <string>
#include <vector>

#include "softsp/config.hpp"
#include "softsp/experiment.hpp"

namespace softsp::tune {

struct TuneOptions {
  predictor::Variant variant = predictor::Variant::Ldn3;
  control::GainCondition gain = control::GainCondition::Medium;
  std::vector<double> sigma2_grid = {3.0, 10.0, 30.0, 100.0, 300.0};
  std::vector<double> noise_var_grid = {1e-3, 1e-2, 1e-1, 1.0};
  std::vector<double> lambda_grid = {0.99, 0.999, 0.9999, 1.0};
  /// Multiplicative steps tried around the stage-1 winner.
  std::vector<double> refine_factors = {0.5, 0.7, 0.8, 1.2, 1.3, 1.5};
  int online_seeds = 2;
  std::uint64_t first_online_seed = 500;
};

struct Candidate {
  std::string stage;
  krlst::KernelParams params;
  double score = 0.0;
};

struct TuneResult {
  krlst::KernelParams best;
  double offline_score = 0.0;
  double online_score = 0.0;
  std::vector<Candidate> trace;
};

/// Prequential XY error (mm RMS) of a predictor replayed on a recorded log:
/// each delayed pair is scored before it is trained on.
double offline_score(const ExperimentLog& log, predictor::Variant variant,
                     const predictor::Normalizer& normalizer,
                     const krlst::KernelParams& params, int ldn_order);

/**
 * Two-stage hyperparameter search. Stage 1 scores a coarse grid of
 * orders of magnitude offline on the calibration log. Stage 2 rescales one
 * parameter at a time around the winner and keeps changes that lower the
 * mean stable-phase tracking RMS of short closed-loop runs.
 */
TuneResult tune(const ExperimentConfig& cfg, const TuneOptions& options);

}  // namespace softsp::tune
