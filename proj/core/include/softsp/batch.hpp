#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "softsp/config.hpp"
#include "softsp/metrics.hpp"

namespace softsp::batch {

struct BatchSpec {
  std::vector<predictor::Variant> variants = {
      predictor::Variant::NoPred, predictor::Variant::Ldn3,
      predictor::Variant::Hist3, predictor::Variant::Hist7};
  std::vector<control::GainCondition> gains = {control::GainCondition::Low,
                                               control::GainCondition::Medium,
                                               control::GainCondition::High};
  int n_seeds = 10;
  std::uint64_t first_seed = 0;
  int workers = 1;
  /// When set, every run's CSV log is written here.
  std::filesystem::path log_dir;
};

struct Exclusion {
  predictor::Variant variant;
  control::GainCondition gain;
  std::uint64_t seed;
  std::string reason;
};

/// Per-tick XY error magnitudes (mm) averaged over the retained seeds of a cell.
struct SeriesAverage {
  predictor::Variant variant;
  control::GainCondition gain;
  int runs = 0;
  std::vector<double> tracking;
  std::vector<double> modeling;
};

struct BatchResult {
  std::size_t scheduled = 0;
  std::vector<metrics::RunSummary> retained;
  std::vector<Exclusion> excluded;
  std::vector<SeriesAverage> series;
};

/// Worker count from SOFTSP_WORKERS, else `fallback`.
int workers_from_env(int fallback = 1);

/**
 * Runs every (variant, gain, seed) cell, optionally on a worker pool. Runs are
 * independent and deterministic, and results are gathered in canonical order,
 * so the outcome does not depend on the worker count. A run is excluded when
 * the plant diverged or its stable tracking RMS exceeds five times the median
 * of its cell.
 */
BatchResult batch_run(const ExperimentConfig& cfg, const BatchSpec& spec);

}  // namespace softsp::batch
