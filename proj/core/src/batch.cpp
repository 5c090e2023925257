#include "softsp/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <thread>

#include <fmt/format.h>

#include "softsp/experiment.hpp"

namespace softsp::batch {

namespace {

struct Job {
  predictor::Variant variant;
  control::GainCondition gain;
  std::uint64_t seed;
};

struct JobOutcome {
  std::optional<metrics::RunSummary> summary;
  std::string failure;
  std::vector<double> tracking;
  std::vector<double> modeling;
};

using CellKey = std::pair<int, int>;  // (gain, variant)

CellKey key_of(predictor::Variant v, control::GainCondition g) {
  return {static_cast<int>(g), static_cast<int>(v)};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

int workers_from_env(int fallback) {
  if (const char* env = std::getenv("SOFTSP_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return fallback;
}

BatchResult batch_run(const ExperimentConfig& cfg, const BatchSpec& spec) {
  cfg.validate();
  if (spec.n_seeds < 2) {
    throw InvalidArgument("batch_run: need at least two seeds per cell");
  }

  // Gain-major, then variant, then seed: the canonical order.
  std::vector<control::GainCondition> gains = spec.gains;
  std::vector<predictor::Variant> variants = spec.variants;
  std::sort(gains.begin(), gains.end());
  std::sort(variants.begin(), variants.end());
  std::vector<Job> jobs;
  for (auto g : gains) {
    for (auto v : variants) {
      for (int s = 0; s < spec.n_seeds; ++s) {
        jobs.push_back({v, g, spec.first_seed + static_cast<std::uint64_t>(s)});
      }
    }
  }

  // One calibration run per gain serves every learning variant.
  std::map<CellKey, predictor::Normalizer> normalizers;
  for (auto g : gains) {
    std::optional<ExperimentLog> calibration;
    for (auto v : variants) {
      if (v == predictor::Variant::NoPred) continue;
      if (!calibration) {
        calibration = run_experiment(cfg, predictor::Variant::NoPred, g,
                                     cfg.calibration_seed);
        if (calibration->failure) {
          throw NumericalError("calibration run failed: " + *calibration->failure);
        }
      }
      normalizers[key_of(v, g)] = fit_normalizer(*calibration, v, cfg.ldn_order);
    }
  }

  if (!spec.log_dir.empty()) std::filesystem::create_directories(spec.log_dir);

  std::vector<JobOutcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      const auto it = normalizers.find(key_of(job.variant, job.gain));
      const predictor::Normalizer* norm = it == normalizers.end() ? nullptr : &it->second;
      const ExperimentLog log = run_experiment(cfg, job.variant, job.gain, job.seed, norm);
      if (!spec.log_dir.empty()) {
        std::ofstream out(spec.log_dir / fmt::format("run_{}_{}_{}.csv",
                                                     predictor::to_string(job.variant),
                                                     control::to_string(job.gain), job.seed));
        log.write_csv(out);
      }
      JobOutcome& o = outcomes[i];
      if (!log.complete()) {
        o.failure = log.failure ? *log.failure : "incomplete log";
        continue;
      }
      o.summary = metrics::summarize(log);
      o.tracking = metrics::error_series(log, metrics::Metric::Tracking);
      o.modeling = metrics::error_series(
          log, job.variant == predictor::Variant::NoPred ? metrics::Metric::ModelingNoPred
                                                         : metrics::Metric::Modeling);
    }
  };
  const int n_workers = std::max(1, std::min<int>(spec.workers, static_cast<int>(jobs.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::map<CellKey, std::vector<double>> cell_tracking;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (outcomes[i].summary) {
      cell_tracking[key_of(jobs[i].variant, jobs[i].gain)].push_back(
          outcomes[i].summary->track_stable);
    }
  }
  std::map<CellKey, double> cell_median;
  for (const auto& [k, values] : cell_tracking) cell_median[k] = median(values);

  BatchResult result;
  result.scheduled = jobs.size();
  std::map<CellKey, std::size_t> series_index;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& job = jobs[i];
    JobOutcome& o = outcomes[i];
    if (!o.summary) {
      result.excluded.push_back({job.variant, job.gain, job.seed, "diverged: " + o.failure});
      continue;
    }
    const double limit = 5.0 * cell_median[key_of(job.variant, job.gain)];
    if (o.summary->track_stable > limit) {
      result.excluded.push_back(
          {job.variant, job.gain, job.seed,
           fmt::format("stable tracking RMS {:.3f} mm exceeds 5x cell median",
                       o.summary->track_stable)});
      continue;
    }
    result.retained.push_back(*o.summary);

    const CellKey key = key_of(job.variant, job.gain);
    auto [it, inserted] = series_index.try_emplace(key, result.series.size());
    if (inserted) {
      result.series.push_back({job.variant, job.gain, 0,
                               std::vector<double>(o.tracking.size(), 0.0),
                               std::vector<double>(o.modeling.size(), 0.0)});
    }
    SeriesAverage& avg = result.series[it->second];
    ++avg.runs;
    for (std::size_t k = 0; k < o.tracking.size(); ++k) {
      avg.tracking[k] += (o.tracking[k] - avg.tracking[k]) / avg.runs;
      avg.modeling[k] += (o.modeling[k] - avg.modeling[k]) / avg.runs;
    }
  }
  return result;
}

}  // namespace softsp::batch
