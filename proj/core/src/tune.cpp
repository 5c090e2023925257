#include "softsp/tune.hpp"

#include <cmath>
#include <limits>

#include "softsp/metrics.hpp"

namespace softsp::tune {

double offline_score(const ExperimentLog& log, predictor::Variant variant,
                     const predictor::Normalizer& normalizer,
                     const krlst::KernelParams& params, int ldn_order) {
  std::vector<Vec6> poses, v_hats, commands;
  for (const LogRow& row : log.rows) {
    poses.push_back(row.x);
    v_hats.push_back(row.v_hat);
    commands.push_back(row.u);
  }
  const double dt = log.protocol.dt;
  const Eigen::MatrixXd raw = predictor::replay_features(
      variant, poses, v_hats, commands, log.delay_steps * dt, dt, ldn_order);

  krlst::KrlstModel model(params, static_cast<int>(raw.cols()), kPoseDim);
  const auto d = static_cast<std::size_t>(log.delay_steps);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t t = d; t < poses.size(); ++t) {
    const Eigen::VectorXd z = normalizer.apply(raw.row(static_cast<Eigen::Index>(t - d)).transpose());
    const Vec6 target = poses[t] - poses[t - d];
    const Eigen::VectorXd guess = model.predict(z).mean;
    sum += (target.head<2>() - guess.head<2>()).squaredNorm();
    ++count;
    model.train(z, target);
  }
  return count ? 1000.0 * std::sqrt(sum / static_cast<double>(count))
               : std::numeric_limits<double>::infinity();
}

namespace {

double online_score(const ExperimentConfig& cfg, const TuneOptions& options,
                    const predictor::Normalizer& normalizer) {
  double total = 0.0;
  for (int s = 0; s < options.online_seeds; ++s) {
    const ExperimentLog log =
        run_experiment(cfg, options.variant, options.gain,
                       options.first_online_seed + static_cast<std::uint64_t>(s), &normalizer);
    if (!log.complete()) return std::numeric_limits<double>::infinity();
    total += metrics::xy_rms(log, metrics::Window::Stable, metrics::Metric::Tracking);
  }
  return total / options.online_seeds;
}

}  // namespace

TuneResult tune(const ExperimentConfig& cfg, const TuneOptions& options) {
  if (options.variant == predictor::Variant::NoPred) {
    throw InvalidArgument("tune: No-Pred has nothing to tune");
  }
  if (options.online_seeds < 1) throw InvalidArgument("tune: need an online seed");

  const ExperimentLog calibration = run_experiment(cfg, predictor::Variant::NoPred,
                                                   options.gain, cfg.calibration_seed);
  if (!calibration.complete()) {
    throw NumericalError("tune: calibration run failed");
  }
  const predictor::Normalizer normalizer =
      fit_normalizer(calibration, options.variant, cfg.ldn_order);

  TuneResult result;
  result.offline_score = std::numeric_limits<double>::infinity();
  for (const double s2 : options.sigma2_grid) {
    for (const double nv : options.noise_var_grid) {
      for (const double lam : options.lambda_grid) {
        krlst::KernelParams p = cfg.kernel;
        p.sigma2 = s2;
        p.noise_var = nv;
        p.lambda = lam;
        double score = std::numeric_limits<double>::infinity();
        try {
          score = offline_score(calibration, options.variant, normalizer, p, cfg.ldn_order);
        } catch (const NumericalError&) {
        }
        result.trace.push_back({"offline", p, score});
        if (score < result.offline_score) {
          result.offline_score = score;
          result.best = p;
        }
      }
    }
  }

  ExperimentConfig trial = cfg;
  trial.kernel = result.best;
  result.online_score = online_score(trial, options, normalizer);
  result.trace.push_back({"online", result.best, result.online_score});

  using Member = double krlst::KernelParams::*;
  for (const Member member : {&krlst::KernelParams::sigma2, &krlst::KernelParams::noise_var,
                              &krlst::KernelParams::lambda}) {
    for (const double factor : options.refine_factors) {
      krlst::KernelParams p = result.best;
      if (member == &krlst::KernelParams::lambda) {
        // Rescale the forgetting rate 1 - lambda, not lambda itself.
        const double rate = 1.0 - p.lambda;
        if (rate == 0.0) continue;
        p.lambda = std::min(1.0, 1.0 - rate * factor);
      } else {
        p.*member *= factor;
      }
      trial.kernel = p;
      const double score = online_score(trial, options, normalizer);
      result.trace.push_back({"online", p, score});
      if (score < result.online_score) {
        result.online_score = score;
        result.best = p;
      }
    }
  }
  return result;
}

}  // namespace softsp::tune
