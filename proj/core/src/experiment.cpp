#include "softsp/experiment.hpp"

#include <ostream>

#include <fmt/format.h>

#include "softsp/plant.hpp"
#include "softsp/protocol.hpp"

namespace softsp {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void write_vec(std::string& line, const Vec6& v) {
  for (int i = 0; i < 6; ++i) {
    line += fmt::format(",{:.17g}", v(i));
  }
}

}  // namespace

RunSeeds derive_seeds(std::uint64_t seed) {
  return {splitmix64(seed ^ 0x6e6f697365ULL), splitmix64(seed ^ 0x6d69736d61ULL)};
}

void ExperimentLog::write_csv(std::ostream& os) const {
  os << "# config_hash=" << config_hash << '\n';
  os << "# seed=" << seed << '\n';
  os << "# variant=" << predictor::to_string(variant) << '\n';
  os << "# gain=" << control::to_string(gain) << '\n';
  os << "# status=" << (failure ? "failed: " + *failure : std::string("ok")) << '\n';

  std::string header = "time";
  for (const char* group : {"r", "rdot", "x", "xtrue", "vhat", "yhat", "u",
                            "vsmc", "integral", "proportional"}) {
    for (int i = 0; i < 6; ++i) header += fmt::format(",{}{}", group, i);
  }
  os << header << '\n';

  std::string line;
  for (const LogRow& row : rows) {
    line = fmt::format("{:.17g}", row.time);
    write_vec(line, row.r);
    write_vec(line, row.r_dot);
    write_vec(line, row.x);
    write_vec(line, row.x_true);
    write_vec(line, row.v_hat);
    write_vec(line, row.y_hat);
    write_vec(line, row.u);
    write_vec(line, row.v_smc);
    write_vec(line, row.integral);
    write_vec(line, row.proportional);
    line += '\n';
    os << line;
  }
}

predictor::Normalizer fit_normalizer(const ExperimentLog& log,
                                     predictor::Variant variant, int ldn_order) {
  if (log.rows.empty()) {
    throw InvalidArgument("fit_normalizer: empty calibration log");
  }
  std::vector<Vec6> poses, v_hats, commands;
  poses.reserve(log.rows.size());
  v_hats.reserve(log.rows.size());
  commands.reserve(log.rows.size());
  for (const LogRow& row : log.rows) {
    poses.push_back(row.x);
    v_hats.push_back(row.v_hat);
    commands.push_back(row.u);
  }
  const double dt = log.protocol.dt;
  const Eigen::MatrixXd features = predictor::replay_features(
      variant, poses, v_hats, commands, log.delay_steps * dt, dt, ldn_order);
  return predictor::fit_normalizer(features);
}

predictor::Normalizer calibrate_normalizer(const ExperimentConfig& cfg,
                                           predictor::Variant variant,
                                           control::GainCondition gain) {
  const ExperimentLog log = run_experiment(cfg, predictor::Variant::NoPred, gain,
                                           cfg.calibration_seed);
  if (log.failure) {
    throw NumericalError("calibration run failed: " + *log.failure);
  }
  return fit_normalizer(log, variant, cfg.ldn_order);
}

ExperimentLog run_experiment(const ExperimentConfig& cfg,
                             predictor::Variant variant,
                             control::GainCondition gain, std::uint64_t seed,
                             const predictor::Normalizer* normalizer) {
  cfg.validate();
  const Protocol& proto = cfg.protocol;
  const double dt = proto.dt;
  const int ticks = proto.ticks();

  predictor::Normalizer norm;
  if (variant != predictor::Variant::NoPred) {
    norm = normalizer ? *normalizer : calibrate_normalizer(cfg, variant, gain);
  }

  ExperimentLog log;
  log.config_hash = config_hash(cfg);
  log.seed = seed;
  log.variant = variant;
  log.gain = gain;
  log.delay_steps = cfg.plant.delay_steps;
  log.protocol = proto;
  log.rows.reserve(static_cast<std::size_t>(ticks));

  const RunSeeds seeds = derive_seeds(seed);
  const plant::PlantParams model =
      plant::perturbed(cfg.plant, cfg.mismatch, seeds.mismatch);
  const control::GainSet gains = control::for_condition(cfg.low_gains, gain);

  const Vec6 x0 = reference(0.0, proto).r;
  plant::Plant truth(cfg.plant, x0, seeds.noise);

  predictor::PredictorConfig pcfg;
  pcfg.delay_steps = cfg.plant.delay_steps;
  pcfg.dt = dt;
  pcfg.ldn_order = cfg.ldn_order;
  pcfg.kernel = cfg.kernel;
  predictor::LearningPredictor pred(variant, pcfg, std::move(norm));

  Vec6 measured = truth.measure();
  control::ControllerState ctrl = control::initial_state(measured);
  Vec6 u_last = Vec6::Zero();

  const auto run_tick = [&](int k) {
    const double t = k * dt;
    const ReferenceSample ref = reference(t, proto);

    control::observer_step(ctrl, measured, gains, dt);
    pred.tick_and_train(measured, ctrl.v_hat, u_last, k);
    const predictor::Inference inf = pred.infer(measured, ctrl.v_hat);

    const Vec6 e = inf.x_p - ref.r;
    const Vec6 v_smc = control::stsmc_step(ctrl, e, gains, dt);
    const Vec6 v =
        control::desired_speed(ref.r_dot, plant::drift(measured, model), v_smc);
    control::input_estimator_step(ctrl, measured, v, gains, model, cfg.u_max, dt);

    LogRow row;
    row.time = t;
    row.r = ref.r;
    row.r_dot = ref.r_dot;
    row.x = measured;
    row.x_true = truth.state();
    row.v_hat = ctrl.v_hat;
    row.y_hat = inf.y_hat;
    row.u = ctrl.u_est;
    row.v_smc = v_smc;
    row.integral = ctrl.integral_term;
    row.proportional = ctrl.proportional_term;
    log.rows.push_back(row);

    u_last = ctrl.u_est;
    measured = truth.step(u_last);
  };

  for (int k = 0; k < ticks; ++k) {
    try {
      run_tick(k);
    } catch (const SimulationDiverged& e) {
      log.failure = fmt::format("tick {}: {}", k, e.what());
      break;
    } catch (const NumericalError& e) {
      log.failure = fmt::format("tick {}: {}", k, e.what());
      break;
    }
  }
  return log;
}

}  // namespace softsp
