#include <random>

#include <benchmark/benchmark.h>

#include "softsp/config.hpp"
#include "softsp/experiment.hpp"
#include "softsp/krlst.hpp"
#include "softsp/ldn.hpp"
#include "softsp/plant.hpp"

using namespace softsp;

namespace {

Eigen::VectorXd random_vector(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = unif(rng);
  return v;
}

/// A model filled to its budget, as it is for most of a run.
krlst::KrlstModel saturated_model(int budget) {
  krlst::KernelParams params = default_config().kernel;
  params.budget = budget;
  krlst::KrlstModel model(params, 30, 6);
  std::mt19937_64 rng(1);
  while (model.size() < budget) model.train(random_vector(rng, 30), random_vector(rng, 6));
  return model;
}

void BM_KrlstTrain(benchmark::State& state) {
  krlst::KrlstModel model = saturated_model(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(2);
  for (auto _ : state) {
    model.train(random_vector(rng, 30), random_vector(rng, 6));
  }
}
BENCHMARK(BM_KrlstTrain)->Arg(20)->Arg(80)->Arg(200);

void BM_KrlstPredict(benchmark::State& state) {
  const krlst::KrlstModel model = saturated_model(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(3);
  const Eigen::VectorXd z = random_vector(rng, 30);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.predict(z));
  }
}
BENCHMARK(BM_KrlstPredict)->Arg(20)->Arg(80)->Arg(200);

void BM_LdnStep(benchmark::State& state) {
  ldn::LdnBank bank(ldn::build_ldn(static_cast<int>(state.range(0)), 0.14, 0.02), 6);
  std::mt19937_64 rng(4);
  const Eigen::VectorXd u = random_vector(rng, 6);
  for (auto _ : state) {
    bank.step(u);
    benchmark::DoNotOptimize(bank.states().data());
  }
}
BENCHMARK(BM_LdnStep)->Arg(3)->Arg(8);

void BM_PlantStep(benchmark::State& state) {
  plant::Plant p(plant::default_params(), Vec6::Zero(), 5);
  const Vec6 u = Vec6::Constant(0.01);
  for (auto _ : state) {
    benchmark::DoNotOptimize(p.step(u));
  }
}
BENCHMARK(BM_PlantStep);

void BM_Experiment(benchmark::State& state) {
  const ExperimentConfig cfg = default_config();
  const auto variant = static_cast<predictor::Variant>(state.range(0));
  const predictor::Normalizer norm =
      variant == predictor::Variant::NoPred
          ? predictor::Normalizer{}
          : calibrate_normalizer(cfg, variant, control::GainCondition::Medium);
  const predictor::Normalizer* ptr = variant == predictor::Variant::NoPred ? nullptr : &norm;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_experiment(cfg, variant, control::GainCondition::Medium, seed++, ptr));
  }
  state.SetLabel(std::string(predictor::label(variant)));
}
BENCHMARK(BM_Experiment)
    ->Arg(static_cast<int>(predictor::Variant::NoPred))
    ->Arg(static_cast<int>(predictor::Variant::Ldn3))
    ->Arg(static_cast<int>(predictor::Variant::Hist7))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
