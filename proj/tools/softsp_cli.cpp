#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "softsp/batch.hpp"
#include "softsp/config.hpp"
#include "softsp/experiment.hpp"
#include "softsp/metrics.hpp"
#include "softsp/report.hpp"
#include "softsp/tune.hpp"

namespace fs = std::filesystem;
using namespace softsp;

namespace {

ExperimentConfig config_from(const std::string& path) {
  return path.empty() ? default_config() : load_config(path);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_run(const std::string& config_path, const std::string& variant_name,
            const std::string& gain_name, std::uint64_t seed, const fs::path& out_dir) {
  const ExperimentConfig cfg = config_from(config_path);
  const auto variant = predictor::parse_variant(variant_name);
  const auto gain = control::parse_gain(gain_name);
  const ExperimentLog log = run_experiment(cfg, variant, gain, seed);
  fs::create_directories(out_dir);
  const fs::path file = out_dir / fmt::format("run_{}_{}_{}.csv", predictor::to_string(variant),
                                              control::to_string(gain), seed);
  auto out = open_out(file);
  log.write_csv(out);
  if (!log.complete()) {
    std::cerr << fmt::format("run failed after {} ticks: {}\n", log.rows.size(),
                             log.failure.value_or("incomplete"));
    return 2;
  }
  const metrics::RunSummary s = metrics::summarize(log);
  std::cout << fmt::format(
      "{} {} seed {}: tracking transient {:.3f} mm, stable {:.3f} mm; modeling stable {:.3f} mm "
      "(no-pred {:.3f} mm)\nlog: {}\n",
      predictor::label(variant), control::to_string(gain), seed, s.track_transient,
      s.track_stable, s.model_stable, s.nopred_model_stable, file.string());
  return 0;
}

int cmd_batch(const std::string& config_path, batch::BatchSpec spec,
              const std::vector<std::string>& variants, const std::vector<std::string>& gains,
              const fs::path& out_dir, bool keep_logs) {
  const ExperimentConfig cfg = config_from(config_path);
  if (!variants.empty()) {
    spec.variants.clear();
    for (const auto& v : variants) spec.variants.push_back(predictor::parse_variant(v));
  }
  if (!gains.empty()) {
    spec.gains.clear();
    for (const auto& g : gains) spec.gains.push_back(control::parse_gain(g));
  }
  spec.workers = batch::workers_from_env(1);
  fs::create_directories(out_dir);
  if (keep_logs) spec.log_dir = out_dir / "logs";

  const auto start = std::chrono::steady_clock::now();
  const batch::BatchResult result = batch::batch_run(cfg, spec);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  {
    auto out = open_out(out_dir / "config.cfg");
    out << canonical_text(cfg);
  }
  {
    auto out = open_out(out_dir / "summary.csv");
    report::write_summary_csv(out, result.retained);
  }
  {
    auto out = open_out(out_dir / "exclusions.csv");
    report::write_exclusions_csv(out, result.excluded);
  }
  {
    auto out = open_out(out_dir / "plot.csv");
    report::write_plot_csv(out, result.series, cfg.protocol.dt);
  }
  const std::string text = report::emit_report(result.retained, result.excluded);
  {
    auto out = open_out(out_dir / "report.txt");
    out << text;
  }
  std::cout << text;
  std::cerr << fmt::format("{} runs on {} worker(s) in {:.1f} s\n", result.scheduled,
                           spec.workers, seconds);
  return 0;
}

int cmd_tune(const std::string& config_path, const fs::path& out_path,
             const std::string& variant_name, const std::string& gain_name, int online_seeds) {
  ExperimentConfig cfg = config_from(config_path);
  tune::TuneOptions options;
  options.variant = predictor::parse_variant(variant_name);
  options.gain = control::parse_gain(gain_name);
  options.online_seeds = online_seeds;
  const tune::TuneResult result = tune::tune(cfg, options);
  for (const tune::Candidate& c : result.trace) {
    std::cout << fmt::format("{:<8} sigma2 {:<10.4g} noise_var {:<10.4g} lambda {:<8.6g} {:.4f} mm\n",
                             c.stage, c.params.sigma2, c.params.noise_var, c.params.lambda,
                             c.score);
  }
  cfg.kernel = result.best;
  auto out = open_out(out_path);
  out << canonical_text(cfg);
  std::cout << fmt::format("best: sigma2 {} noise_var {} lambda {} (offline {:.4f} mm, online {:.4f} mm)\n",
                           result.best.sigma2, result.best.noise_var, result.best.lambda,
                           result.offline_score, result.online_score);
  return 0;
}

int cmd_report(const fs::path& in_dir) {
  std::ifstream summary(in_dir / "summary.csv");
  if (!summary) throw std::runtime_error("missing " + (in_dir / "summary.csv").string());
  const auto rows = report::read_summary_csv(summary);
  std::vector<batch::Exclusion> excluded;
  if (fs::exists(in_dir / "exclusions.csv")) {
    std::ifstream ex(in_dir / "exclusions.csv");
    excluded = report::read_exclusions_csv(ex);
  }
  const std::string text = report::emit_report(rows, excluded);
  auto out = open_out(in_dir / "report.txt");
  out << text;
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delayed soft-arm tracking with a learned Smith predictor"};
  app.require_subcommand(1);

  std::string config_path;
  std::string variant = "ldn3";
  std::string gain = "med";
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  auto* run = app.add_subcommand("run", "Simulate one closed-loop experiment");
  run->add_option("--config", config_path, "Config file (built-in defaults if omitted)")
      ->check(CLI::ExistingFile);
  run->add_option("--variant", variant, "ldn3 | hist3 | hist7 | nopred")
      ->check(CLI::IsMember({"ldn3", "hist3", "hist7", "nopred"}));
  run->add_option("--gain", gain, "low | med | high")
      ->check(CLI::IsMember({"low", "med", "medium", "high"}));
  run->add_option("--seed", seed, "Run seed");
  run->add_option("--out", out_dir, "Output directory");

  batch::BatchSpec spec;
  std::vector<std::string> variants, gains;
  bool keep_logs = false;
  auto* bat = app.add_subcommand("batch", "Run the variant x gain x seed grid and report");
  bat->add_option("--config", config_path, "Config file")->check(CLI::ExistingFile);
  bat->add_option("--seeds", spec.n_seeds, "Seeds per cell")->check(CLI::Range(2, 100000));
  bat->add_option("--first-seed", spec.first_seed, "First seed");
  bat->add_option("--variants", variants, "Subset of variants")->delimiter(',');
  bat->add_option("--gains", gains, "Subset of gain conditions")->delimiter(',');
  bat->add_option("--out", out_dir, "Output directory");
  bat->add_flag("--logs", keep_logs, "Also write every per-run CSV log under OUT/logs");

  std::string tune_out = "tuned.cfg";
  int online_seeds = 2;
  auto* tun = app.add_subcommand("tune", "Search kernel hyperparameters");
  tun->add_option("--config", config_path, "Starting config")->check(CLI::ExistingFile);
  tun->add_option("--out", tune_out, "Where to write the tuned config");
  tun->add_option("--variant", variant, "Learning variant to tune for")
      ->check(CLI::IsMember({"ldn3", "hist3", "hist7"}));
  tun->add_option("--gain", gain, "Gain condition of the tuning runs")
      ->check(CLI::IsMember({"low", "med", "medium", "high"}));
  tun->add_option("--online-seeds", online_seeds, "Closed-loop runs per candidate")
      ->check(CLI::PositiveNumber);

  std::string in_dir;
  auto* rep = app.add_subcommand("report", "Regenerate report.txt from a batch directory");
  rep->add_option("--in", in_dir, "Batch output directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config_path, variant, gain, seed, out_dir);
    if (*bat) return cmd_batch(config_path, spec, variants, gains, out_dir, keep_logs);
    if (*tun) return cmd_tune(config_path, tune_out, variant, gain, online_seeds);
    if (*rep) return cmd_report(in_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
