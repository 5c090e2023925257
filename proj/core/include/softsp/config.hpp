#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "softsp/controller.hpp"
#include "softsp/krlst.hpp"
#include "softsp/plant.hpp"
#include "softsp/protocol.hpp"

namespace softsp {

/// Everything that defines an experiment except the variant, gain condition
/// and seed, which are chosen per run.
struct ExperimentConfig {
  Protocol protocol;
  plant::PlantParams plant = plant::default_params();
  /// Relative multiplicative error of the controller's model copy.
  double mismatch = 0.15;
  /// Low-gain set; Medium and High scale k1.
  control::GainSet low_gains;
  double u_max = 4.0;
  int ldn_order = 3;
  krlst::KernelParams kernel;
  /// Seed of the baseline run the feature normalizer is fitted on.
  std::uint64_t calibration_seed = 1000;

  void validate() const;
};

ExperimentConfig default_config();

/// INI-style text: [section] headers and `key = value` lines; vectors and
/// matrices are whitespace-separated lists (matrices row-major). Missing keys
/// keep their default values; unknown keys are an error.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Stable serialization listing every key in a fixed order at full precision.
std::string canonical_text(const ExperimentConfig& cfg);
/// FNV-1a 64 of canonical_text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace softsp
