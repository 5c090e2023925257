#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "softsp/krlst.hpp"
#include "softsp/ldn.hpp"
#include "softsp/types.hpp"

namespace softsp::predictor {

enum class Variant { Ldn3, Hist3, Hist7, NoPred };

std::string_view to_string(Variant v);
/// Display label: "LDN-3", "Hist-3", "Hist-7", "No-Pred".
std::string_view label(Variant v);
Variant parse_variant(std::string_view s);
/// Memory entries per actuator channel: 3, 3, 7 or 0.
int history_states(Variant v);
/// 12 + 6 n for the learning variants, 0 for No-Pred.
int feature_dim(Variant v);

/// Per-feature affine map z -> (z - offset) * scale.
struct Normalizer {
  Eigen::VectorXd offset;
  Eigen::VectorXd scale;

  bool ready() const { return offset.size() > 0 && offset.size() == scale.size(); }
  static Normalizer identity(int dim);
  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& z) const;
};

/// [x, v_hat, memory] passed through the normalizer.
Eigen::VectorXd build_features(const Vec6& x, const Vec6& v_hat,
                               const Eigen::Ref<const Eigen::VectorXd>& memory,
                               const Normalizer& normalizer);

/// Actuator history in the form a variant consumes: LDN states or the most
/// recent raw commands, newest first within each channel.
class InputMemory {
 public:
  InputMemory(Variant variant, double theta, double dt, int ldn_order = 3);

  void push(const Vec6& u);
  /// Channel-major memory: 6 blocks of history_states(variant) entries.
  Eigen::VectorXd flattened() const;
  Variant variant() const { return variant_; }

 private:
  Variant variant_;
  int depth_;
  std::optional<ldn::LdnBank> ldn_;
  std::deque<Vec6> raw_;  // front = most recent
};

struct PredictorConfig {
  int delay_steps = 7;
  double dt = 0.02;
  int ldn_order = 3;
  krlst::KernelParams kernel;
};

struct Inference {
  Vec6 y_hat = Vec6::Zero();
  Vec6 x_p = Vec6::Zero();
};

/// A training pair handed to KRLST, kept for audit when recording is on.
struct TrainingRecord {
  std::int64_t feature_tick;
  std::int64_t target_tick;
  Vec6 target;
};

/**
 * Learned approximation of the pose change over the input delay.
 *
 * Every control tick first calls tick_and_train with the command issued on the
 * previous tick, then infer. The features of tick t are buffered and trained
 * against x(t + d) - x(t) once that difference becomes observable, d ticks
 * later.
 */
class LearningPredictor {
 public:
  LearningPredictor(Variant variant, const PredictorConfig& config,
                    Normalizer normalizer);

  /// Pushes `u_last` into the input memory, buffers this tick's features
  /// and pose, and trains on the pair from `tick - delay_steps` if present.
  /// Ticks must arrive without gaps.
  void tick_and_train(const Vec6& x, const Vec6& v_hat, const Vec6& u_last,
                      std::int64_t tick);

  /// Prediction for the tick last passed to tick_and_train.
  Inference infer(const Vec6& x, const Vec6& v_hat);

  Variant variant() const { return variant_; }
  std::int64_t training_calls() const { return training_calls_; }
  const Vec6& last_prediction() const { return last_prediction_; }
  const krlst::KrlstModel* model() const {
    return model_ ? &*model_ : nullptr;
  }
  const Normalizer& normalizer() const { return normalizer_; }

  void record_training(bool on) { record_ = on; }
  const std::vector<TrainingRecord>& training_log() const { return training_log_; }

 private:
  struct Buffered {
    std::int64_t tick;
    Eigen::VectorXd features;
    Vec6 pose;
  };

  Variant variant_;
  PredictorConfig config_;
  Normalizer normalizer_;
  InputMemory memory_;
  std::optional<krlst::KrlstModel> model_;
  std::deque<Buffered> train_buffer_;
  std::optional<std::int64_t> last_tick_;
  Eigen::VectorXd current_features_;
  Vec6 last_prediction_ = Vec6::Zero();
  std::int64_t training_calls_ = 0;
  bool record_ = false;
  std::vector<TrainingRecord> training_log_;
};

/// Replays a recorded stream of poses, velocity estimates and issued commands
/// through an InputMemory and returns the raw (unnormalized) feature rows.
/// commands[t] is the command chosen on tick t.
Eigen::MatrixXd replay_features(Variant variant, const std::vector<Vec6>& poses,
                                const std::vector<Vec6>& v_hats,
                                const std::vector<Vec6>& commands, double theta,
                                double dt, int ldn_order = 3);

/// Z-score normalizer of the feature rows: offset = mean, scale = 1 / std
/// with std floored at 1e-9.
Normalizer fit_normalizer(const Eigen::MatrixXd& feature_rows);

}  // namespace softsp::predictor
