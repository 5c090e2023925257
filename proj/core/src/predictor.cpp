#include "softsp/predictor.hpp"

#include <cmath>
#include <string>

namespace softsp::predictor {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Ldn3: return "ldn3";
    case Variant::Hist3: return "hist3";
    case Variant::Hist7: return "hist7";
    case Variant::NoPred: return "nopred";
  }
  return "?";
}

std::string_view label(Variant v) {
  switch (v) {
    case Variant::Ldn3: return "LDN-3";
    case Variant::Hist3: return "Hist-3";
    case Variant::Hist7: return "Hist-7";
    case Variant::NoPred: return "No-Pred";
  }
  return "?";
}

Variant parse_variant(std::string_view s) {
  if (s == "ldn3") return Variant::Ldn3;
  if (s == "hist3") return Variant::Hist3;
  if (s == "hist7") return Variant::Hist7;
  if (s == "nopred") return Variant::NoPred;
  throw InvalidArgument("unknown predictor variant '" + std::string(s) + "'");
}

int history_states(Variant v) {
  switch (v) {
    case Variant::Ldn3: return 3;
    case Variant::Hist3: return 3;
    case Variant::Hist7: return 7;
    case Variant::NoPred: return 0;
  }
  return 0;
}

int feature_dim(Variant v) {
  return v == Variant::NoPred ? 0 : 2 * kPoseDim + kInputDim * history_states(v);
}

Normalizer Normalizer::identity(int dim) {
  return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)};
}

Eigen::VectorXd Normalizer::apply(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (!ready()) {
    throw InvalidArgument("normalizer is not initialized");
  }
  if (z.size() != offset.size()) {
    throw InvalidArgument("normalizer: expected " + std::to_string(offset.size()) +
                          " features, got " + std::to_string(z.size()));
  }
  return ((z - offset).array() * scale.array()).matrix();
}

Eigen::VectorXd build_features(const Vec6& x, const Vec6& v_hat,
                               const Eigen::Ref<const Eigen::VectorXd>& memory,
                               const Normalizer& normalizer) {
  if (memory.size() % kInputDim != 0) {
    throw InvalidArgument("build_features: memory width " +
                          std::to_string(memory.size()) +
                          " is not a multiple of the channel count");
  }
  Eigen::VectorXd raw(2 * kPoseDim + memory.size());
  raw << x, v_hat, memory;
  return normalizer.apply(raw);
}

InputMemory::InputMemory(Variant variant, double theta, double dt, int ldn_order)
    : variant_(variant), depth_(history_states(variant)) {
  if (variant == Variant::Ldn3) {
    depth_ = ldn_order;
    ldn_.emplace(ldn::build_ldn(ldn_order, theta, dt), kInputDim);
  }
}

void InputMemory::push(const Vec6& u) {
  if (ldn_) {
    ldn_->step(u);
    return;
  }
  if (depth_ == 0) return;
  raw_.push_front(u);
  if (static_cast<int>(raw_.size()) > depth_) raw_.pop_back();
}

Eigen::VectorXd InputMemory::flattened() const {
  if (ldn_) return ldn_->flattened();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(kInputDim * depth_);
  for (int c = 0; c < kInputDim; ++c) {
    for (int k = 0; k < static_cast<int>(raw_.size()); ++k) {
      out(c * depth_ + k) = raw_[static_cast<std::size_t>(k)](c);
    }
  }
  return out;
}

LearningPredictor::LearningPredictor(Variant variant, const PredictorConfig& config,
                                     Normalizer normalizer)
    : variant_(variant),
      config_(config),
      normalizer_(std::move(normalizer)),
      memory_(variant, config.delay_steps * config.dt, config.dt, config.ldn_order) {
  if (config_.delay_steps < 0) {
    throw InvalidArgument("predictor: delay_steps must be >= 0");
  }
  if (variant_ == Variant::NoPred) return;
  const int dim = 2 * kPoseDim + static_cast<int>(memory_.flattened().size());
  if (!normalizer_.ready()) {
    throw InvalidArgument("predictor: normalizer not initialized");
  }
  if (normalizer_.offset.size() != dim) {
    throw InvalidArgument("predictor: normalizer width " +
                          std::to_string(normalizer_.offset.size()) +
                          " does not match feature dimension " + std::to_string(dim));
  }
  model_.emplace(config_.kernel, dim, kPoseDim);
}

void LearningPredictor::tick_and_train(const Vec6& x, const Vec6& v_hat,
                                       const Vec6& u_last, std::int64_t tick) {
  if (last_tick_ && tick != *last_tick_ + 1) {
    throw InvalidArgument("predictor: tick " + std::to_string(tick) +
                          " does not follow " + std::to_string(*last_tick_));
  }
  last_tick_ = tick;
  if (variant_ == Variant::NoPred) return;

  memory_.push(u_last);
  current_features_ = build_features(x, v_hat, memory_.flattened(), normalizer_);
  train_buffer_.push_back({tick, current_features_, x});

  const std::int64_t source = tick - config_.delay_steps;
  while (!train_buffer_.empty() && train_buffer_.front().tick < source) {
    train_buffer_.pop_front();
  }
  if (!train_buffer_.empty() && train_buffer_.front().tick == source) {
    const Buffered& pair = train_buffer_.front();
    const Vec6 target = x - pair.pose;
    model_->train(pair.features, target);
    ++training_calls_;
    if (record_) training_log_.push_back({pair.tick, tick, target});
    if (config_.delay_steps > 0) train_buffer_.pop_front();
  }
}

Inference LearningPredictor::infer(const Vec6& x, const Vec6& v_hat) {
  (void)v_hat;  // already folded into the features of this tick
  Inference out;
  if (variant_ == Variant::NoPred) {
    out.x_p = x;
    return out;
  }
  if (current_features_.size() == 0) {
    throw InvalidArgument("predictor: infer called before tick_and_train");
  }
  out.y_hat = model_->predict(current_features_).mean;
  out.x_p = x + out.y_hat;
  last_prediction_ = out.y_hat;
  return out;
}

Eigen::MatrixXd replay_features(Variant variant, const std::vector<Vec6>& poses,
                                const std::vector<Vec6>& v_hats,
                                const std::vector<Vec6>& commands, double theta,
                                double dt, int ldn_order) {
  if (variant == Variant::NoPred) {
    throw InvalidArgument("replay_features: No-Pred has no features");
  }
  const std::size_t n = poses.size();
  if (v_hats.size() != n || commands.size() != n) {
    throw InvalidArgument("replay_features: column lengths differ");
  }
  InputMemory memory(variant, theta, dt, ldn_order);
  const Eigen::Index width = 2 * kPoseDim + memory.flattened().size();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(n), width);
  const Normalizer id = Normalizer::identity(static_cast<int>(width));
  for (std::size_t t = 0; t < n; ++t) {
    memory.push(t == 0 ? Vec6::Zero() : commands[t - 1]);
    rows.row(static_cast<Eigen::Index>(t)) =
        build_features(poses[t], v_hats[t], memory.flattened(), id).transpose();
  }
  return rows;
}

Normalizer fit_normalizer(const Eigen::MatrixXd& feature_rows) {
  if (feature_rows.rows() == 0) {
    throw InvalidArgument("fit_normalizer: empty calibration data");
  }
  const double n = static_cast<double>(feature_rows.rows());
  Normalizer out;
  out.offset = feature_rows.colwise().mean().transpose();
  const Eigen::MatrixXd centered = feature_rows.rowwise() - out.offset.transpose();
  const Eigen::VectorXd std_dev =
      (centered.colwise().squaredNorm().transpose() / n).cwiseSqrt();
  out.scale = std_dev.cwiseMax(1e-9).cwiseInverse();
  return out;
}

}  // namespace softsp::predictor
