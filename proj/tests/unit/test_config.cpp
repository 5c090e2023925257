#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "softsp/config.hpp"

using namespace softsp;

TEST(Config, DefaultsValidate) {
  const ExperimentConfig cfg = default_config();
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.ldn_order, 3);
  EXPECT_EQ(cfg.plant.delay_steps, 7);
  EXPECT_DOUBLE_EQ(cfg.plant.dt, cfg.protocol.dt);
  EXPECT_EQ(cfg.kernel.budget, 80);
}

TEST(Config, CanonicalTextRoundTrips) {
  ExperimentConfig cfg = default_config();
  cfg.kernel.sigma2 = 12.345678901234567;
  cfg.plant.a_lin(2, 4) = -1.0 / 3.0;
  cfg.low_gains.k1(5, 5) = 0.7;
  cfg.calibration_seed = 99;
  const std::string text = canonical_text(cfg);
  const ExperimentConfig back = parse_config(text);
  EXPECT_EQ(canonical_text(back), text);
  EXPECT_EQ(back.plant.a_lin, cfg.plant.a_lin);
  EXPECT_EQ(back.kernel.sigma2, cfg.kernel.sigma2);
  EXPECT_EQ(back.calibration_seed, 99u);
}

TEST(Config, MissingKeysKeepDefaults) {
  const ExperimentConfig cfg = parse_config("[predictor]\nlambda = 0.99\n");
  EXPECT_EQ(cfg.kernel.lambda, 0.99);
  ExperimentConfig expected = default_config();
  expected.kernel.lambda = 0.99;
  EXPECT_EQ(canonical_text(cfg), canonical_text(expected));
}

TEST(Config, CommentsAreIgnored) {
  const ExperimentConfig cfg = parse_config("; tuned\n[controller]\n# comment\nu_max = 3\n");
  EXPECT_EQ(cfg.u_max, 3.0);
}

TEST(Config, UnknownAndMalformedKeysAreErrors) {
  EXPECT_THROW(parse_config("[predictor]\nlamda = 0.99\n"), InvalidArgument);
  EXPECT_THROW(parse_config("[nowhere]\nx = 1\n"), InvalidArgument);
  EXPECT_THROW(parse_config("[plant]\nfa_coeff = 1 2 3\n"), InvalidArgument);
  EXPECT_THROW(parse_config("[plant]\ndelay_steps = 2.5\n"), InvalidArgument);
  EXPECT_THROW(parse_config("[controller]\nk2 = 1 1 1 one 1 1\n"), InvalidArgument);
  EXPECT_THROW(parse_config("[predictor]\nlambda = 1.5\n"), InvalidArgument);
  EXPECT_THROW(parse_config("[plant]\nmismatch = 1\n"), InvalidArgument);
  EXPECT_THROW(load_config("/nonexistent/softsp.cfg"), InvalidArgument);
}

TEST(Config, ShippedDefaultFileMatchesBuiltInDefaults) {
  const ExperimentConfig file =
      load_config(std::filesystem::path(SOFTSP_SOURCE_DIR) / "configs" / "default.cfg");
  EXPECT_EQ(canonical_text(file), canonical_text(default_config()));
}

TEST(Config, HashIsStableAndSensitive) {
  const ExperimentConfig a = default_config();
  ExperimentConfig b = default_config();
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.kernel.noise_var *= 1.0 + 1e-12;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(parse_config(canonical_text(a))), config_hash(a));
}
