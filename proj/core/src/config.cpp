#include "softsp/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace softsp {

namespace {

namespace pt = boost::property_tree;

std::vector<double> parse_list(const std::string& key, const std::string& text,
                               std::size_t expected) {
  std::istringstream in(text);
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) {
      throw InvalidArgument("config: '" + key + "' has a non-numeric entry '" +
                            token + "'");
    }
    values.push_back(v);
  }
  if (values.size() != expected) {
    throw InvalidArgument(fmt::format("config: '{}' expects {} values, got {}",
                                      key, expected, values.size()));
  }
  return values;
}

std::string format_list(const double* data, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += fmt::format("{:.17g}", data[i]);
  }
  return out;
}

std::string row_major(const Mat6& m) {
  const Eigen::Matrix<double, 6, 6, Eigen::RowMajor> r = m;
  return format_list(r.data(), 36);
}

Mat6 matrix_from(const std::vector<double>& v) {
  Mat6 m;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) m(i, j) = v[static_cast<std::size_t>(6 * i + j)];
  }
  return m;
}

Vec6 vec_from(const std::vector<double>& v) {
  return Eigen::Map<const Vec6>(v.data());
}

/// One configuration entry: how to print it and how to read it back.
struct Field {
  std::string section;
  std::string key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

template <typename Get>
Field number(std::string section, std::string key, Get ref) {
  const std::string full = section + "." + key;
  return {std::move(section), std::move(key),
          [ref](const ExperimentConfig& c) {
            return fmt::format("{:.17g}", static_cast<double>(ref(c)));
          },
          [ref, full](ExperimentConfig& c, const std::string& s) {
            using T = std::remove_reference_t<decltype(ref(c))>;
            const double v = parse_list(full, s, 1)[0];
            if constexpr (std::is_integral_v<T>) {
              if (v != static_cast<double>(static_cast<long long>(v))) {
                throw InvalidArgument("config: '" + full + "' must be an integer");
              }
            }
            ref(c) = static_cast<T>(v);
          }};
}

template <typename Get>
Field vec6(std::string section, std::string key, Get ref) {
  const std::string full = section + "." + key;
  return {std::move(section), std::move(key),
          [ref](const ExperimentConfig& c) {
            const Vec6 v = ref(c);
            return format_list(v.data(), 6);
          },
          [ref, full](ExperimentConfig& c, const std::string& s) {
            ref(c) = vec_from(parse_list(full, s, 6));
          }};
}

template <typename Get>
Field mat6(std::string section, std::string key, Get ref) {
  const std::string full = section + "." + key;
  return {std::move(section), std::move(key),
          [ref](const ExperimentConfig& c) {
            return row_major(ref(c));
          },
          [ref, full](ExperimentConfig& c, const std::string& s) {
            ref(c) = matrix_from(parse_list(full, s, 36));
          }};
}

/// Diagonal gain matrices are stored by their diagonal.
template <typename Get>
Field diag6(std::string section, std::string key, Get ref) {
  const std::string full = section + "." + key;
  return {std::move(section), std::move(key),
          [ref](const ExperimentConfig& c) {
            const Vec6 d = ref(c).diagonal();
            return format_list(d.data(), 6);
          },
          [ref, full](ExperimentConfig& c, const std::string& s) {
            ref(c) = vec_from(parse_list(full, s, 6)).asDiagonal();
          }};
}

const std::vector<Field>& fields() {
  using C = ExperimentConfig;
  static const std::vector<Field> table = {
      number("protocol", "duration", [](auto& c) -> auto& { return c.protocol.duration; }),
      number("protocol", "buildup", [](auto& c) -> auto& { return c.protocol.buildup; }),
      number("protocol", "omega", [](auto& c) -> auto& { return c.protocol.omega; }),
      number("protocol", "radius", [](auto& c) -> auto& { return c.protocol.radius; }),
      number("protocol", "transient_end", [](auto& c) -> auto& { return c.protocol.transient_end; }),
      number("protocol", "dt", [](auto& c) -> auto& { return c.protocol.dt; }),
      number("protocol", "center_x", [](auto& c) -> auto& { return c.protocol.center_x; }),
      number("protocol", "center_y", [](auto& c) -> auto& { return c.protocol.center_y; }),
      number("protocol", "z_ref", [](auto& c) -> auto& { return c.protocol.z_ref; }),
      {"protocol", "orientation_ref",
       [](const C& c) { return format_list(c.protocol.orientation_ref.data(), 3); },
       [](C& c, const std::string& s) {
         const auto v = parse_list("protocol.orientation_ref", s, 3);
         c.protocol.orientation_ref = Eigen::Vector3d(v[0], v[1], v[2]);
       }},

      mat6("plant", "a_lin", [](auto& c) -> auto& { return c.plant.a_lin; }),
      vec6("plant", "fa_coeff", [](auto& c) -> auto& { return c.plant.fa_coeff; }),
      mat6("plant", "b1", [](auto& c) -> auto& { return c.plant.b1; }),
      number("plant", "b2_gain", [](auto& c) -> auto& { return c.plant.b2_gain; }),
      mat6("plant", "coupling", [](auto& c) -> auto& { return c.plant.coupling; }),
      vec6("plant", "g_sat", [](auto& c) -> auto& { return c.plant.g_sat; }),
      number("plant", "delay_steps", [](auto& c) -> auto& { return c.plant.delay_steps; }),
      number("plant", "noise_pos", [](auto& c) -> auto& { return c.plant.noise_pos; }),
      number("plant", "noise_rot", [](auto& c) -> auto& { return c.plant.noise_rot; }),
      number("plant", "workspace_bound", [](auto& c) -> auto& { return c.plant.workspace_bound; }),
      number("plant", "mismatch", [](auto& c) -> auto& { return c.mismatch; }),

      diag6("controller", "k1_low", [](auto& c) -> auto& { return c.low_gains.k1; }),
      diag6("controller", "k2", [](auto& c) -> auto& { return c.low_gains.k2; }),
      diag6("controller", "gamma", [](auto& c) -> auto& { return c.low_gains.gamma; }),
      diag6("controller", "l_obs", [](auto& c) -> auto& { return c.low_gains.l_obs; }),
      number("controller", "u_max", [](auto& c) -> auto& { return c.u_max; }),

      number("predictor", "ldn_order", [](auto& c) -> auto& { return c.ldn_order; }),
      number("predictor", "sigma2", [](auto& c) -> auto& { return c.kernel.sigma2; }),
      number("predictor", "noise_var", [](auto& c) -> auto& { return c.kernel.noise_var; }),
      number("predictor", "lambda", [](auto& c) -> auto& { return c.kernel.lambda; }),
      number("predictor", "budget", [](auto& c) -> auto& { return c.kernel.budget; }),
      number("predictor", "jitter", [](auto& c) -> auto& { return c.kernel.jitter; }),
      number("predictor", "novelty_factor", [](auto& c) -> auto& { return c.kernel.novelty_factor; }),
      number("predictor", "calibration_seed",
             [](auto& c) -> auto& { return c.calibration_seed; }),
  };
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  protocol.validate();
  plant.validate();
  low_gains.validate();
  kernel.validate();
  if (std::abs(plant.dt - protocol.dt) > 1e-15) {
    throw InvalidArgument("config: plant and protocol dt differ");
  }
  if (!(mismatch >= 0.0 && mismatch < 1.0)) {
    throw InvalidArgument("config: mismatch must lie in [0, 1)");
  }
  if (!(u_max > 0.0)) throw InvalidArgument("config: u_max must be > 0");
  if (ldn_order < 1) throw InvalidArgument("config: ldn_order must be >= 1");
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  // Calibrated by closed-loop sweeps: Low is delay-tolerant, while doubling
  // and tripling k1 push the unpredicted loop into a delay-driven oscillation.
  cfg.low_gains.k1 = Vec6::Constant(1.05).asDiagonal();
  cfg.low_gains.k2 = Vec6::Constant(0.002).asDiagonal();
  cfg.low_gains.gamma = Vec6::Constant(10.0).asDiagonal();
  cfg.low_gains.l_obs = Vec6::Constant(15.0).asDiagonal();
  cfg.low_gains.condition = control::GainCondition::Low;
  cfg.plant.dt = cfg.protocol.dt;
  cfg.kernel.sigma2 = 100.0;
  cfg.kernel.noise_var = 0.05;
  cfg.kernel.lambda = 0.9999;
  return cfg;
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }

  std::map<std::string, const Field*> by_path;
  for (const Field& f : fields()) by_path[f.section + "." + f.key] = &f;

  ExperimentConfig cfg = default_config();
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw InvalidArgument("config: key '" + section + "' outside a section");
    }
    for (const auto& [key, value] : body) {
      const std::string path = section + "." + key;
      const auto it = by_path.find(path);
      if (it == by_path.end()) {
        throw InvalidArgument("config: unknown key '" + path + "'");
      }
      it->second->set(cfg, value.get_value<std::string>());
    }
  }
  cfg.plant.dt = cfg.protocol.dt;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidArgument("config: cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string canonical_text(const ExperimentConfig& cfg) {
  std::string out;
  std::string current;
  for (const Field& f : fields()) {
    if (f.section != current) {
      if (!current.empty()) out += '\n';
      out += "[" + f.section + "]\n";
      current = f.section;
    }
    out += f.key + " = " + f.get(cfg) + "\n";
  }
  return out;
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : canonical_text(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace softsp
