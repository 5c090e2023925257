#include "softsp/report.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "softsp/stats.hpp"

namespace softsp::report {

namespace {

using control::GainCondition;
using metrics::RunSummary;
using metrics::Window;
using predictor::Variant;

constexpr GainCondition kGains[] = {GainCondition::Low, GainCondition::Medium,
                                    GainCondition::High};
constexpr Variant kLearning[] = {Variant::Ldn3, Variant::Hist3, Variant::Hist7};
constexpr const char* kGainTitles[] = {"Low Gain", "Medium Gain", "High Gain"};

/// One table row: a label and how to pull its sample from the summaries.
struct Method {
  std::string name;
  std::vector<Variant> sources;
  double (*value)(const RunSummary&, Window);
};

std::vector<double> collect(const std::vector<RunSummary>& rows, const Method& m,
                            GainCondition g, Window w) {
  std::vector<double> out;
  for (const RunSummary& s : rows) {
    if (s.gain != g) continue;
    if (std::find(m.sources.begin(), m.sources.end(), s.variant) == m.sources.end()) {
      continue;
    }
    out.push_back(m.value(s, w));
  }
  return out;
}

std::string cell(const std::vector<double>& v, bool& single_flag) {
  if (v.empty()) return "n/a";
  if (v.size() == 1) {
    single_flag = true;
    return fmt::format("{:.2f} ± 0.00*", v.front());
  }
  return fmt::format("{:.2f} ± {:.2f}", stats::mean(v), stats::stddev(v));
}

/// Left-justifies to `width` visible columns; "±" occupies two UTF-8 bytes.
std::string pad(std::string s, std::size_t width) {
  std::size_t visible = 0;
  for (const unsigned char c : s) visible += (c & 0xC0) != 0x80;
  if (visible < width) s.append(width - visible, ' ');
  return s;
}

std::string table(const std::string& title, const std::vector<Method>& methods,
                  const std::vector<RunSummary>& rows, bool& single_flag) {
  std::string out = title + "\n";
  out += fmt::format("{:<10}{:<10}{:<18}{:<18}{:<18}\n", "Phase", "Method",
                     kGainTitles[0], kGainTitles[1], kGainTitles[2]);
  out += std::string(74, '-') + "\n";
  for (const Window w : {Window::Transient, Window::Stable}) {
    bool first = true;
    for (const Method& m : methods) {
      std::string line = fmt::format(
          "{:<10}{:<10}", first ? (w == Window::Transient ? "Transient" : "Stable") : "",
          m.name);
      for (const GainCondition g : kGains) {
        line += pad(cell(collect(rows, m, g, w), single_flag), 18);
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out += line + "\n";
      first = false;
    }
  }
  return out;
}

std::string significance(const std::string& title, const std::vector<Method>& methods,
                         const std::vector<RunSummary>& rows) {
  std::string out = title + "\n";
  for (const Window w : {Window::Transient, Window::Stable}) {
    for (std::size_t gi = 0; gi < 3; ++gi) {
      const GainCondition g = kGains[gi];
      std::vector<std::vector<double>> groups;
      std::vector<std::string> names;
      for (const Method& m : methods) {
        auto sample = collect(rows, m, g, w);
        if (sample.size() >= 2) {
          groups.push_back(std::move(sample));
          names.push_back(m.name);
        }
      }
      std::string line = fmt::format("  {:<9} {:<12}", w == Window::Transient ? "Transient" : "Stable",
                                     kGainTitles[gi]);
      if (groups.size() < 2) {
        out += line + "insufficient data\n";
        continue;
      }
      const stats::AnovaResult anova = stats::anova_oneway(groups);
      line += fmt::format("ANOVA F = {:.4g}, p = {:.4g}", anova.f, anova.p);
      if (names.front() == methods.front().name) {
        const Eigen::MatrixXd p = stats::pairwise_welch(groups);
        line += fmt::format(" | vs {}:", names.front());
        for (std::size_t i = 1; i < names.size(); ++i) {
          line += fmt::format(" {} p = {:.4g}{}", names[i], p(0, static_cast<Eigen::Index>(i)),
                              p(0, static_cast<Eigen::Index>(i)) < 0.05 ? " (*)" : "");
        }
      }
      out += line + "\n";
    }
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& line, std::size_t max_fields) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (out.size() + 1 < max_fields) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) break;
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  out.push_back(line.substr(start));
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw InvalidArgument("csv: malformed number '" + s + "'");
  return v;
}

}  // namespace

std::string emit_report(const std::vector<RunSummary>& summaries,
                        const std::vector<batch::Exclusion>& excluded) {
  std::vector<RunSummary> rows = summaries;
  std::sort(rows.begin(), rows.end(), metrics::summary_less);

  const auto track = [](const RunSummary& s, Window w) { return s.track(w); };
  const auto model = [](const RunSummary& s, Window w) { return s.model(w); };
  const auto nopred = [](const RunSummary& s, Window w) { return s.nopred_model(w); };

  std::vector<Method> tracking = {{"Baseline", {Variant::NoPred}, track}};
  for (const Variant v : kLearning) {
    tracking.push_back({std::string(predictor::label(v)), {v}, track});
  }

  // The null predictor is scored on the learning runs' data when present.
  const bool have_learning = std::any_of(rows.begin(), rows.end(), [](const RunSummary& s) {
    return s.variant != Variant::NoPred;
  });
  std::vector<Method> modeling = {
      {"No-Pred",
       have_learning ? std::vector<Variant>(std::begin(kLearning), std::end(kLearning))
                     : std::vector<Variant>{Variant::NoPred},
       nopred}};
  for (const Variant v : kLearning) {
    modeling.push_back({std::string(predictor::label(v)), {v}, model});
  }

  bool single = false;
  std::string out;
  out += table("XY RMS Tracking Error (mm) for Transient and Stable Phases", tracking, rows,
               single);
  out += "\n";
  out += table("XY RMS Modeling Error (mm) for Transient and Stable Phases", modeling, rows,
               single);
  if (single) out += "* single run; spread not available\n";
  out += "\n";
  out += significance(
      "Tracking significance (one-way ANOVA; Welch vs Baseline, Bonferroni-corrected)",
      tracking, rows);
  out += "\n";
  out += significance(
      "Modeling significance (one-way ANOVA; Welch vs No-Pred, Bonferroni-corrected)",
      modeling, rows);
  out += "\n";
  out += fmt::format("Runs: scheduled {} = retained {} + excluded {}\n",
                     rows.size() + excluded.size(), rows.size(), excluded.size());
  for (const batch::Exclusion& e : excluded) {
    out += fmt::format("  excluded {} {} seed {}: {}\n", predictor::to_string(e.variant),
                       control::to_string(e.gain), e.seed, e.reason);
  }
  return out;
}

void write_summary_csv(std::ostream& os, const std::vector<RunSummary>& rows) {
  os << "variant,gain,seed,track_transient_mm,track_stable_mm,model_transient_mm,"
        "model_stable_mm,nopred_model_transient_mm,nopred_model_stable_mm\n";
  std::vector<RunSummary> sorted = rows;
  std::sort(sorted.begin(), sorted.end(), metrics::summary_less);
  for (const RunSummary& s : sorted) {
    os << fmt::format("{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                      predictor::to_string(s.variant), control::to_string(s.gain), s.seed,
                      s.track_transient, s.track_stable, s.model_transient, s.model_stable,
                      s.nopred_model_transient, s.nopred_model_stable);
  }
}

std::vector<RunSummary> read_summary_csv(std::istream& is) {
  std::vector<RunSummary> out;
  std::string line;
  if (!std::getline(is, line)) {
    throw InvalidArgument("summary csv: missing header");
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line, 9);
    if (f.size() != 9) throw InvalidArgument("summary csv: expected 9 fields");
    RunSummary s;
    s.variant = predictor::parse_variant(f[0]);
    s.gain = control::parse_gain(f[1]);
    s.seed = std::stoull(f[2]);
    s.track_transient = parse_double(f[3]);
    s.track_stable = parse_double(f[4]);
    s.model_transient = parse_double(f[5]);
    s.model_stable = parse_double(f[6]);
    s.nopred_model_transient = parse_double(f[7]);
    s.nopred_model_stable = parse_double(f[8]);
    out.push_back(s);
  }
  return out;
}

void write_exclusions_csv(std::ostream& os, const std::vector<batch::Exclusion>& rows) {
  os << "variant,gain,seed,reason\n";
  for (const batch::Exclusion& e : rows) {
    std::string reason = e.reason;
    std::replace(reason.begin(), reason.end(), '\n', ' ');
    os << fmt::format("{},{},{},{}\n", predictor::to_string(e.variant),
                      control::to_string(e.gain), e.seed, reason);
  }
}

std::vector<batch::Exclusion> read_exclusions_csv(std::istream& is) {
  std::vector<batch::Exclusion> out;
  std::string line;
  if (!std::getline(is, line)) {
    throw InvalidArgument("exclusions csv: missing header");
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line, 4);
    if (f.size() != 4) throw InvalidArgument("exclusions csv: expected 4 fields");
    out.push_back({predictor::parse_variant(f[0]), control::parse_gain(f[1]),
                   std::stoull(f[2]), f[3]});
  }
  return out;
}

void write_plot_csv(std::ostream& os, const std::vector<batch::SeriesAverage>& series,
                    double dt) {
  os << "time,variant,gain,runs,tracking_mm,modeling_mm\n";
  for (const batch::SeriesAverage& s : series) {
    for (std::size_t k = 0; k < s.tracking.size(); ++k) {
      os << fmt::format("{:.17g},{},{},{},{:.17g},{:.17g}\n", static_cast<double>(k) * dt,
                        predictor::to_string(s.variant), control::to_string(s.gain), s.runs,
                        s.tracking[k], s.modeling[k]);
    }
  }
}

}  // namespace softsp::report
