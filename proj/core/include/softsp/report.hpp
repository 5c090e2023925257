#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "softsp/batch.hpp"
#include "softsp/metrics.hpp"

namespace softsp::report {

/// Tracking and modeling tables (Phase x Method x Gain, mean ± std over
/// seeds) followed by ANOVA and corrected pairwise Welch results, and the
/// exclusion accounting.
std::string emit_report(const std::vector<metrics::RunSummary>& summaries,
                        const std::vector<batch::Exclusion>& excluded);

void write_summary_csv(std::ostream& os, const std::vector<metrics::RunSummary>& rows);
std::vector<metrics::RunSummary> read_summary_csv(std::istream& is);

void write_exclusions_csv(std::ostream& os, const std::vector<batch::Exclusion>& rows);
std::vector<batch::Exclusion> read_exclusions_csv(std::istream& is);

/// Long-format plot data: time, variant, gain, tracking_mm, modeling_mm.
void write_plot_csv(std::ostream& os, const std::vector<batch::SeriesAverage>& series,
                    double dt);

}  // namespace softsp::report
