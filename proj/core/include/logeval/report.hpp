#ifndef LOGEVAL_REPORT_HPP
#define LOGEVAL_REPORT_HPP

#include "logeval/silhouette.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace logeval::report {

// One evaluation outcome: a (dataset, parser, ground-truth version) cell.
struct MetricReport {
    std::string dataset;
    std::string parser;
    std::optional<std::string> truth_version;
    std::optional<double> ga;
    std::optional<double> pa;
    std::optional<double> fga;
    std::optional<double> fta;
    std::optional<double> pmss;
    std::vector<silhouette::EventScore> event_scores;      // per-event EMSS
    std::vector<silhouette::MessageScore> message_scores;  // only when requested
    std::size_t line_count = 0;
    // Wall-clock milliseconds per computed metric, in computation order.
    std::vector<std::pair<std::string, double>> timing_ms;

    [[nodiscard]] std::optional<double> metric(std::string_view name) const;
};

// Difference between the largest and smallest value of one metric across
// ground-truth versions of the same (dataset, parser).  Deltas at or above
// 0.04 are flagged as version-sensitive.
inline constexpr double kDeltaFlagThreshold = 0.04;

struct DeltaRow {
    std::string dataset;
    std::string parser;
    double delta = 0.0;
    bool flagged = false;
};

[[nodiscard]] std::vector<DeltaRow> minmax_delta(std::span<const MetricReport> reports,
                                                 std::string_view metric);

// Best parser per (dataset, ground-truth version) cell; ties break to the
// lexicographically smallest parser name and are flagged.  Cells of a dataset
// whose winner changes across versions are marked inconsistent.
struct OptimalCell {
    std::string dataset;
    std::string version;
    std::string parser;
    double value = 0.0;
    bool tie = false;
    bool inconsistent = false;
};

[[nodiscard]] std::vector<OptimalCell> optimal_parser(std::span<const MetricReport> reports,
                                                      std::string_view metric);

// Relative shortfall, per dataset, of the parser chosen by the selector
// metric, measured in the reference metric:
//   gap = (ref_max - ref_of_selector_winner) / ref_max
// Absent when ref_max is 0.
struct GapRow {
    std::string dataset;
    std::optional<double> gap;
};

struct GapResult {
    std::vector<GapRow> per_dataset;
    std::optional<double> average;  // over datasets with a defined gap
};

[[nodiscard]] GapResult metric_gap(std::span<const MetricReport> reports,
                                   std::string_view reference, std::string_view selector);

struct SamplePoint {
    std::string dataset;
    std::string parser;
    double x = 0.0;
    double y = 0.0;
};

struct SpearmanResult {
    double rho = 0.0;
    double p_value = 0.0;
};

// Spearman rank correlation with average-rank tie handling; the p-value uses
// the t-distribution approximation t = rho*sqrt((n-2)/(1-rho^2)) with n-2
// degrees of freedom (two-sided).  Returns nullopt when all x or all y are
// identical (undefined).  Throws ComputationUndefined for fewer than 3
// points.
[[nodiscard]] std::optional<SpearmanResult> spearman_rho(std::span<const SamplePoint> points);

// Milliseconds per 1,000 lines for each (dataset, parser, metric); the median
// is reported when several reports repeat the same cell.
struct TimingRow {
    std::string dataset;
    std::string parser;
    std::string metric;
    double ms_per_1k = 0.0;
};

[[nodiscard]] std::vector<TimingRow> timing_summary(std::span<const MetricReport> reports);

// JSON document for one report:
//   {dataset, parser, truth_version, metrics:{...}, emss:[...],
//    timing_ms:{...}, line_count}
// plus message_scores when they were kept.  Deterministic key order and full
// float precision, terminated by a newline.
[[nodiscard]] std::string to_json_text(const MetricReport& report, int indent = 2);
[[nodiscard]] MetricReport from_json_text(const std::string& text, const std::string& source);

// CSV with one row per report; floats printed with 3 decimals, absent
// metrics as empty cells.
[[nodiscard]] std::string to_csv_text(std::span<const MetricReport> reports);

// Shared 3-decimal float formatting for table outputs.
[[nodiscard]] std::string format_fixed3(double value);

} // namespace logeval::report

#endif // LOGEVAL_REPORT_HPP
