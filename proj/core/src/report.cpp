#include "logeval/report.hpp"

#include "logeval/csv.hpp"
#include "logeval/errors.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <unordered_set>

namespace logeval::report {

namespace {

using ordered_json = nlohmann::ordered_json;

std::optional<double> require_metric(const MetricReport& report, std::string_view metric) {
    const auto value = report.metric(metric);
    if (!value) {
        throw DataError("report (" + report.dataset + ", " + report.parser + ", " +
                        report.truth_version.value_or("-") + ") lacks metric '" +
                        std::string(metric) + "'");
    }
    return value;
}

// Average ranks (1-based) with ties sharing the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

ordered_json event_scores_to_json(const std::vector<silhouette::EventScore>& scores) {
    ordered_json arr = ordered_json::array();
    for (const silhouette::EventScore& s : scores) {
        arr.push_back({{"event_id", s.event_id}, {"size", s.size}, {"emss", s.emss}});
    }
    return arr;
}

ordered_json message_scores_to_json(const std::vector<silhouette::MessageScore>& scores) {
    ordered_json arr = ordered_json::array();
    for (const silhouette::MessageScore& s : scores) {
        ordered_json item;
        item["line_id"] = s.line_id;
        item["matched"] = s.matched;
        item["dist_in"] = s.dist_in ? ordered_json(*s.dist_in) : ordered_json(nullptr);
        item["dist_out"] = s.dist_out ? ordered_json(*s.dist_out) : ordered_json(nullptr);
        item["coefficient"] = s.coefficient;
        arr.push_back(std::move(item));
    }
    return arr;
}

} // namespace

std::optional<double> MetricReport::metric(std::string_view name) const {
    if (name == "ga") return ga;
    if (name == "pa") return pa;
    if (name == "fga") return fga;
    if (name == "fta") return fta;
    if (name == "pmss") return pmss;
    throw UsageError("unknown metric '" + std::string(name) +
                     "' (known: ga, pa, fga, fta, pmss)");
}

std::vector<DeltaRow> minmax_delta(std::span<const MetricReport> reports,
                                   std::string_view metric) {
    std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
    for (const MetricReport& report : reports) {
        groups[{report.dataset, report.parser}].push_back(*require_metric(report, metric));
    }
    std::vector<DeltaRow> rows;
    rows.reserve(groups.size());
    for (const auto& [key, values] : groups) {
        if (values.size() < 2) {
            throw DataError("minmax_delta needs at least 2 ground-truth versions for (" +
                            key.first + ", " + key.second + "), got " +
                            std::to_string(values.size()));
        }
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        DeltaRow row;
        row.dataset = key.first;
        row.parser = key.second;
        row.delta = *hi - *lo;
        row.flagged = row.delta >= kDeltaFlagThreshold;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<OptimalCell> optimal_parser(std::span<const MetricReport> reports,
                                        std::string_view metric) {
    // (dataset, version) -> best-so-far
    std::map<std::pair<std::string, std::string>, OptimalCell> cells;
    for (const MetricReport& report : reports) {
        const double value = *require_metric(report, metric);
        const std::pair<std::string, std::string> key{report.dataset,
                                                      report.truth_version.value_or("")};
        auto [it, inserted] = cells.try_emplace(key);
        OptimalCell& cell = it->second;
        if (inserted) {
            cell.dataset = key.first;
            cell.version = key.second;
            cell.parser = report.parser;
            cell.value = value;
            continue;
        }
        if (value > cell.value) {
            cell.parser = report.parser;
            cell.value = value;
            cell.tie = false;
        } else if (value == cell.value && report.parser != cell.parser) {
            cell.tie = true;
            if (report.parser < cell.parser) cell.parser = report.parser;
        }
    }
    if (cells.empty()) {
        throw DataError("optimal_parser: no reports given");
    }
    // Mark every cell of a dataset whose winner differs across versions.
    std::map<std::string, std::vector<OptimalCell*>> by_dataset;
    for (auto& [key, cell] : cells) by_dataset[key.first].push_back(&cell);
    for (auto& [dataset, dataset_cells] : by_dataset) {
        const bool consistent = std::all_of(
            dataset_cells.begin(), dataset_cells.end(), [&](const OptimalCell* c) {
                return c->parser == dataset_cells.front()->parser;
            });
        if (!consistent) {
            for (OptimalCell* c : dataset_cells) c->inconsistent = true;
        }
    }
    std::vector<OptimalCell> rows;
    rows.reserve(cells.size());
    for (auto& [key, cell] : cells) rows.push_back(std::move(cell));
    return rows;
}

GapResult metric_gap(std::span<const MetricReport> reports, std::string_view reference,
                     std::string_view selector) {
    struct ParserValues {
        double reference_value = 0.0;
        double selector_value = 0.0;
    };
    std::map<std::string, std::map<std::string, ParserValues>> datasets;
    for (const MetricReport& report : reports) {
        auto& parsers = datasets[report.dataset];
        const auto [it, inserted] = parsers.try_emplace(
            report.parser, ParserValues{*require_metric(report, reference),
                                        *require_metric(report, selector)});
        if (!inserted) {
            throw DataError("metric_gap: duplicate reports for (" + report.dataset + ", " +
                            report.parser + "); restrict input to one ground-truth version");
        }
    }
    if (datasets.empty()) {
        throw DataError("metric_gap: no reports given");
    }
    GapResult result;
    double total = 0.0;
    std::size_t defined = 0;
    for (const auto& [dataset, parsers] : datasets) {
        double ref_max = 0.0;
        double selector_max = 0.0;
        std::string selector_winner;
        bool first = true;
        for (const auto& [parser, values] : parsers) {
            ref_max = first ? values.reference_value : std::max(ref_max, values.reference_value);
            // map iteration is name-ascending, so strict '>' keeps the
            // lexicographically smallest parser on selector ties
            if (first || values.selector_value > selector_max) {
                selector_max = values.selector_value;
                selector_winner = parser;
            }
            first = false;
        }
        GapRow row;
        row.dataset = dataset;
        if (ref_max != 0.0) {
            const double ref_of_winner = parsers.at(selector_winner).reference_value;
            row.gap = (ref_max - ref_of_winner) / ref_max;
            total += *row.gap;
            ++defined;
        }
        result.per_dataset.push_back(std::move(row));
    }
    if (defined > 0) result.average = total / static_cast<double>(defined);
    return result;
}

std::optional<SpearmanResult> spearman_rho(std::span<const SamplePoint> points) {
    const std::size_t n = points.size();
    if (n < 3) {
        throw ComputationUndefined("Spearman's rho needs at least 3 points, got " +
                                   std::to_string(n));
    }
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = points[i].x;
        ys[i] = points[i].y;
    }
    const std::vector<double> rx = average_ranks(xs);
    const std::vector<double> ry = average_ranks(ys);
    const double mean = (static_cast<double>(n) + 1.0) / 2.0;  // mean rank on both axes
    double cov = 0.0;
    double var_x = 0.0;
    double var_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if (var_x == 0.0 || var_y == 0.0) {
        return std::nullopt;  // constant series: correlation undefined
    }
    SpearmanResult result;
    const bool tie_free =
        std::unordered_set<double>(xs.begin(), xs.end()).size() == n &&
        std::unordered_set<double>(ys.begin(), ys.end()).size() == n;
    if (tie_free) {
        // Without ties, Pearson-on-ranks reduces to the classical
        // rank-difference form; computing it that way keeps perfectly
        // (anti)monotone data at exactly +/-1.
        double sum_d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = rx[i] - ry[i];
            sum_d2 += d * d;
        }
        const double nn = static_cast<double>(n);
        result.rho = 1.0 - 6.0 * sum_d2 / (nn * (nn * nn - 1.0));
    } else {
        result.rho = cov / std::sqrt(var_x * var_y);
    }
    const double one_minus_rho2 = 1.0 - result.rho * result.rho;
    if (one_minus_rho2 <= 0.0) {
        result.p_value = 0.0;
        return result;
    }
    const double t = result.rho *
                     std::sqrt((static_cast<double>(n) - 2.0) / one_minus_rho2);
    const boost::math::students_t dist(static_cast<double>(n) - 2.0);
    result.p_value = 2.0 * boost::math::cdf(dist, -std::abs(t));
    return result;
}

std::vector<TimingRow> timing_summary(std::span<const MetricReport> reports) {
    std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> groups;
    for (const MetricReport& report : reports) {
        if (report.timing_ms.empty()) continue;
        if (report.line_count == 0) {
            throw DataError("timing_summary: report (" + report.dataset + ", " +
                            report.parser + ") has timings but zero lines");
        }
        const double thousands = static_cast<double>(report.line_count) / 1000.0;
        for (const auto& [metric, millis] : report.timing_ms) {
            groups[{report.dataset, report.parser, metric}].push_back(millis / thousands);
        }
    }
    std::vector<TimingRow> rows;
    rows.reserve(groups.size());
    for (auto& [key, values] : groups) {
        TimingRow row;
        row.dataset = std::get<0>(key);
        row.parser = std::get<1>(key);
        row.metric = std::get<2>(key);
        row.ms_per_1k = median(std::move(values));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string to_json_text(const MetricReport& report, int indent) {
    ordered_json doc;
    doc["dataset"] = report.dataset;
    doc["parser"] = report.parser;
    doc["truth_version"] =
        report.truth_version ? ordered_json(*report.truth_version) : ordered_json(nullptr);
    ordered_json metrics = ordered_json::object();
    if (report.ga) metrics["ga"] = *report.ga;
    if (report.pa) metrics["pa"] = *report.pa;
    if (report.fga) metrics["fga"] = *report.fga;
    if (report.fta) metrics["fta"] = *report.fta;
    if (report.pmss) metrics["pmss"] = *report.pmss;
    doc["metrics"] = std::move(metrics);
    doc["emss"] = event_scores_to_json(report.event_scores);
    if (!report.message_scores.empty()) {
        doc["message_scores"] = message_scores_to_json(report.message_scores);
    }
    ordered_json timing = ordered_json::object();
    for (const auto& [metric, millis] : report.timing_ms) timing[metric] = millis;
    doc["timing_ms"] = std::move(timing);
    doc["line_count"] = report.line_count;
    return doc.dump(indent) + "\n";
}

MetricReport from_json_text(const std::string& text, const std::string& source) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(source + ": invalid report JSON: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("dataset") || !doc.contains("parser")) {
        throw DataError(source + ": report JSON must contain dataset and parser");
    }
    MetricReport report;
    try {
        report.dataset = doc["dataset"].get<std::string>();
        report.parser = doc["parser"].get<std::string>();
        if (doc.contains("truth_version") && !doc["truth_version"].is_null()) {
            report.truth_version = doc["truth_version"].get<std::string>();
        }
        if (doc.contains("metrics")) {
            const auto& metrics = doc["metrics"];
            if (metrics.contains("ga")) report.ga = metrics["ga"].get<double>();
            if (metrics.contains("pa")) report.pa = metrics["pa"].get<double>();
            if (metrics.contains("fga")) report.fga = metrics["fga"].get<double>();
            if (metrics.contains("fta")) report.fta = metrics["fta"].get<double>();
            if (metrics.contains("pmss")) report.pmss = metrics["pmss"].get<double>();
        }
        if (doc.contains("emss")) {
            for (const auto& item : doc["emss"]) {
                silhouette::EventScore score;
                score.event_id = item.at("event_id").get<std::string>();
                score.size = item.at("size").get<std::size_t>();
                score.emss = item.at("emss").get<double>();
                report.event_scores.push_back(std::move(score));
            }
        }
        if (doc.contains("message_scores")) {
            for (const auto& item : doc["message_scores"]) {
                silhouette::MessageScore score;
                score.line_id = item.at("line_id").get<std::int64_t>();
                score.matched = item.at("matched").get<bool>();
                if (!item.at("dist_in").is_null()) {
                    score.dist_in = item["dist_in"].get<std::size_t>();
                }
                if (!item.at("dist_out").is_null()) {
                    score.dist_out = item["dist_out"].get<std::size_t>();
                }
                score.coefficient = item.at("coefficient").get<double>();
                report.message_scores.push_back(score);
            }
        }
        if (doc.contains("timing_ms")) {
            for (const auto& [metric, millis] : doc["timing_ms"].items()) {
                report.timing_ms.emplace_back(metric, millis.get<double>());
            }
        }
        if (doc.contains("line_count")) {
            report.line_count = doc["line_count"].get<std::size_t>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(source + ": malformed report field: " + e.what());
    }
    return report;
}

std::string format_fixed3(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", value);
    return buf;
}

std::string to_csv_text(std::span<const MetricReport> reports) {
    csv::Table table;
    table.header = {"dataset", "parser",         "truth_version", "ga",  "pa",
                    "fga",     "fta",            "pmss",          "line_count"};
    auto cell = [](const std::optional<double>& value) {
        return value ? format_fixed3(*value) : std::string();
    };
    for (const MetricReport& report : reports) {
        table.rows.push_back({report.dataset, report.parser,
                              report.truth_version.value_or(""), cell(report.ga),
                              cell(report.pa), cell(report.fga), cell(report.fta),
                              cell(report.pmss), std::to_string(report.line_count)});
    }
    return csv::format_table(table);
}

} // namespace logeval::report
