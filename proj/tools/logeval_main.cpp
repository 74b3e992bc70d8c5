// logeval: evaluate log-parser outputs with label-free silhouette metrics
// (PMSS/EMSS), the classic labeled metrics (GA, PA, FGA, FTA), template
// correction profiles, and cross-version/cross-parser analyses.

#include "logeval/corpus.hpp"
#include "logeval/corrections.hpp"
#include "logeval/errors.hpp"
#include "logeval/labeled_metrics.hpp"
#include "logeval/report.hpp"
#include "logeval/silhouette.hpp"
#include "logeval/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <span>
#include <string>
#include <vector>

namespace {

using logeval::ComputationUndefined;
using logeval::Corpus;
using logeval::DataError;
using logeval::UsageError;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitSuccess = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitUndefined = 3;

void write_output(const std::string& text, const std::string& out_path) {
    std::string body = text;
    if (body.empty() || body.back() != '\n') body += '\n';
    if (out_path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw DataError(out_path + ": cannot open for writing");
    }
    out << body;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError(path + ": cannot open for writing");
    }
    out << body;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

logeval::corrections::CorrectionProfile resolve_profile(const std::string& spec) {
    if (logeval::corrections::is_builtin_profile(spec)) {
        return logeval::corrections::builtin_profile(spec);
    }
    if (std::filesystem::exists(spec)) {
        return logeval::corrections::load_profile_file(spec);
    }
    throw UsageError("unknown profile '" + spec +
                     "': not a built-in (v1..v5) and not an existing file");
}

std::vector<logeval::report::MetricReport> load_reports(const std::vector<std::string>& paths) {
    std::vector<logeval::report::MetricReport> reports;
    reports.reserve(paths.size());
    for (const std::string& path : paths) {
        reports.push_back(
            logeval::report::from_json_text(logeval::csv::read_file(path), path));
    }
    return reports;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateConfig {
    std::string parsed_path;
    std::string templates_path;
    std::string groundtruth_path;
    std::string truth_templates_path;
    std::vector<std::string> metrics;
    std::string neighbors = "sorted";
    std::string output = "json";
    std::string out_path;
    unsigned jobs = 0;  // 0 = hardware concurrency
    bool timing = false;
    bool keep_message_scores = false;
    std::string placeholder{logeval::kDefaultPlaceholder};
    std::string dataset;
    std::string parser = "parser";
    std::string truth_version;
};

int run_evaluate(const EvaluateConfig& config) {
    bool want_labeled = false;
    bool want_pmss = false;
    for (const std::string& metric : config.metrics) {
        if (metric == "ga" || metric == "pa" || metric == "fga" || metric == "fta") {
            want_labeled = true;
        } else if (metric == "pmss") {
            want_pmss = true;
        } else {
            throw UsageError("unknown metric '" + metric + "' (known: ga, pa, fga, fta, pmss)");
        }
    }
    if (config.metrics.empty()) {
        throw UsageError("--metrics must select at least one of ga, pa, fga, fta, pmss");
    }
    if (want_labeled && config.groundtruth_path.empty()) {
        throw UsageError("metrics ga/pa/fga/fta require --groundtruth");
    }
    const logeval::silhouette::NeighborMode mode =
        config.neighbors == "exact" ? logeval::silhouette::NeighborMode::exact_neighbor
                                    : logeval::silhouette::NeighborMode::sorted_neighbor;

    Corpus corpus = logeval::corpus::load_structured_log(config.parsed_path);
    corpus.placeholder = config.placeholder;
    if (!config.templates_path.empty()) {
        logeval::corpus::set_parsed_templates(
            corpus, logeval::corpus::load_templates(config.templates_path));
    }
    if (!config.groundtruth_path.empty()) {
        Corpus truth = logeval::corpus::load_structured_log(config.groundtruth_path);
        if (!config.truth_templates_path.empty()) {
            logeval::corpus::set_parsed_templates(
                truth, logeval::corpus::load_templates(config.truth_templates_path));
        }
        corpus = logeval::corpus::attach_ground_truth(std::move(corpus), truth);
    }

    logeval::report::MetricReport report;
    report.dataset = config.dataset.empty()
                         ? std::filesystem::path(config.parsed_path).stem().string()
                         : config.dataset;
    report.parser = config.parser;
    if (!config.truth_version.empty()) report.truth_version = config.truth_version;
    report.line_count = corpus.records.size();

    auto timed = [&](const char* name, auto&& compute) {
        const auto start = std::chrono::steady_clock::now();
        compute();
        if (config.timing) report.timing_ms.emplace_back(name, elapsed_ms(start));
    };
    for (const std::string& metric : {std::string("ga"), std::string("pa"), std::string("fga"),
                                      std::string("fta")}) {
        const bool requested = std::find(config.metrics.begin(), config.metrics.end(),
                                         metric) != config.metrics.end();
        if (!requested) continue;
        if (metric == "ga") {
            timed("ga", [&] { report.ga = logeval::metrics::grouping_accuracy(corpus); });
        } else if (metric == "pa") {
            timed("pa", [&] { report.pa = logeval::metrics::parsing_accuracy(corpus); });
        } else if (metric == "fga") {
            timed("fga", [&] { report.fga = logeval::metrics::f1_grouping_accuracy(corpus); });
        } else {
            timed("fta", [&] { report.fta = logeval::metrics::f1_template_accuracy(corpus); });
        }
    }
    if (want_pmss) {
        timed("pmss", [&] {
            logeval::silhouette::SilhouetteResult result = logeval::silhouette::evaluate_pmss(
                corpus, mode, config.keep_message_scores, config.jobs);
            report.pmss = result.pmss;
            report.event_scores = std::move(result.event_scores);
            report.message_scores = std::move(result.message_scores);
            if (!result.empty_event_ids.empty()) {
                std::cerr << "warning: " << result.empty_event_ids.size()
                          << " template(s) with no assigned messages were excluded from the"
                          << " PMSS average\n";
            }
        });
    }

    if (config.output == "csv") {
        write_output(logeval::report::to_csv_text({&report, 1}), config.out_path);
    } else {
        write_output(logeval::report::to_json_text(report), config.out_path);
    }
    return kExitSuccess;
}

// ---------------------------------------------------------------------------
// correct

struct CorrectConfig {
    std::string groundtruth_path;
    std::string templates_path;
    std::string profile;
    std::string out_dir = ".";
    std::string placeholder{logeval::kDefaultPlaceholder};
};

int run_correct(const CorrectConfig& config) {
    logeval::corrections::CorrectionProfile profile = resolve_profile(config.profile);
    profile.params.placeholder = config.placeholder;

    Corpus corpus = logeval::corpus::load_structured_log(config.groundtruth_path);
    corpus.placeholder = config.placeholder;
    if (!config.templates_path.empty()) {
        logeval::corpus::set_parsed_templates(
            corpus, logeval::corpus::load_templates(config.templates_path));
    }
    logeval::corrections::ProfileResult result;
    const Corpus corrected =
        logeval::corrections::apply_profile_to_parsed(corpus, profile, &result);

    std::filesystem::create_directories(config.out_dir);
    const auto out = [&](const char* name) {
        return (std::filesystem::path(config.out_dir) / name).string();
    };
    write_file(out("corrected_structured.csv"),
               logeval::csv::format_table(logeval::corpus::to_structured_table(corrected)));
    write_file(out("corrected_templates.csv"),
               logeval::csv::format_table(
                   logeval::corpus::to_templates_table(corrected.parsed_templates)));
    logeval::csv::Table merge_table;
    merge_table.header = {"OldEventId", "NewEventId"};
    for (const auto& [old_id, new_id] : result.merge_map) {
        merge_table.rows.push_back({old_id, new_id});
    }
    write_file(out("merge_map.csv"), logeval::csv::format_table(merge_table));

    ordered_json summary;
    summary["profile"] = profile.name;
    summary["events_in"] = result.merge_map.size();
    summary["events_out"] = corrected.parsed_templates.size();
    summary["merged_events"] = result.merged_event_count;
    summary["outputs"] = {{"structured", out("corrected_structured.csv")},
                          {"templates", out("corrected_templates.csv")},
                          {"merge_map", out("merge_map.csv")}};
    write_output(summary.dump(2), "");
    return kExitSuccess;
}

// ---------------------------------------------------------------------------
// compare-versions

struct CompareConfig {
    std::string groundtruth_path;
    std::vector<std::string> profiles;
    std::vector<std::string> report_paths;
    std::string output = "json";
    std::string out_path;
    std::string placeholder{logeval::kDefaultPlaceholder};
};

ordered_json delta_rows_json(const std::vector<logeval::report::DeltaRow>& rows) {
    ordered_json arr = ordered_json::array();
    for (const auto& row : rows) {
        arr.push_back({{"dataset", row.dataset},
                       {"parser", row.parser},
                       {"delta", row.delta},
                       {"flagged", row.flagged}});
    }
    return arr;
}

ordered_json optimal_cells_json(const std::vector<logeval::report::OptimalCell>& cells) {
    ordered_json arr = ordered_json::array();
    for (const auto& cell : cells) {
        arr.push_back({{"dataset", cell.dataset},
                       {"version", cell.version},
                       {"parser", cell.parser},
                       {"value", cell.value},
                       {"tie", cell.tie},
                       {"inconsistent", cell.inconsistent}});
    }
    return arr;
}

int run_compare_versions(const CompareConfig& config) {
    const bool have_corpus = !config.groundtruth_path.empty();
    const bool have_reports = !config.report_paths.empty();
    if (!have_corpus && !have_reports) {
        throw UsageError("compare-versions needs --groundtruth (for version diffs) and/or"
                         " --report files (for delta/optimal tables)");
    }

    ordered_json doc;
    std::string csv_text;

    if (have_corpus) {
        std::vector<std::string> profile_names = config.profiles;
        if (profile_names.empty()) {
            profile_names = {"v1", "v2", "v3", "v4", "v5"};
        }
        if (profile_names.size() < 2) {
            throw UsageError("version diffs need at least 2 profiles");
        }
        Corpus corpus = logeval::corpus::load_structured_log(config.groundtruth_path);
        corpus.placeholder = config.placeholder;
        std::vector<logeval::corrections::ProfileResult> results(profile_names.size());
        for (std::size_t i = 0; i < profile_names.size(); ++i) {
            logeval::corrections::CorrectionProfile profile =
                resolve_profile(profile_names[i]);
            profile.params.placeholder = config.placeholder;
            results[i] =
                logeval::corrections::apply_profile(corpus.parsed_templates, profile);
        }
        ordered_json diffs = ordered_json::array();
        logeval::csv::Table diff_table;
        diff_table.header = {"a", "b", "template_diff_pct", "message_diff_pct"};
        for (std::size_t i = 0; i < results.size(); ++i) {
            for (std::size_t j = i + 1; j < results.size(); ++j) {
                const logeval::corrections::VersionDiff diff =
                    logeval::corrections::version_diff(corpus, results[i], results[j]);
                diffs.push_back({{"a", profile_names[i]},
                                 {"b", profile_names[j]},
                                 {"template_diff_pct", diff.template_diff_pct},
                                 {"message_diff_pct", diff.message_diff_pct}});
                diff_table.rows.push_back(
                    {profile_names[i], profile_names[j],
                     logeval::report::format_fixed3(diff.template_diff_pct),
                     logeval::report::format_fixed3(diff.message_diff_pct)});
            }
        }
        doc["version_diff"] = std::move(diffs);
        csv_text += logeval::csv::format_table(diff_table);
    }

    if (have_reports) {
        const std::vector<logeval::report::MetricReport> reports =
            load_reports(config.report_paths);
        const std::span<const logeval::report::MetricReport> span(reports);
        for (const std::string metric : {std::string("pa"), std::string("fta")}) {
            const auto deltas = logeval::report::minmax_delta(span, metric);
            const auto cells = logeval::report::optimal_parser(span, metric);
            doc["delta_" + metric] = delta_rows_json(deltas);
            doc["optimal_" + metric] = optimal_cells_json(cells);
            logeval::csv::Table delta_table;
            delta_table.header = {"metric", "dataset", "parser", "delta", "flagged"};
            for (const auto& row : deltas) {
                delta_table.rows.push_back({metric, row.dataset, row.parser,
                                            logeval::report::format_fixed3(row.delta),
                                            row.flagged ? "yes" : "no"});
            }
            logeval::csv::Table optimal_table;
            optimal_table.header = {"metric", "dataset", "version",
                                    "parser", "value",   "tie",
                                    "inconsistent"};
            for (const auto& cell : cells) {
                optimal_table.rows.push_back({metric, cell.dataset, cell.version, cell.parser,
                                              logeval::report::format_fixed3(cell.value),
                                              cell.tie ? "yes" : "no",
                                              cell.inconsistent ? "yes" : "no"});
            }
            if (!csv_text.empty()) csv_text += "\n";
            csv_text += logeval::csv::format_table(delta_table);
            csv_text += "\n";
            csv_text += logeval::csv::format_table(optimal_table);
        }
    }

    write_output(config.output == "csv" ? csv_text : doc.dump(2), config.out_path);
    return kExitSuccess;
}

// ---------------------------------------------------------------------------
// rank

struct RankConfig {
    std::vector<std::string> report_paths;
    std::string metric;
    std::string gap_reference;
    std::string gap_selector;
    bool timing = false;
    std::string output = "json";
    std::string out_path;
};

int run_rank(const RankConfig& config) {
    if ((config.gap_reference.empty()) != (config.gap_selector.empty())) {
        throw UsageError("--gap-reference and --gap-selector must be given together");
    }
    const std::vector<logeval::report::MetricReport> reports = load_reports(config.report_paths);
    const std::span<const logeval::report::MetricReport> span(reports);
    const auto cells = logeval::report::optimal_parser(span, config.metric);

    ordered_json doc;
    doc["metric"] = config.metric;
    doc["optimal"] = optimal_cells_json(cells);
    std::string csv_text;
    {
        logeval::csv::Table table;
        table.header = {"dataset", "version", "parser", "value", "tie", "inconsistent"};
        for (const auto& cell : cells) {
            table.rows.push_back({cell.dataset, cell.version, cell.parser,
                                  logeval::report::format_fixed3(cell.value),
                                  cell.tie ? "yes" : "no", cell.inconsistent ? "yes" : "no"});
        }
        csv_text += logeval::csv::format_table(table);
    }

    if (!config.gap_reference.empty()) {
        const logeval::report::GapResult gap =
            logeval::report::metric_gap(span, config.gap_reference, config.gap_selector);
        ordered_json rows = ordered_json::array();
        logeval::csv::Table table;
        table.header = {"dataset", "gap"};
        for (const auto& row : gap.per_dataset) {
            rows.push_back({{"dataset", row.dataset},
                            {"gap", row.gap ? ordered_json(*row.gap) : ordered_json(nullptr)}});
            table.rows.push_back(
                {row.dataset,
                 row.gap ? logeval::report::format_fixed3(*row.gap) : std::string()});
        }
        doc["gap"] = {{"reference", config.gap_reference},
                      {"selector", config.gap_selector},
                      {"per_dataset", std::move(rows)},
                      {"average", gap.average ? ordered_json(*gap.average)
                                              : ordered_json(nullptr)}};
        csv_text += "\n";
        csv_text += logeval::csv::format_table(table);
    }

    if (config.timing) {
        const auto rows = logeval::report::timing_summary(span);
        ordered_json timing = ordered_json::array();
        logeval::csv::Table table;
        table.header = {"dataset", "parser", "metric", "ms_per_1k"};
        for (const auto& row : rows) {
            timing.push_back({{"dataset", row.dataset},
                              {"parser", row.parser},
                              {"metric", row.metric},
                              {"ms_per_1k", row.ms_per_1k}});
            table.rows.push_back({row.dataset, row.parser, row.metric,
                                  logeval::report::format_fixed3(row.ms_per_1k)});
        }
        doc["timing"] = std::move(timing);
        csv_text += "\n";
        csv_text += logeval::csv::format_table(table);
    }

    write_output(config.output == "csv" ? csv_text : doc.dump(2), config.out_path);
    return kExitSuccess;
}

// ---------------------------------------------------------------------------
// correlate

struct CorrelateConfig {
    std::vector<std::string> report_paths;
    std::vector<std::string> pairs;  // "x:y"
    std::string output = "json";
    std::string out_path;
};

int run_correlate(const CorrelateConfig& config) {
    std::vector<std::string> pairs = config.pairs;
    if (pairs.empty()) {
        pairs = {"pmss:fga", "pmss:fta"};
    }
    const std::vector<logeval::report::MetricReport> reports = load_reports(config.report_paths);

    ordered_json entries = ordered_json::array();
    logeval::csv::Table table;
    table.header = {"x", "y", "n", "rho", "p_value"};
    std::size_t defined = 0;
    for (const std::string& pair : pairs) {
        const std::size_t colon = pair.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == pair.size()) {
            throw UsageError("--pair expects the form METRIC:METRIC, got '" + pair + "'");
        }
        const std::string x_name = pair.substr(0, colon);
        const std::string y_name = pair.substr(colon + 1);
        std::vector<logeval::report::SamplePoint> points;
        for (const auto& report : reports) {
            const auto x = report.metric(x_name);
            const auto y = report.metric(y_name);
            if (x && y) {
                points.push_back({report.dataset, report.parser, *x, *y});
            }
        }
        const auto result = logeval::report::spearman_rho(points);
        if (result) ++defined;
        entries.push_back(
            {{"x", x_name},
             {"y", y_name},
             {"n", points.size()},
             {"rho", result ? ordered_json(result->rho) : ordered_json(nullptr)},
             {"p_value", result ? ordered_json(result->p_value) : ordered_json(nullptr)}});
        table.rows.push_back({x_name, y_name, std::to_string(points.size()),
                              result ? logeval::report::format_fixed3(result->rho)
                                     : std::string(),
                              result ? logeval::report::format_fixed3(result->p_value)
                                     : std::string()});
    }
    if (defined == 0) {
        throw ComputationUndefined("every requested correlation is degenerate"
                                   " (constant series)");
    }
    ordered_json doc;
    doc["pairs"] = std::move(entries);
    write_output(config.output == "csv" ? logeval::csv::format_table(table) : doc.dump(2),
                 config.out_path);
    return kExitSuccess;
}

// ---------------------------------------------------------------------------
// synth

struct SynthConfig {
    logeval::synth::SynthSpec spec;
    std::string out_truth;
    std::string out_parsed;
};

int run_synth(const SynthConfig& config) {
    const logeval::synth::SynthResult result = logeval::synth::generate(config.spec);
    write_file(config.out_truth,
               logeval::csv::format_table(logeval::corpus::to_structured_table(result.truth)));
    write_file(config.out_parsed,
               logeval::csv::format_table(logeval::corpus::to_structured_table(result.parsed)));
    ordered_json summary;
    summary["templates"] = config.spec.template_count;
    summary["messages"] = config.spec.message_count;
    summary["seed"] = config.spec.seed;
    summary["truth"] = config.out_truth;
    summary["parsed"] = config.out_parsed;
    write_output(summary.dump(2), "");
    return kExitSuccess;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Log parser evaluation: label-free silhouette scores (PMSS/EMSS),"
                 " labeled baselines (GA/PA/FGA/FTA), template correction profiles,"
                 " and cross-version analyses"};
    app.require_subcommand(1);

    EvaluateConfig eval_config;
    CLI::App* eval = app.add_subcommand("evaluate", "Score one parser output");
    eval->add_option("--parsed", eval_config.parsed_path,
                     "Structured parser output CSV (LineId,Content,EventId[,EventTemplate])")
        ->required();
    eval->add_option("--templates", eval_config.templates_path,
                     "Separate templates CSV (EventId,EventTemplate) for the parsed side");
    eval->add_option("--groundtruth", eval_config.groundtruth_path,
                     "Ground-truth structured CSV (required for ga/pa/fga/fta)");
    eval->add_option("--truth-templates", eval_config.truth_templates_path,
                     "Separate templates CSV for the ground-truth side");
    eval->add_option("--metrics", eval_config.metrics,
                     "Comma-separated metric list: ga,pa,fga,fta,pmss")
        ->required()
        ->delimiter(',');
    eval->add_option("--neighbors", eval_config.neighbors,
                     "Neighbor mode for PMSS: sorted (default) or exact")
        ->check(CLI::IsMember({"sorted", "exact"}));
    eval->add_option("--output", eval_config.output, "Output format: json (default) or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    eval->add_option("--out", eval_config.out_path, "Write the report here instead of stdout");
    eval->add_option("--jobs", eval_config.jobs,
                     "Worker threads for PMSS (0 = hardware concurrency)");
    eval->add_flag("--timing", eval_config.timing, "Record per-metric wall time in the report");
    eval->add_flag("--keep-message-scores", eval_config.keep_message_scores,
                   "Include per-message silhouette scores in the report");
    eval->add_option("--placeholder", eval_config.placeholder, "Template placeholder literal");
    eval->add_option("--dataset", eval_config.dataset,
                     "Dataset name for the report (default: parsed file stem)");
    eval->add_option("--parser", eval_config.parser, "Parser name for the report");
    eval->add_option("--truth-version", eval_config.truth_version,
                     "Ground-truth version label for the report");

    CorrectConfig correct_config;
    CLI::App* correct =
        app.add_subcommand("correct", "Apply a template correction profile to a ground truth");
    correct->add_option("--groundtruth", correct_config.groundtruth_path,
                        "Structured CSV to correct")
        ->required();
    correct->add_option("--templates", correct_config.templates_path,
                        "Separate templates CSV overriding the EventTemplate column");
    correct->add_option("--profile", correct_config.profile,
                        "Built-in profile name (v1..v5) or profile JSON file")
        ->required();
    correct->add_option("--out-dir", correct_config.out_dir, "Output directory (default: .)");
    correct->add_option("--placeholder", correct_config.placeholder,
                        "Template placeholder literal");

    CompareConfig compare_config;
    CLI::App* compare = app.add_subcommand(
        "compare-versions", "Diff correction profiles and compare per-version scores");
    compare->add_option("--groundtruth", compare_config.groundtruth_path,
                        "Original structured CSV to correct per profile");
    compare->add_option("--profiles", compare_config.profiles,
                        "Comma-separated profiles to compare (default: v1,v2,v3,v4,v5)")
        ->delimiter(',');
    compare->add_option("--report", compare_config.report_paths,
                        "Evaluation report JSONs (repeatable) for delta/optimal tables");
    compare->add_option("--output", compare_config.output, "json (default) or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    compare->add_option("--out", compare_config.out_path, "Write here instead of stdout");
    compare->add_option("--placeholder", compare_config.placeholder,
                        "Template placeholder literal");

    RankConfig rank_config;
    CLI::App* rank = app.add_subcommand("rank", "Best parser per dataset/version for a metric");
    rank->add_option("--report", rank_config.report_paths, "Evaluation report JSONs")
        ->required();
    rank->add_option("--metric", rank_config.metric, "Metric to rank by")->required();
    rank->add_option("--gap-reference", rank_config.gap_reference,
                     "Reference metric for the selection-gap table");
    rank->add_option("--gap-selector", rank_config.gap_selector,
                     "Selector metric for the selection-gap table");
    rank->add_flag("--timing", rank_config.timing, "Include a ms-per-1k-lines timing table");
    rank->add_option("--output", rank_config.output, "json (default) or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    rank->add_option("--out", rank_config.out_path, "Write here instead of stdout");

    CorrelateConfig correlate_config;
    CLI::App* correlate =
        app.add_subcommand("correlate", "Spearman rank correlation between metrics");
    correlate->add_option("--report", correlate_config.report_paths, "Evaluation report JSONs")
        ->required();
    correlate->add_option("--pair", correlate_config.pairs,
                          "Metric pair X:Y (repeatable; default pmss:fga and pmss:fta)");
    correlate->add_option("--output", correlate_config.output, "json (default) or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    correlate->add_option("--out", correlate_config.out_path, "Write here instead of stdout");

    SynthConfig synth_config;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic corpus pair");
    synth->add_option("--template-count", synth_config.spec.template_count,
                      "Number of templates (>= 2)");
    synth->add_option("--message-count", synth_config.spec.message_count, "Number of messages");
    synth->add_option("--variable-rate", synth_config.spec.variable_rate,
                      "Placeholder probability per template token");
    synth->add_option("--noise-rate", synth_config.spec.noise_rate,
                      "Fraction of messages reassigned to a wrong event");
    synth->add_option("--seed", synth_config.spec.seed, "Generator seed");
    synth->add_option("--placeholder", synth_config.spec.placeholder,
                      "Template placeholder literal");
    synth->add_option("--out-truth", synth_config.out_truth, "Ground-truth CSV path")
        ->required();
    synth->add_option("--out-parsed", synth_config.out_parsed, "Parser-output CSV path")
        ->required();

    try {
        app.parse(argc, argv);
        if (eval->parsed()) return run_evaluate(eval_config);
        if (correct->parsed()) return run_correct(correct_config);
        if (compare->parsed()) return run_compare_versions(compare_config);
        if (rank->parsed()) return run_rank(rank_config);
        if (correlate->parsed()) return run_correlate(correlate_config);
        if (synth->parsed()) return run_synth(synth_config);
        throw UsageError("no command given");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exits 0
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const ComputationUndefined& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUndefined;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitData;
    }
}
