#include "logeval/labeled_metrics.hpp"

#include "logeval/errors.hpp"

#include <algorithm>
#include <cctype>
#include <string_view>
#include <unordered_map>

namespace logeval::metrics {

namespace {

std::string_view trim_trailing(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) {
        s.remove_suffix(1);
    }
    return s;
}

struct Group {
    std::vector<std::size_t> member_rows;  // indices into corpus.records
};

struct GroupAnalysis {
    std::unordered_map<std::string_view, Group> parsed_groups;
    std::unordered_map<std::string_view, std::size_t> truth_sizes;
    // Parsed groups whose line-id set equals a truth group's line-id set.
    std::vector<std::string_view> correct_group_ids;
    std::size_t correct_messages = 0;
};

void require_labels(const Corpus& corpus) {
    if (!corpus.has_truth) {
        throw DataError("labeled metrics require ground truth (none attached)");
    }
    if (corpus.records.empty()) {
        throw DataError("labeled metrics are undefined on an empty corpus");
    }
    for (const LogRecord& rec : corpus.records) {
        if (rec.parsed_event.empty() || rec.truth_event.empty()) {
            throw DataError("line " + std::to_string(rec.line_id) +
                            " is missing a parsed or ground-truth event id");
        }
    }
}

GroupAnalysis analyze(const Corpus& corpus) {
    GroupAnalysis analysis;
    for (std::size_t i = 0; i < corpus.records.size(); ++i) {
        analysis.parsed_groups[corpus.records[i].parsed_event].member_rows.push_back(i);
        analysis.truth_sizes[corpus.records[i].truth_event] += 1;
    }
    // Both sides partition the same records, so a parsed group equals a truth
    // group if and only if all its members share one truth event whose group
    // has the same size.
    for (const auto& [event_id, group] : analysis.parsed_groups) {
        const std::string& truth = corpus.records[group.member_rows.front()].truth_event;
        const bool homogeneous =
            std::all_of(group.member_rows.begin(), group.member_rows.end(),
                        [&](std::size_t row) { return corpus.records[row].truth_event == truth; });
        if (homogeneous && analysis.truth_sizes.at(truth) == group.member_rows.size()) {
            analysis.correct_group_ids.push_back(event_id);
            analysis.correct_messages += group.member_rows.size();
        }
    }
    return analysis;
}

double harmonic_f1(std::size_t correct, std::size_t parsed_count, std::size_t truth_count) {
    if (correct == 0) return 0.0;
    const double precision = static_cast<double>(correct) / static_cast<double>(parsed_count);
    const double recall = static_cast<double>(correct) / static_cast<double>(truth_count);
    return 2.0 * precision * recall / (precision + recall);
}

std::unordered_map<std::string_view, std::string_view> template_index(
    const std::vector<TemplateEntry>& templates) {
    std::unordered_map<std::string_view, std::string_view> index;
    index.reserve(templates.size());
    for (const TemplateEntry& t : templates) {
        index.emplace(t.event_id, trim_trailing(t.raw_template));
    }
    return index;
}

std::string_view lookup_template(
    const std::unordered_map<std::string_view, std::string_view>& index,
    const std::string& event_id, const char* side) {
    const auto it = index.find(event_id);
    if (it == index.end()) {
        throw DataError(std::string(side) + " event '" + event_id + "' has no template");
    }
    return it->second;
}

} // namespace

GroupingOutcome analyze_grouping(const Corpus& corpus) {
    require_labels(corpus);
    const GroupAnalysis analysis = analyze(corpus);
    GroupingOutcome outcome;
    outcome.total_messages = corpus.records.size();
    outcome.correct_messages = analysis.correct_messages;
    outcome.correct_events = analysis.correct_group_ids.size();
    outcome.parsed_event_count = analysis.parsed_groups.size();
    outcome.truth_event_count = analysis.truth_sizes.size();
    return outcome;
}

double grouping_accuracy(const Corpus& corpus) {
    const GroupingOutcome outcome = analyze_grouping(corpus);
    return static_cast<double>(outcome.correct_messages) /
           static_cast<double>(outcome.total_messages);
}

double parsing_accuracy(const Corpus& corpus) {
    require_labels(corpus);
    const auto parsed = template_index(corpus.parsed_templates);
    const auto truth = template_index(corpus.truth_templates);
    std::size_t correct = 0;
    for (const LogRecord& rec : corpus.records) {
        if (lookup_template(parsed, rec.parsed_event, "parsed") ==
            lookup_template(truth, rec.truth_event, "ground-truth")) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(corpus.records.size());
}

double f1_grouping_accuracy(const Corpus& corpus) {
    const GroupingOutcome outcome = analyze_grouping(corpus);
    return harmonic_f1(outcome.correct_events, outcome.parsed_event_count,
                       outcome.truth_event_count);
}

double f1_template_accuracy(const Corpus& corpus) {
    require_labels(corpus);
    const GroupAnalysis analysis = analyze(corpus);
    const auto parsed = template_index(corpus.parsed_templates);
    const auto truth = template_index(corpus.truth_templates);
    std::size_t correct = 0;
    for (std::string_view event_id : analysis.correct_group_ids) {
        const Group& group = analysis.parsed_groups.at(event_id);
        const LogRecord& representative = corpus.records[group.member_rows.front()];
        if (lookup_template(parsed, representative.parsed_event, "parsed") ==
            lookup_template(truth, representative.truth_event, "ground-truth")) {
            ++correct;
        }
    }
    return harmonic_f1(correct, analysis.parsed_groups.size(), analysis.truth_sizes.size());
}

LabeledScores labeled_scores(const Corpus& corpus) {
    LabeledScores scores;
    scores.ga = grouping_accuracy(corpus);
    scores.pa = parsing_accuracy(corpus);
    scores.fga = f1_grouping_accuracy(corpus);
    scores.fta = f1_template_accuracy(corpus);
    return scores;
}

} // namespace logeval::metrics
