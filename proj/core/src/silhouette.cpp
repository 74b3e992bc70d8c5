#include "logeval/silhouette.hpp"

#include "logeval/errors.hpp"
#include "logeval/token_distance.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>

namespace logeval::silhouette {

namespace {

std::size_t abs_size_diff(std::size_t a, std::size_t b) {
    return a > b ? a - b : b - a;
}

struct ScoreWorkspace {
    std::vector<std::string_view> message_tokens;
    std::vector<std::size_t> dp_buffer;
};

// Core of Steps 2-4 for one record whose template index is already resolved.
MessageScore score_record(const LogRecord& record, std::size_t own_index,
                          const PreparedTemplateSet& templates, NeighborMode mode,
                          ScoreWorkspace& ws) {
    MessageScore score;
    score.line_id = record.line_id;
    const TemplateEntry& own = templates.entries[own_index];
    if (!own.match_pattern.full_match(record.content)) {
        return score;  // unmatched: coefficient 0, distances absent
    }
    score.matched = true;
    dist::tokenize_message(record.content, own, ws.message_tokens);
    const std::size_t dist_in =
        dist::levenshtein(ws.message_tokens, own.constant_tokens, ws.dp_buffer);

    // Smallest distance to another template's constant tokens.  The length
    // lower bound |len(a)-len(b)| <= levenshtein(a,b) skips candidates that
    // cannot beat the current minimum.
    std::size_t dist_out = 0;
    bool have_out = false;
    auto consider = [&](std::size_t candidate_index) {
        const TemplateEntry& other = templates.entries[candidate_index];
        if (have_out &&
            abs_size_diff(ws.message_tokens.size(), other.constant_tokens.size()) >= dist_out) {
            return;
        }
        const std::size_t d =
            dist::levenshtein(ws.message_tokens, other.constant_tokens, ws.dp_buffer);
        if (!have_out || d < dist_out) {
            dist_out = d;
            have_out = true;
        }
    };
    if (mode == NeighborMode::sorted_neighbor) {
        if (own_index > 0) consider(own_index - 1);
        if (own_index + 1 < templates.entries.size()) consider(own_index + 1);
    } else {
        for (std::size_t j = 0; j < templates.entries.size(); ++j) {
            if (j != own_index) consider(j);
        }
    }
    score.dist_in = dist_in;
    score.dist_out = dist_out;
    score.coefficient = coefficient_from_distances(dist_in, dist_out);
    return score;
}

} // namespace

double coefficient_from_distances(std::size_t dist_in, std::size_t dist_out) {
    const std::size_t denom = std::max(dist_in, dist_out);
    if (denom == 0) return 0.0;
    return (static_cast<double>(dist_out) - static_cast<double>(dist_in)) /
           static_cast<double>(denom);
}

bool matchable(std::string_view message, const TemplateEntry& entry) {
    return entry.match_pattern.full_match(message);
}

MessageScore message_coefficient(const LogRecord& record, const PreparedTemplateSet& templates,
                                 NeighborMode mode) {
    if (templates.entries.size() < 2) {
        throw ComputationUndefined(
            "silhouette separation is undefined for a single template (got " +
            std::to_string(templates.entries.size()) + ")");
    }
    const auto own_index = templates.index_of(record.parsed_event);
    if (!own_index) {
        throw DataError("line " + std::to_string(record.line_id) + ": parsed event '" +
                        record.parsed_event + "' is not in the template set");
    }
    ScoreWorkspace ws;
    return score_record(record, *own_index, templates, mode, ws);
}

SilhouetteResult evaluate_pmss(const Corpus& corpus, NeighborMode mode,
                               bool keep_message_scores, unsigned jobs) {
    const PreparedTemplateSet templates =
        prep::prepare_templates(corpus.parsed_templates, corpus.placeholder);
    if (templates.entries.size() < 2) {
        throw ComputationUndefined(
            "PMSS requires at least 2 parsed templates, got " +
            std::to_string(templates.entries.size()));
    }

    const std::size_t n = corpus.records.size();
    std::vector<std::size_t> record_template(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = templates.index_of(corpus.records[i].parsed_event);
        if (!idx) {
            throw DataError("line " + std::to_string(corpus.records[i].line_id) +
                            ": parsed event '" + corpus.records[i].parsed_event +
                            "' is not in the template set");
        }
        record_template[i] = *idx;
    }

    std::vector<MessageScore> scores(n);
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(jobs, n == 0 ? 1 : n));

    // Each worker fills a disjoint contiguous slice of `scores`; all shared
    // inputs are immutable, so results do not depend on scheduling.
    auto run_range = [&](std::size_t begin, std::size_t end) {
        ScoreWorkspace ws;
        for (std::size_t i = begin; i < end; ++i) {
            scores[i] =
                score_record(corpus.records[i], record_template[i], templates, mode, ws);
        }
    };
    if (workers == 1) {
        run_range(0, n);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> failures(workers);
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            pool.emplace_back([&, w, begin, end] {
                try {
                    run_range(begin, end);
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
        for (std::thread& t : pool) t.join();
        for (const std::exception_ptr& failure : failures) {
            if (failure) std::rethrow_exception(failure);
        }
    }

    // Deterministic sequential aggregation in record order.
    const std::size_t m = templates.entries.size();
    std::vector<double> sums(m, 0.0);
    std::vector<std::size_t> counts(m, 0);
    std::size_t matched = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sums[record_template[i]] += scores[i].coefficient;
        counts[record_template[i]] += 1;
        if (scores[i].matched) ++matched;
    }

    SilhouetteResult result;
    result.template_count = m;
    double emss_total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (counts[j] == 0) {
            result.empty_event_ids.push_back(templates.entries[j].event_id);
            continue;
        }
        EventScore event;
        event.event_id = templates.entries[j].event_id;
        event.size = counts[j];
        event.emss = sums[j] / static_cast<double>(counts[j]);
        emss_total += event.emss;
        result.event_scores.push_back(std::move(event));
    }
    result.scored_event_count = result.event_scores.size();
    if (result.scored_event_count == 0) {
        throw ComputationUndefined("PMSS is undefined: no event has any assigned record");
    }
    result.pmss = emss_total / static_cast<double>(result.scored_event_count);
    result.matched_fraction =
        n == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(n);
    if (keep_message_scores) {
        result.message_scores = std::move(scores);
    }
    return result;
}

} // namespace logeval::silhouette
