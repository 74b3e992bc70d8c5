#ifndef LOGEVAL_LABELED_METRICS_HPP
#define LOGEVAL_LABELED_METRICS_HPP

#include "logeval/corpus.hpp"

#include <cstddef>

namespace logeval::metrics {

// Counts shared by the grouping-based metrics.  An event (parsed group) is
// "correct" when its set of line ids is exactly the set of line ids of one
// ground-truth group; a message is "correct" when it belongs to such a group.
struct GroupingOutcome {
    std::size_t correct_messages = 0;
    std::size_t total_messages = 0;
    std::size_t correct_events = 0;
    std::size_t parsed_event_count = 0;  // distinct parsed events among records
    std::size_t truth_event_count = 0;   // distinct truth events among records
};

struct LabeledScores {
    double ga = 0.0;
    double pa = 0.0;
    double fga = 0.0;
    double fta = 0.0;
};

// Group-set analysis behind GA and FGA.  Requires every record to carry both
// a parsed and a truth event.
[[nodiscard]] GroupingOutcome analyze_grouping(const Corpus& corpus);

// GA: fraction of messages whose parsed group contains exactly the messages
// of their ground-truth group.
[[nodiscard]] double grouping_accuracy(const Corpus& corpus);

// PA: fraction of messages whose parsed template string is identical to the
// ground-truth template string (trailing whitespace ignored on both sides).
[[nodiscard]] double parsing_accuracy(const Corpus& corpus);

// FGA: harmonic mean of grouping precision (correct events / parsed events)
// and grouping recall (correct events / truth events); 0 when both are 0.
[[nodiscard]] double f1_grouping_accuracy(const Corpus& corpus);

// FTA: as FGA, but an event also needs its template string to equal the
// ground-truth template (trailing whitespace ignored).
[[nodiscard]] double f1_template_accuracy(const Corpus& corpus);

// All four in one call.
[[nodiscard]] LabeledScores labeled_scores(const Corpus& corpus);

} // namespace logeval::metrics

#endif // LOGEVAL_LABELED_METRICS_HPP
