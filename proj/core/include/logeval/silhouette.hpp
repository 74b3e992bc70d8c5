#ifndef LOGEVAL_SILHOUETTE_HPP
#define LOGEVAL_SILHOUETTE_HPP

#include "logeval/corpus.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace logeval::silhouette {

// How the "nearest other template" distance is obtained.
enum class NeighborMode {
    // Neighbors at sorted_index ± 1 in the canonically sorted template list;
    // boundary templates use their single existing neighbor.  Default.
    sorted_neighbor,
    // Minimum over all other templates.  Slower; exists as a testing oracle
    // for the sorted-neighbor approximation.
    exact_neighbor,
};

struct MessageScore {
    std::int64_t line_id = 0;
    bool matched = false;
    std::optional<std::size_t> dist_in;
    std::optional<std::size_t> dist_out;
    double coefficient = 0.0;  // in [-1, 1]; exactly 0 when unmatched
};

struct EventScore {
    std::string event_id;
    std::size_t size = 0;  // number of assigned records
    double emss = 0.0;     // mean member coefficient, in [-1, 1]
};

struct SilhouetteResult {
    double pmss = 0.0;                    // unweighted mean of emss over scored events
    std::vector<EventScore> event_scores; // events with >= 1 record, in template sort order
    std::vector<MessageScore> message_scores;  // filled only when requested
    double matched_fraction = 0.0;
    std::size_t template_count = 0;       // all parsed templates (m)
    std::size_t scored_event_count = 0;   // templates with >= 1 assigned record
    std::vector<std::string> empty_event_ids;  // warning: excluded from the average
};

// Per-message coefficient from its two distances: (out - in) / max(out, in),
// defined as 0 when both distances are 0 (a point at zero distance to two
// medoids has no preference).
[[nodiscard]] double coefficient_from_distances(std::size_t dist_in, std::size_t dist_out);

// Whole-message matchability against one template's anchored pattern.
[[nodiscard]] bool matchable(std::string_view message, const TemplateEntry& entry);

// Scores a single record against a prepared template set.  Throws
// ComputationUndefined when the set has fewer than two templates and
// DataError when the record's parsed event is unknown.
[[nodiscard]] MessageScore message_coefficient(const LogRecord& record,
                                               const PreparedTemplateSet& templates,
                                               NeighborMode mode = NeighborMode::sorted_neighbor);

// Full evaluation: prepares the corpus's parsed templates, scores every
// record (in parallel across `jobs` workers; 0 means hardware concurrency),
// and aggregates EMSS per event and PMSS across events.  Events with zero
// assigned records are excluded from the average and listed as warnings.
// Aggregation order is fixed by record order, so results are bit-identical
// for any job count.  Throws ComputationUndefined when fewer than two
// templates exist or no event has any assigned record.
[[nodiscard]] SilhouetteResult evaluate_pmss(const Corpus& corpus,
                                             NeighborMode mode = NeighborMode::sorted_neighbor,
                                             bool keep_message_scores = false,
                                             unsigned jobs = 1);

} // namespace logeval::silhouette

#endif // LOGEVAL_SILHOUETTE_HPP
