#ifndef LOGEVAL_CORPUS_HPP
#define LOGEVAL_CORPUS_HPP

#include "logeval/csv.hpp"
#include "logeval/template_prep.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace logeval {

// One log message with its assignments.  Empty event strings mean "absent".
struct LogRecord {
    std::int64_t line_id = 0;  // 1-based, contiguous within a corpus
    std::string content;
    std::string parsed_event;
    std::string truth_event;
};

struct Corpus {
    std::vector<LogRecord> records;              // file order preserved
    std::vector<TemplateEntry> parsed_templates; // raw only; unique event ids
    std::vector<TemplateEntry> truth_templates;  // populated by attach_ground_truth
    bool has_truth = false;
    std::string placeholder{kDefaultPlaceholder};
};

namespace corpus {

// Column-name mapping for structured log files (Loghub-style defaults).
struct ColumnMap {
    std::string line_id = "LineId";
    std::string content = "Content";
    std::string event_id = "EventId";
    std::string event_template = "EventTemplate";  // optional column
};

// Loads a structured log: one record per row, template set deduplicated by
// event id from the template column when present.  Validates that line ids
// are unique and form a contiguous 1..n range, that contents are non-empty
// after trimming, and that no event id maps to two different template
// strings (a conflict is a hard error reporting both strings and rows).
[[nodiscard]] Corpus load_structured_log(const std::string& path, const ColumnMap& columns = {});
[[nodiscard]] Corpus load_structured_log(const csv::Table& table, const ColumnMap& columns,
                                         const std::string& source);

// Loads a standalone templates file (EventId,EventTemplate by default).
[[nodiscard]] std::vector<TemplateEntry> load_templates(const std::string& path,
                                                        const ColumnMap& columns = {});
[[nodiscard]] std::vector<TemplateEntry> load_templates(const csv::Table& table,
                                                        const ColumnMap& columns,
                                                        const std::string& source);

// Replaces the corpus's parsed template set after validating that every
// referenced event id is covered and ids are unique.
void set_parsed_templates(Corpus& corpus, std::vector<TemplateEntry> templates);

// Copies `truth`'s assignments and templates into `corpus` as the ground
// truth.  Requires identical line id ranges and identical content per line;
// reports the first mismatching line id otherwise.
[[nodiscard]] Corpus attach_ground_truth(Corpus corpus, const Corpus& truth);

// Serializes the parsed side back to the structured-log table layout
// (LineId,Content,EventId,EventTemplate) in record order.
[[nodiscard]] csv::Table to_structured_table(const Corpus& corpus, const ColumnMap& columns = {});

// Serializes a template set to the templates-file layout, in the given order.
[[nodiscard]] csv::Table to_templates_table(const std::vector<TemplateEntry>& templates,
                                            const ColumnMap& columns = {});

} // namespace corpus
} // namespace logeval

#endif // LOGEVAL_CORPUS_HPP
