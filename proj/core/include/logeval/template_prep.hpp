#ifndef LOGEVAL_TEMPLATE_PREP_HPP
#define LOGEVAL_TEMPLATE_PREP_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace logeval {

inline constexpr std::string_view kDefaultPlaceholder = "<*>";

class MatchPattern;
struct TemplateEntry;
struct PreparedTemplateSet;

namespace prep {
MatchPattern compile_pattern(std::string_view, std::string_view);
PreparedTemplateSet prepare_templates(std::vector<TemplateEntry>, std::string_view);
} // namespace prep

// Anchored template pattern.  A template with k placeholders compiles to k+1
// literal segments; a message matches when the first segment is a prefix, the
// last segment is a suffix, and the middle segments occur left to right in
// between.  Captures are assigned non-greedily (each variable segment is the
// shortest one consistent with the earliest occurrence of the next literal),
// which is exactly the assignment a non-greedy "(.*?)" regex produces.
class MatchPattern {
public:
    MatchPattern() = default;

    // `text` is the equivalent regular-expression source: literals with every
    // character outside [A-Za-z0-9_ ] backslash-escaped and each placeholder
    // rendered as "(.*?)".
    [[nodiscard]] const std::string& text() const { return text_; }
    [[nodiscard]] std::size_t capture_count() const { return literals_.size() - 1; }
    [[nodiscard]] const std::vector<std::string>& literals() const { return literals_; }

    // Whole-message match test.
    [[nodiscard]] bool full_match(std::string_view message) const;

    // Whole-message match with capture extraction.  On success, `out` holds
    // capture_count() views into `message`; on failure `out` is left empty.
    [[nodiscard]] bool captures(std::string_view message,
                                std::vector<std::string_view>& out) const;

private:
    friend MatchPattern prep::compile_pattern(std::string_view, std::string_view);
    std::vector<std::string> literals_;  // k+1 segments, possibly empty strings
    std::string text_;
};

// An event template in every stage of preparation.  Loading fills event_id
// and raw_template; prepare_templates fills the rest.
struct TemplateEntry {
    std::string event_id;
    std::string raw_template;
    std::string prepared_template;
    MatchPattern match_pattern;
    std::vector<std::string> constant_tokens;
    std::size_t sorted_index = 0;
};

// Template set in canonical order (byte-wise lexicographic by
// prepared_template, ties broken by event_id), ready for evaluation.
struct PreparedTemplateSet {
    std::vector<TemplateEntry> entries;  // position == sorted_index
    std::string placeholder{kDefaultPlaceholder};

    [[nodiscard]] const TemplateEntry* find(std::string_view event_id) const;
    [[nodiscard]] std::optional<std::size_t> index_of(std::string_view event_id) const;

private:
    friend PreparedTemplateSet prep::prepare_templates(std::vector<TemplateEntry>,
                                                       std::string_view);
    std::unordered_map<std::string, std::size_t> index_by_event_;
};

namespace prep {

// Replaces every maximal digit run that has a word boundary on both sides
// (word characters being [A-Za-z0-9_]) with the placeholder; all other
// characters pass through unchanged.  "v2.1 ready" -> "v2.<*> ready": the "2"
// keeps its place because a letter precedes it, the "1" is replaced because
// "." and " " delimit it.
[[nodiscard]] std::string filter_numerics(std::string_view raw_template,
                                          std::string_view placeholder = kDefaultPlaceholder);

// Collapses adjacent placeholder occurrences with nothing in between
// ("<*><*>" -> "<*>").  Applied after numeric filtering so replacement never
// creates degenerate back-to-back variable segments.
[[nodiscard]] std::string collapse_adjacent_placeholders(
    std::string_view text, std::string_view placeholder = kDefaultPlaceholder);

// Compiles a prepared template into an anchored pattern with non-greedy
// capture semantics; see MatchPattern.
[[nodiscard]] MatchPattern compile_pattern(std::string_view prepared_template,
                                           std::string_view placeholder = kDefaultPlaceholder);

// Splits a prepared template on placeholder occurrences and runs of
// whitespace; placeholders themselves are dropped.  "Bluetooth: <*> (ver <*>)"
// -> ["Bluetooth:", "(ver", ")"].
[[nodiscard]] std::vector<std::string> tokenize_template(
    std::string_view prepared_template, std::string_view placeholder = kDefaultPlaceholder);

// Runs the full preparation pipeline: numeric filtering, placeholder
// collapsing, canonical sorting, pattern compilation, and tokenization.
// Throws DataError on an empty template set or duplicate event ids.
[[nodiscard]] PreparedTemplateSet prepare_templates(
    std::vector<TemplateEntry> templates, std::string_view placeholder = kDefaultPlaceholder);

} // namespace prep
} // namespace logeval

#endif // LOGEVAL_TEMPLATE_PREP_HPP
