#ifndef LOGEVAL_CORRECTIONS_HPP
#define LOGEVAL_CORRECTIONS_HPP

#include "logeval/corpus.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace logeval::corrections {

// The ten template correction rules.  Enumerator order is the canonical
// application order: whitespace normalization first, token-class
// substitutions next, placeholder consolidation last.
enum class RuleId {
    MS,   // multiple spaces -> single space, trim ends
    BL,   // boolean literals -> placeholder
    US,   // user-defined strings -> placeholder
    DG,   // pure digit tokens -> placeholder
    HEX,  // hexadecimal tokens -> placeholder
    PS,   // path-like tokens -> placeholder
    VA,   // value side of key=value -> placeholder
    MT,   // tokens mixing placeholder and other text -> placeholder
    DV,   // delimiter-separated placeholder runs -> one placeholder
    CV,   // adjacent placeholders -> one placeholder
};

[[nodiscard]] std::string_view rule_name(RuleId id);
[[nodiscard]] RuleId rule_from_name(std::string_view name);  // throws DataError when unknown

inline constexpr std::string_view kDefaultDelimiters = ".:-#/+,";

struct RuleParams {
    std::string placeholder{kDefaultPlaceholder};
    // Delimiters the DV rule collapses across.  Implementations of the same
    // correction disagree here (dots only vs a wider set), so it is a profile
    // parameter.
    std::string delimiters{kDefaultDelimiters};
    // Delimiters the MT rule treats as structure rather than "other text".
    // Fixed to the full set by default so MT never absorbs what DV's
    // delimiter choice is meant to distinguish.
    std::string mt_delimiters{kDefaultDelimiters};
    std::vector<std::string> user_strings;  // US dictionary; empty by default
    unsigned hex_prefixed_min = 4;          // min hex digits after "0x"
    unsigned hex_bare_min = 8;              // min length of a bare hex token
};

struct CorrectionProfile {
    std::string name;
    std::vector<RuleId> rules;  // canonical order, no duplicates
    RuleParams params;
};

// Applies one rule once.  Every rule is idempotent.
[[nodiscard]] std::string apply_rule(std::string_view tpl, RuleId rule,
                                     const RuleParams& params = {});

struct ProfileResult {
    // Surviving templates, one per distinct corrected string, sorted by event
    // id.  A merged event keeps the lexicographically smallest member id.
    std::vector<TemplateEntry> templates;
    // Every input event id -> surviving event id (identity when unmerged).
    std::map<std::string, std::string> merge_map;
    std::size_t merged_event_count = 0;  // inputs that lost their id

    [[nodiscard]] const std::string& final_template_of(const std::string& original_event) const;
};

// Rewrites every template with the profile's rules in canonical order,
// iterated to a fixed point (bounded sweeps), then merges templates that
// became string-identical.
[[nodiscard]] ProfileResult apply_profile(const std::vector<TemplateEntry>& templates,
                                          const CorrectionProfile& profile);

// Applies a profile to one side of a corpus: templates rewritten and merged,
// record event ids remapped.  Group memberships only ever merge, so total
// message counts are preserved.
[[nodiscard]] Corpus apply_profile_to_parsed(const Corpus& corpus,
                                             const CorrectionProfile& profile,
                                             ProfileResult* result_out = nullptr);
[[nodiscard]] Corpus apply_profile_to_truth(const Corpus& corpus,
                                            const CorrectionProfile& profile,
                                            ProfileResult* result_out = nullptr);

// Built-in ground-truth version profiles:
//   v1: no rules (the original labels)
//   v2: MS,BL,US,DG,PS,MT,DV,CV with DV delimiters {.}
//   v3: v2 plus VA, DV delimiters {.}
//   v4: DV,CV with the full delimiter set
//   v5: MS,DG,HEX,MT,DV,CV,VA with the full delimiter set
// Throws UsageError for other names.
[[nodiscard]] CorrectionProfile builtin_profile(std::string_view name);
[[nodiscard]] bool is_builtin_profile(std::string_view name);

// Loads a profile from a JSON file: {"name", "rules": ["MS",...],
// "delimiters", "mt_delimiters", "user_strings", "hex_prefixed_min",
// "hex_bare_min", "placeholder"}; all fields but "rules" optional.
[[nodiscard]] CorrectionProfile load_profile_file(const std::string& path);

struct VersionDiff {
    double template_diff_pct = 0.0;  // % of original events whose final template differs
    double message_diff_pct = 0.0;   // % of messages whose assigned template differs
};

// Compares two corrected versions of the same original corpus.
[[nodiscard]] VersionDiff version_diff(const Corpus& original, const ProfileResult& a,
                                       const ProfileResult& b);

} // namespace logeval::corrections

#endif // LOGEVAL_CORRECTIONS_HPP
