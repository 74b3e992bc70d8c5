#include "logeval/corrections.hpp"

#include "logeval/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace logeval::corrections {

namespace {

constexpr std::array<std::string_view, 10> kRuleNames = {
    "MS", "BL", "US", "DG", "HEX", "PS", "VA", "MT", "DV", "CV"};

constexpr std::size_t kMaxSweeps = 10;

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool ci_equals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i]))) {
            return false;
        }
    }
    return true;
}

bool is_boolean_literal(std::string_view v) {
    return ci_equals(v, "true") || ci_equals(v, "false");
}

bool is_pure_digits(std::string_view v) {
    return !v.empty() && std::all_of(v.begin(), v.end(), [](unsigned char c) {
        return c >= '0' && c <= '9';
    });
}

bool is_hex_digit(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

bool all_hex(std::string_view v) {
    return !v.empty() && std::all_of(v.begin(), v.end(), is_hex_digit);
}

// key=value split at the first '=', key non-empty.
struct KeyValue {
    std::string_view key;
    std::string_view value;
};

std::optional<KeyValue> split_key_value(std::string_view token) {
    const std::size_t eq = token.find('=');
    if (eq == std::string_view::npos || eq == 0) return std::nullopt;
    return KeyValue{token.substr(0, eq), token.substr(eq + 1)};
}

// Identifier shape accepted for VA/MT keys: letters, digits, underscore,
// dot, dash.
bool is_identifier_key(std::string_view key) {
    return !key.empty() && std::all_of(key.begin(), key.end(), [](unsigned char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '_' || c == '.' || c == '-';
    });
}

// Rewrites each whitespace-delimited token with `fn`, preserving the
// separating whitespace verbatim.
template <class Fn>
std::string map_tokens(std::string_view tpl, Fn&& fn) {
    std::string out;
    out.reserve(tpl.size());
    std::size_t i = 0;
    while (i < tpl.size()) {
        if (is_space(tpl[i])) {
            out.push_back(tpl[i]);
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < tpl.size() && !is_space(tpl[i])) ++i;
        out += fn(tpl.substr(start, i - start));
    }
    return out;
}

std::string apply_ms(std::string_view tpl) {
    std::string out;
    out.reserve(tpl.size());
    bool pending_space = false;
    for (char c : tpl) {
        if (c == ' ') {
            pending_space = !out.empty();  // leading spaces are dropped
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;  // trailing run never flushed
}

std::string apply_bl(std::string_view tpl, const RuleParams& p) {
    return map_tokens(tpl, [&](std::string_view token) -> std::string {
        if (is_boolean_literal(token)) return p.placeholder;
        if (const auto kv = split_key_value(token); kv && is_boolean_literal(kv->value)) {
            return std::string(kv->key) + "=" + p.placeholder;
        }
        return std::string(token);
    });
}

std::string apply_us(std::string_view tpl, const RuleParams& p) {
    return map_tokens(tpl, [&](std::string_view token) -> std::string {
        const bool listed = std::find(p.user_strings.begin(), p.user_strings.end(), token) !=
                            p.user_strings.end();
        return listed ? p.placeholder : std::string(token);
    });
}

std::string apply_dg(std::string_view tpl, const RuleParams& p) {
    return map_tokens(tpl, [&](std::string_view token) -> std::string {
        if (is_pure_digits(token)) return p.placeholder;
        if (const auto kv = split_key_value(token); kv && is_pure_digits(kv->value)) {
            return std::string(kv->key) + "=" + p.placeholder;
        }
        return std::string(token);
    });
}

std::string apply_hex(std::string_view tpl, const RuleParams& p) {
    return map_tokens(tpl, [&](std::string_view token) -> std::string {
        if (token.size() > 2 && token[0] == '0' && (token[1] == 'x' || token[1] == 'X')) {
            const std::string_view digits = token.substr(2);
            if (digits.size() >= p.hex_prefixed_min && all_hex(digits)) return p.placeholder;
        }
        const bool has_decimal_digit = std::any_of(
            token.begin(), token.end(), [](unsigned char c) { return c >= '0' && c <= '9'; });
        if (token.size() >= p.hex_bare_min && all_hex(token) && has_decimal_digit) {
            return p.placeholder;
        }
        return std::string(token);
    });
}

std::string apply_ps(std::string_view tpl, const RuleParams& p) {
    return map_tokens(tpl, [&](std::string_view token) -> std::string {
        std::size_t prefix = 0;
        if (token.rfind("./", 0) == 0) {
            prefix = 2;
        } else if (!token.empty() && token[0] == '/') {
            prefix = 1;
        } else {
            return std::string(token);
        }
        return token.find('/', prefix) != std::string_view::npos ? p.placeholder
                                                                 : std::string(token);
    });
}

std::string apply_va(std::string_view tpl, const RuleParams& p) {
    return map_tokens(tpl, [&](std::string_view token) -> std::string {
        // The empty value is included ("logname=" -> "logname=<*>"), so the
        // key=value shape is detected on the raw token, not split_key_value.
        const std::size_t eq = token.find('=');
        if (eq == std::string_view::npos || eq == 0) return std::string(token);
        const std::string_view key = token.substr(0, eq);
        if (!is_identifier_key(key)) return std::string(token);
        return std::string(key) + "=" + p.placeholder;
    });
}

std::string apply_mt(std::string_view tpl, const RuleParams& p) {
    return map_tokens(tpl, [&](std::string_view token) -> std::string {
        std::string prefix;
        std::string_view body = token;
        if (const auto kv = split_key_value(token); kv && is_identifier_key(kv->key)) {
            prefix = std::string(kv->key) + "=";
            body = kv->value;
        }
        if (body.empty() || body == p.placeholder) return std::string(token);
        if (body.find(p.placeholder) == std::string_view::npos) return std::string(token);
        // Residue = body with every placeholder occurrence removed.
        std::string residue;
        std::size_t i = 0;
        while (i < body.size()) {
            if (body.compare(i, p.placeholder.size(), p.placeholder) == 0) {
                i += p.placeholder.size();
            } else {
                residue.push_back(body[i]);
                ++i;
            }
        }
        if (residue.empty()) return std::string(token);  // consecutive placeholders: CV's job
        const bool only_delimiters =
            std::all_of(residue.begin(), residue.end(), [&](char c) {
                return p.mt_delimiters.find(c) != std::string::npos;
            });
        if (only_delimiters) return std::string(token);  // delimiter-separated: DV's job
        return prefix + p.placeholder;
    });
}

std::string apply_dv(std::string_view tpl, const RuleParams& p) {
    const std::string& ph = p.placeholder;
    std::string out;
    out.reserve(tpl.size());
    std::size_t i = 0;
    while (i < tpl.size()) {
        if (tpl.compare(i, ph.size(), ph) == 0) {
            std::size_t j = i + ph.size();
            while (j < tpl.size() && p.delimiters.find(tpl[j]) != std::string::npos &&
                   tpl.compare(j + 1, ph.size(), ph) == 0) {
                j += 1 + ph.size();
            }
            out += ph;
            i = j;
        } else {
            out.push_back(tpl[i]);
            ++i;
        }
    }
    return out;
}

std::string apply_cv(std::string_view tpl, const RuleParams& p) {
    const std::string& ph = p.placeholder;
    std::string out;
    out.reserve(tpl.size());
    std::size_t i = 0;
    while (i < tpl.size()) {
        if (tpl.compare(i, ph.size(), ph) == 0) {
            i += ph.size();
            while (tpl.compare(i, ph.size(), ph) == 0) i += ph.size();
            out += ph;
        } else {
            out.push_back(tpl[i]);
            ++i;
        }
    }
    return out;
}

std::vector<RuleId> normalize_rules(std::vector<RuleId> rules) {
    std::sort(rules.begin(), rules.end());
    rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
    return rules;
}

std::string correct_to_fixed_point(const std::string& raw, const CorrectionProfile& profile) {
    std::string current = raw;
    for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
        std::string next = current;
        for (const RuleId rule : profile.rules) {
            next = apply_rule(next, rule, profile.params);
        }
        if (next == current) return current;
        current = std::move(next);
    }
    // Each rule is idempotent and the pipeline stabilizes within a couple of
    // sweeps; hitting the bound indicates a defective rule implementation.
    throw std::logic_error("correction profile '" + profile.name +
                           "' did not reach a fixed point within " +
                           std::to_string(kMaxSweeps) + " sweeps on: " + raw);
}

Corpus apply_to_side(const Corpus& corpus, const CorrectionProfile& profile, bool truth_side,
                     ProfileResult* result_out) {
    const std::vector<TemplateEntry>& templates =
        truth_side ? corpus.truth_templates : corpus.parsed_templates;
    if (truth_side && !corpus.has_truth) {
        throw DataError("corpus has no ground truth to correct");
    }
    ProfileResult result = apply_profile(templates, profile);
    Corpus out = corpus;
    auto remap = [&](std::string& event_id) {
        const auto it = result.merge_map.find(event_id);
        if (it == result.merge_map.end()) {
            throw DataError("record references event '" + event_id +
                            "' absent from the corrected template set");
        }
        event_id = it->second;
    };
    for (LogRecord& rec : out.records) {
        remap(truth_side ? rec.truth_event : rec.parsed_event);
    }
    (truth_side ? out.truth_templates : out.parsed_templates) = result.templates;
    if (result_out != nullptr) *result_out = std::move(result);
    return out;
}

} // namespace

std::string_view rule_name(RuleId id) {
    return kRuleNames[static_cast<std::size_t>(id)];
}

RuleId rule_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kRuleNames.size(); ++i) {
        if (ci_equals(kRuleNames[i], name)) return static_cast<RuleId>(i);
    }
    throw DataError("unknown correction rule '" + std::string(name) + "'");
}

std::string apply_rule(std::string_view tpl, RuleId rule, const RuleParams& params) {
    switch (rule) {
    case RuleId::MS: return apply_ms(tpl);
    case RuleId::BL: return apply_bl(tpl, params);
    case RuleId::US: return apply_us(tpl, params);
    case RuleId::DG: return apply_dg(tpl, params);
    case RuleId::HEX: return apply_hex(tpl, params);
    case RuleId::PS: return apply_ps(tpl, params);
    case RuleId::VA: return apply_va(tpl, params);
    case RuleId::MT: return apply_mt(tpl, params);
    case RuleId::DV: return apply_dv(tpl, params);
    case RuleId::CV: return apply_cv(tpl, params);
    }
    throw std::logic_error("unhandled rule id");
}

const std::string& ProfileResult::final_template_of(const std::string& original_event) const {
    const auto mapped = merge_map.find(original_event);
    if (mapped == merge_map.end()) {
        throw DataError("event '" + original_event + "' is not covered by this correction");
    }
    for (const TemplateEntry& t : templates) {
        if (t.event_id == mapped->second) return t.raw_template;
    }
    throw std::logic_error("merge map points at missing template '" + mapped->second + "'");
}

ProfileResult apply_profile(const std::vector<TemplateEntry>& templates,
                            const CorrectionProfile& profile) {
    ProfileResult result;
    // corrected string -> surviving (smallest) event id
    std::unordered_map<std::string, std::string> survivor_by_string;
    std::vector<std::pair<std::string, std::string>> corrected;  // (event id, string)
    corrected.reserve(templates.size());
    for (const TemplateEntry& t : templates) {
        corrected.emplace_back(t.event_id, correct_to_fixed_point(t.raw_template, profile));
    }
    for (const auto& [event_id, text] : corrected) {
        auto [it, inserted] = survivor_by_string.try_emplace(text, event_id);
        if (!inserted && event_id < it->second) it->second = event_id;
    }
    for (const auto& [event_id, text] : corrected) {
        const std::string& survivor = survivor_by_string.at(text);
        result.merge_map.emplace(event_id, survivor);
        if (survivor != event_id) ++result.merged_event_count;
        if (survivor == event_id) {
            TemplateEntry entry;
            entry.event_id = event_id;
            entry.raw_template = text;
            result.templates.push_back(std::move(entry));
        }
    }
    std::sort(result.templates.begin(), result.templates.end(),
              [](const TemplateEntry& a, const TemplateEntry& b) {
                  return a.event_id < b.event_id;
              });
    return result;
}

Corpus apply_profile_to_parsed(const Corpus& corpus, const CorrectionProfile& profile,
                               ProfileResult* result_out) {
    return apply_to_side(corpus, profile, /*truth_side=*/false, result_out);
}

Corpus apply_profile_to_truth(const Corpus& corpus, const CorrectionProfile& profile,
                              ProfileResult* result_out) {
    return apply_to_side(corpus, profile, /*truth_side=*/true, result_out);
}

bool is_builtin_profile(std::string_view name) {
    return ci_equals(name, "v1") || ci_equals(name, "v2") || ci_equals(name, "v3") ||
           ci_equals(name, "v4") || ci_equals(name, "v5");
}

CorrectionProfile builtin_profile(std::string_view name) {
    CorrectionProfile profile;
    if (ci_equals(name, "v1")) {
        profile.name = "v1";
    } else if (ci_equals(name, "v2")) {
        profile.name = "v2";
        profile.rules = {RuleId::MS, RuleId::BL, RuleId::US, RuleId::DG,
                         RuleId::PS, RuleId::MT, RuleId::DV, RuleId::CV};
        profile.params.delimiters = ".";
    } else if (ci_equals(name, "v3")) {
        profile = builtin_profile("v2");
        profile.name = "v3";
        profile.rules.push_back(RuleId::VA);
    } else if (ci_equals(name, "v4")) {
        profile.name = "v4";
        profile.rules = {RuleId::DV, RuleId::CV};
    } else if (ci_equals(name, "v5")) {
        profile.name = "v5";
        profile.rules = {RuleId::MS, RuleId::DG, RuleId::HEX, RuleId::MT,
                         RuleId::DV, RuleId::CV, RuleId::VA};
    } else {
        throw UsageError("unknown profile '" + std::string(name) +
                         "' (built-ins: v1, v2, v3, v4, v5)");
    }
    profile.rules = normalize_rules(std::move(profile.rules));
    return profile;
}

CorrectionProfile load_profile_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError(path + ": cannot open profile file");
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": invalid profile JSON: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("rules") || !doc["rules"].is_array()) {
        throw DataError(path + ": profile JSON must be an object with a \"rules\" array");
    }
    CorrectionProfile profile;
    try {
        profile.name = doc.value("name", std::filesystem::path(path).stem().string());
        for (const auto& rule : doc["rules"]) {
            if (!rule.is_string()) {
                throw DataError(path + ": rule names must be strings");
            }
            profile.rules.push_back(rule_from_name(rule.get<std::string>()));
        }
        profile.rules = normalize_rules(std::move(profile.rules));
        profile.params.placeholder = doc.value("placeholder", profile.params.placeholder);
        profile.params.delimiters = doc.value("delimiters", profile.params.delimiters);
        profile.params.mt_delimiters =
            doc.value("mt_delimiters", profile.params.mt_delimiters);
        if (doc.contains("user_strings")) {
            if (!doc["user_strings"].is_array()) {
                throw DataError(path + ": \"user_strings\" must be an array");
            }
            for (const auto& s : doc["user_strings"]) {
                profile.params.user_strings.push_back(s.get<std::string>());
            }
        }
        profile.params.hex_prefixed_min =
            doc.value("hex_prefixed_min", profile.params.hex_prefixed_min);
        profile.params.hex_bare_min = doc.value("hex_bare_min", profile.params.hex_bare_min);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": malformed profile field: " + e.what());
    }
    if (profile.params.hex_prefixed_min == 0 || profile.params.hex_bare_min == 0) {
        throw DataError(path + ": hex length thresholds must be at least 1");
    }
    if (profile.params.placeholder.empty()) {
        throw DataError(path + ": placeholder must be non-empty");
    }
    return profile;
}

VersionDiff version_diff(const Corpus& original, const ProfileResult& a,
                         const ProfileResult& b) {
    if (original.parsed_templates.empty()) {
        throw DataError("version_diff: original corpus has no templates");
    }
    std::unordered_map<std::string_view, bool> event_differs;
    std::size_t differing_events = 0;
    for (const TemplateEntry& t : original.parsed_templates) {
        const bool differs = a.final_template_of(t.event_id) != b.final_template_of(t.event_id);
        event_differs.emplace(t.event_id, differs);
        if (differs) ++differing_events;
    }
    std::size_t differing_messages = 0;
    for (const LogRecord& rec : original.records) {
        const auto it = event_differs.find(rec.parsed_event);
        if (it == event_differs.end()) {
            throw DataError("version_diff: record event '" + rec.parsed_event +
                            "' is not aligned with the original template set");
        }
        if (it->second) ++differing_messages;
    }
    VersionDiff diff;
    diff.template_diff_pct =
        100.0 * static_cast<double>(differing_events) /
        static_cast<double>(original.parsed_templates.size());
    diff.message_diff_pct =
        original.records.empty()
            ? 0.0
            : 100.0 * static_cast<double>(differing_messages) /
                  static_cast<double>(original.records.size());
    return diff;
}

} // namespace logeval::corrections
