#include "logeval/template_prep.hpp"

#include "logeval/errors.hpp"

#include <algorithm>
#include <cctype>

namespace logeval {

namespace {

bool is_word_char(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_';
}

bool is_space_char(unsigned char c) {
    return std::isspace(c) != 0;
}

// Appends each whitespace-separated token of `segment` to `out`.
template <class Push>
void split_blank_runs(std::string_view segment, Push&& push) {
    std::size_t i = 0;
    while (i < segment.size()) {
        while (i < segment.size() && is_space_char(static_cast<unsigned char>(segment[i]))) ++i;
        std::size_t start = i;
        while (i < segment.size() && !is_space_char(static_cast<unsigned char>(segment[i]))) ++i;
        if (i > start) push(segment.substr(start, i - start));
    }
}

} // namespace

bool MatchPattern::full_match(std::string_view message) const {
    static thread_local std::vector<std::string_view> scratch;
    return captures(message, scratch);
}

bool MatchPattern::captures(std::string_view message,
                            std::vector<std::string_view>& out) const {
    out.clear();
    const std::size_t k = literals_.size() - 1;  // number of captures
    const std::string& first = literals_.front();
    if (k == 0) {
        return message == first;
    }
    if (message.size() < first.size() ||
        message.compare(0, first.size(), first) != 0) {
        return false;
    }
    std::size_t pos = first.size();
    out.reserve(k);
    for (std::size_t i = 1; i < k; ++i) {
        const std::string& lit = literals_[i];
        // Empty middle literals cannot arise from placeholder-collapsed
        // templates, but arbitrary pattern text is handled: the capture in
        // front of an empty separator is empty, matching non-greedy regexes.
        const std::size_t idx = lit.empty() ? pos : message.find(lit, pos);
        if (idx == std::string_view::npos) {
            out.clear();
            return false;
        }
        out.push_back(message.substr(pos, idx - pos));
        pos = idx + lit.size();
    }
    const std::string& last = literals_.back();
    if (last.empty()) {
        out.push_back(message.substr(pos));
        return true;
    }
    if (message.size() < pos + last.size() ||
        message.compare(message.size() - last.size(), last.size(), last) != 0) {
        out.clear();
        return false;
    }
    out.push_back(message.substr(pos, message.size() - last.size() - pos));
    return true;
}

const TemplateEntry* PreparedTemplateSet::find(std::string_view event_id) const {
    auto idx = index_of(event_id);
    return idx ? &entries[*idx] : nullptr;
}

std::optional<std::size_t> PreparedTemplateSet::index_of(std::string_view event_id) const {
    auto it = index_by_event_.find(std::string(event_id));
    if (it == index_by_event_.end()) return std::nullopt;
    return it->second;
}

namespace prep {

std::string filter_numerics(std::string_view raw_template, std::string_view placeholder) {
    std::string out;
    out.reserve(raw_template.size());
    std::size_t i = 0;
    const std::size_t n = raw_template.size();
    while (i < n) {
        const unsigned char c = static_cast<unsigned char>(raw_template[i]);
        if (c >= '0' && c <= '9') {
            std::size_t end = i;
            while (end < n && raw_template[end] >= '0' && raw_template[end] <= '9') ++end;
            const bool left_boundary =
                i == 0 || !is_word_char(static_cast<unsigned char>(raw_template[i - 1]));
            const bool right_boundary =
                end == n || !is_word_char(static_cast<unsigned char>(raw_template[end]));
            if (left_boundary && right_boundary) {
                out.append(placeholder);
            } else {
                out.append(raw_template.substr(i, end - i));
            }
            i = end;
        } else {
            out.push_back(static_cast<char>(c));
            ++i;
        }
    }
    return out;
}

std::string collapse_adjacent_placeholders(std::string_view text,
                                           std::string_view placeholder) {
    if (placeholder.empty()) return std::string(text);
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, placeholder.size(), placeholder) == 0) {
            out.append(placeholder);
            i += placeholder.size();
            while (text.compare(i, placeholder.size(), placeholder) == 0) {
                i += placeholder.size();
            }
        } else {
            out.push_back(text[i]);
            ++i;
        }
    }
    return out;
}

MatchPattern compile_pattern(std::string_view prepared_template,
                             std::string_view placeholder) {
    MatchPattern pattern;
    std::string current;
    std::size_t i = 0;
    while (i < prepared_template.size()) {
        if (!placeholder.empty() &&
            prepared_template.compare(i, placeholder.size(), placeholder) == 0) {
            pattern.literals_.push_back(std::move(current));
            current.clear();
            i += placeholder.size();
        } else {
            current.push_back(prepared_template[i]);
            ++i;
        }
    }
    pattern.literals_.push_back(std::move(current));

    std::string text;
    for (std::size_t seg = 0; seg < pattern.literals_.size(); ++seg) {
        if (seg > 0) text += "(.*?)";
        for (char c : pattern.literals_[seg]) {
            const unsigned char uc = static_cast<unsigned char>(c);
            if (is_word_char(uc) || c == ' ') {
                text.push_back(c);
            } else {
                text.push_back('\\');
                text.push_back(c);
            }
        }
    }
    pattern.text_ = std::move(text);
    return pattern;
}

std::vector<std::string> tokenize_template(std::string_view prepared_template,
                                           std::string_view placeholder) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    std::size_t segment_start = 0;
    auto flush_segment = [&](std::size_t end) {
        split_blank_runs(prepared_template.substr(segment_start, end - segment_start),
                         [&](std::string_view tok) { tokens.emplace_back(tok); });
    };
    while (i < prepared_template.size()) {
        if (!placeholder.empty() &&
            prepared_template.compare(i, placeholder.size(), placeholder) == 0) {
            flush_segment(i);
            i += placeholder.size();
            segment_start = i;
        } else {
            ++i;
        }
    }
    flush_segment(prepared_template.size());
    return tokens;
}

PreparedTemplateSet prepare_templates(std::vector<TemplateEntry> templates,
                                      std::string_view placeholder) {
    if (templates.empty()) {
        throw DataError("prepare_templates: empty template set");
    }
    for (TemplateEntry& entry : templates) {
        if (entry.raw_template.empty()) {
            throw DataError("prepare_templates: template for event '" + entry.event_id +
                            "' is empty");
        }
        entry.prepared_template = collapse_adjacent_placeholders(
            filter_numerics(entry.raw_template, placeholder), placeholder);
        entry.match_pattern = compile_pattern(entry.prepared_template, placeholder);
        entry.constant_tokens = tokenize_template(entry.prepared_template, placeholder);
    }
    std::sort(templates.begin(), templates.end(),
              [](const TemplateEntry& a, const TemplateEntry& b) {
                  if (a.prepared_template != b.prepared_template) {
                      return a.prepared_template < b.prepared_template;
                  }
                  return a.event_id < b.event_id;
              });
    PreparedTemplateSet set;
    set.placeholder = std::string(placeholder);
    set.entries = std::move(templates);
    for (std::size_t i = 0; i < set.entries.size(); ++i) {
        set.entries[i].sorted_index = i;
        auto [it, inserted] = set.index_by_event_.emplace(set.entries[i].event_id, i);
        if (!inserted) {
            throw DataError("prepare_templates: duplicate event id '" +
                            set.entries[i].event_id + "'");
        }
    }
    return set;
}

} // namespace prep
} // namespace logeval
