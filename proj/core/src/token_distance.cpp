#include "logeval/token_distance.hpp"

#include <cctype>
#include <stdexcept>

namespace logeval::dist {

namespace {

void split_blank_runs(std::string_view segment, std::vector<std::string_view>& out) {
    std::size_t i = 0;
    while (i < segment.size()) {
        while (i < segment.size() &&
               std::isspace(static_cast<unsigned char>(segment[i])) != 0) {
            ++i;
        }
        const std::size_t start = i;
        while (i < segment.size() &&
               std::isspace(static_cast<unsigned char>(segment[i])) == 0) {
            ++i;
        }
        if (i > start) out.push_back(segment.substr(start, i - start));
    }
}

} // namespace

void tokenize_message(std::string_view message, const TemplateEntry& entry,
                      std::vector<std::string_view>& out) {
    out.clear();
    static thread_local std::vector<std::string_view> captures;
    if (!entry.match_pattern.captures(message, captures)) {
        throw std::logic_error("tokenize_message: message does not match template '" +
                               entry.prepared_template + "'");
    }
    const std::vector<std::string>& literals = entry.match_pattern.literals();
    for (std::size_t i = 0; i < literals.size(); ++i) {
        split_blank_runs(literals[i], out);
        if (i < captures.size()) split_blank_runs(captures[i], out);
    }
}

std::vector<std::string_view> tokenize_message(std::string_view message,
                                               const TemplateEntry& entry) {
    std::vector<std::string_view> out;
    tokenize_message(message, entry, out);
    return out;
}

} // namespace logeval::dist
