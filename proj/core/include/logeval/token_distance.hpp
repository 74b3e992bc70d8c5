#ifndef LOGEVAL_TOKEN_DISTANCE_HPP
#define LOGEVAL_TOKEN_DISTANCE_HPP

#include "logeval/template_prep.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace logeval::dist {

// Token-level Levenshtein distance: minimum number of whole-token insertions,
// deletions, and substitutions (unit cost, exact case-sensitive equality)
// transforming `a` into `b`.  Two-row dynamic program, linear memory.
// `buffer` is scratch space that callers in hot loops can reuse.
template <class SeqA, class SeqB>
std::size_t levenshtein(const SeqA& a, const SeqB& b, std::vector<std::size_t>& buffer) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (n == 0) return m;
    if (m == 0) return n;
    buffer.resize(2 * (m + 1));
    std::size_t* prev = buffer.data();
    std::size_t* curr = buffer.data() + (m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        curr[0] = i;
        const auto& ai = a[i - 1];
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t substitution = prev[j - 1] + (ai == b[j - 1] ? 0 : 1);
            const std::size_t deletion = prev[j] + 1;
            const std::size_t insertion = curr[j - 1] + 1;
            curr[j] = std::min({substitution, deletion, insertion});
        }
        std::swap(prev, curr);
    }
    return prev[m];
}

template <class SeqA, class SeqB>
std::size_t levenshtein(const SeqA& a, const SeqB& b) {
    std::vector<std::size_t> buffer;
    return levenshtein(a, b, buffer);
}

// Message tokenization guided by the matched template: the template's literal
// segments locate the variable substrings, then every segment — constant or
// variable — is split on whitespace runs, preserving original message order.
// Empty captures contribute no tokens.  The returned views point into
// `message` and into the template's literal storage; both must outlive the
// result.  Throws std::logic_error when the message does not match (callers
// are required to test matchability first).
[[nodiscard]] std::vector<std::string_view> tokenize_message(std::string_view message,
                                                             const TemplateEntry& entry);

// Variant appending into a caller-owned vector (cleared first) for hot loops.
void tokenize_message(std::string_view message, const TemplateEntry& entry,
                      std::vector<std::string_view>& out);

} // namespace logeval::dist

#endif // LOGEVAL_TOKEN_DISTANCE_HPP
