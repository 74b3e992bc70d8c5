#include "logeval/synth.hpp"

#include "logeval/errors.hpp"

#include <array>
#include <string>

namespace logeval::synth {

namespace {

// Constant vocabulary for template skeletons.
constexpr std::array<std::string_view, 40> kWords = {
    "session",   "cache",     "node",     "worker",    "request",  "block",
    "replica",   "timeout",   "started",  "finished",  "failed",   "accepted",
    "rejected",  "connection","from",     "to",        "for",      "on",
    "queue",     "flush",     "commit",   "rollback",  "leader",   "election",
    "heartbeat", "snapshot",  "index",    "segment",   "write",    "read",
    "closed",    "opened",    "retrying", "allocated", "released", "scheduler",
    "task",      "user",      "disk",     "memory",
};

// Vocabulary for variable values (distinct from kWords so that a variable
// token rarely collides with a constant token).
constexpr std::array<std::string_view, 24> kValues = {
    "alpha",  "bravo",  "charlie", "delta", "echo",   "foxtrot", "golf",   "hotel",
    "india",  "juliet", "kilo",    "lima",  "mike",   "november","oscar",  "papa",
    "quebec", "romeo",  "sierra",  "tango", "uniform","victor",  "whiskey","xray",
};

std::string make_value(SplitMix64& rng) {
    std::string value(kValues[rng.next_below(kValues.size())]);
    // Mix in numeric and multi-token shapes to exercise capture splitting.
    const std::uint64_t shape = rng.next_below(5);
    if (shape == 0) {
        value += "-" + std::to_string(rng.next_below(10000));
    } else if (shape == 1) {
        value = std::to_string(rng.next_below(100000));
    } else if (shape == 2) {
        value += " " + std::string(kValues[rng.next_below(kValues.size())]);
    }
    return value;
}

} // namespace

SynthResult generate(const SynthSpec& spec) {
    if (spec.template_count < 2) {
        throw UsageError("synthetic corpus needs at least 2 templates, got " +
                         std::to_string(spec.template_count));
    }
    if (spec.message_count < 1) {
        throw UsageError("synthetic corpus needs at least 1 message");
    }
    if (spec.variable_rate < 0.0 || spec.variable_rate > 1.0 || spec.noise_rate < 0.0 ||
        spec.noise_rate > 1.0) {
        throw UsageError("variable_rate and noise_rate must lie in [0, 1]");
    }
    if (spec.placeholder.empty()) {
        throw UsageError("placeholder must be non-empty");
    }
    SplitMix64 rng(spec.seed);

    // Templates: 3-7 tokens, each a placeholder with probability
    // variable_rate, ensuring at least one constant token so that every
    // message stays non-empty and templates stay distinguishable.
    std::vector<TemplateEntry> templates(spec.template_count);
    for (std::size_t t = 0; t < spec.template_count; ++t) {
        const std::size_t length = 3 + rng.next_below(5);
        std::string text;
        bool has_constant = false;
        for (std::size_t k = 0; k < length; ++k) {
            if (k > 0) text += " ";
            if (k + 1 == length && !has_constant) {
                text += kWords[rng.next_below(kWords.size())];
                has_constant = true;
            } else if (rng.next_double() < spec.variable_rate) {
                text += spec.placeholder;
            } else {
                text += kWords[rng.next_below(kWords.size())];
                has_constant = true;
            }
        }
        templates[t].event_id = "E" + std::to_string(t + 1);
        templates[t].raw_template = std::move(text);
    }

    SynthResult result;
    result.truth.placeholder = spec.placeholder;
    result.truth.parsed_templates = templates;
    result.truth.records.reserve(spec.message_count);
    for (std::size_t i = 0; i < spec.message_count; ++i) {
        const std::size_t event = rng.next_below(spec.template_count);
        const std::string& tpl = templates[event].raw_template;
        std::string content;
        std::size_t pos = 0;
        while (pos < tpl.size()) {
            if (tpl.compare(pos, spec.placeholder.size(), spec.placeholder) == 0) {
                content += make_value(rng);
                pos += spec.placeholder.size();
            } else {
                content.push_back(tpl[pos]);
                ++pos;
            }
        }
        LogRecord rec;
        rec.line_id = static_cast<std::int64_t>(i + 1);
        rec.content = std::move(content);
        rec.parsed_event = templates[event].event_id;
        result.truth.records.push_back(std::move(rec));
    }

    // Parsed output: the truth with a fraction of records regrouped.
    result.parsed = result.truth;
    if (spec.noise_rate > 0.0) {
        for (LogRecord& rec : result.parsed.records) {
            if (rng.next_double() < spec.noise_rate) {
                std::size_t other = rng.next_below(spec.template_count - 1);
                const std::string wrong = "E" + std::to_string(other + 1);
                rec.parsed_event = wrong == rec.parsed_event
                                       ? "E" + std::to_string(spec.template_count)
                                       : wrong;
            }
        }
    }
    return result;
}

} // namespace logeval::synth
