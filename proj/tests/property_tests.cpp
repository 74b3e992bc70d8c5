// Randomized invariants over the whole pipeline: pattern matching against a
// std::regex oracle, preparation idempotence, correction-rule stability,
// merge bookkeeping, metric orderings, and parallel determinism.
#include "logeval/corpus.hpp"
#include "logeval/corrections.hpp"
#include "logeval/errors.hpp"
#include "logeval/labeled_metrics.hpp"
#include "logeval/report.hpp"
#include "logeval/silhouette.hpp"
#include "logeval/synth.hpp"
#include "logeval/template_prep.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

using logeval::Corpus;
using logeval::TemplateEntry;
using logeval::synth::SplitMix64;
namespace corr = logeval::corrections;
namespace prep = logeval::prep;
namespace silhouette = logeval::silhouette;

namespace {

// Literal characters deliberately heavy on regex metacharacters.
constexpr std::string_view kLiteralPool =
    "abcxyzABC019:=()[]{}.|^$*+?-/#\\'\" _,";

std::string random_literal(SplitMix64& rng, std::size_t max_len) {
    const std::size_t len = rng.next_below(max_len + 1);
    std::string out;
    for (std::size_t i = 0; i < len; ++i) {
        out.push_back(kLiteralPool[rng.next_below(kLiteralPool.size())]);
    }
    return out;
}

// A template string: literals and placeholders interleaved.
std::string random_template(SplitMix64& rng) {
    const std::size_t pieces = 1 + rng.next_below(6);
    std::string out;
    for (std::size_t i = 0; i < pieces; ++i) {
        if (rng.next_below(10) < 3) {
            out += "<*>";
        } else {
            out += random_literal(rng, 8);
        }
    }
    return out;
}

// Filler for a placeholder: arbitrary text, possibly empty, never a newline.
std::string random_filler(SplitMix64& rng) {
    return random_literal(rng, 6);
}

std::string instantiate(const std::string& tpl, SplitMix64& rng) {
    std::string message;
    std::size_t pos = 0;
    while (pos < tpl.size()) {
        if (tpl.compare(pos, 3, "<*>") == 0) {
            message += random_filler(rng);
            pos += 3;
        } else {
            message.push_back(tpl[pos]);
            ++pos;
        }
    }
    return message;
}

std::string mutate(std::string message, SplitMix64& rng) {
    if (message.empty()) return random_literal(rng, 4);
    const std::size_t at = rng.next_below(message.size());
    switch (rng.next_below(3)) {
        case 0: message.erase(at, 1); break;
        case 1: message.insert(at, 1, kLiteralPool[rng.next_below(kLiteralPool.size())]); break;
        default: message[at] = kLiteralPool[rng.next_below(kLiteralPool.size())]; break;
    }
    return message;
}

std::vector<TemplateEntry> random_template_set(SplitMix64& rng, std::size_t count) {
    std::vector<TemplateEntry> out;
    std::set<std::string> seen;
    while (out.size() < count) {
        std::string tpl = random_template(rng);
        if (tpl.empty() || !seen.insert(tpl).second) continue;
        TemplateEntry entry;
        entry.event_id = "E" + std::to_string(out.size() + 1);
        entry.raw_template = std::move(tpl);
        out.push_back(std::move(entry));
    }
    return out;
}

// Template shapes that give every correction rule something to chew on.
std::string random_correction_template(SplitMix64& rng) {
    constexpr std::array<std::string_view, 14> shapes = {
        "user=<*>",       "cancel=false",   "retry 81 times", "0xdeadbeef1",
        "/var/log/app",   "./run/x",        "size=<*>MB",     "<*>:<*>",
        "<*><*>",         "a  b   c",       "id-<*>",         "tty=NODEVssh",
        "TRUE",           "deadbeef123",
    };
    std::string out;
    const std::size_t pieces = 1 + rng.next_below(4);
    for (std::size_t i = 0; i < pieces; ++i) {
        if (i > 0) out += " ";
        if (rng.next_below(4) == 0) {
            out += random_literal(rng, 6);
        } else {
            out += shapes[rng.next_below(shapes.size())];
        }
    }
    return out;
}

} // namespace

TEST_SUITE("property") {

TEST_CASE("matcher agrees with the regex oracle on random templates") {
    SplitMix64 rng(0xA11CE);
    std::size_t matched_cases = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const std::string tpl = random_template(rng);
        if (tpl.empty()) continue;
        const logeval::MatchPattern pattern = prep::compile_pattern(tpl);
        const std::regex re = oracle::compile_regex(pattern);

        for (int m = 0; m < 6; ++m) {
            std::string message;
            if (m < 3) {
                message = instantiate(tpl, rng);
            } else if (m < 5) {
                message = mutate(instantiate(tpl, rng), rng);
            } else {
                message = random_literal(rng, 20);
            }
            const bool lib = pattern.full_match(message);
            const bool ref = oracle::regex_full_match(re, message);
            REQUIRE_MESSAGE(lib == ref, "template '" << tpl << "' message '" << message
                                                     << "': matcher " << lib << " vs regex "
                                                     << ref);
            std::vector<std::string_view> captures;
            const bool lib_cap = pattern.captures(message, captures);
            CHECK(lib_cap == lib);
            if (!lib) continue;
            ++matched_cases;
            const auto ref_captures = oracle::regex_captures(re, message);
            REQUIRE(ref_captures.has_value());
            REQUIRE(captures.size() == ref_captures->size());
            for (std::size_t i = 0; i < captures.size(); ++i) {
                CHECK(std::string(captures[i]) == (*ref_captures)[i]);
            }
            // Captures plus literal segments reassemble the message exactly.
            std::string rebuilt = pattern.literals().front();
            for (std::size_t i = 0; i < captures.size(); ++i) {
                rebuilt += std::string(captures[i]);
                rebuilt += pattern.literals()[i + 1];
            }
            CHECK(rebuilt == message);
        }
    }
    CHECK(matched_cases > 500);  // the generator must actually exercise matches
}

TEST_CASE("preparation is idempotent and order-independent") {
    SplitMix64 rng(0xBEEF);
    for (int trial = 0; trial < 60; ++trial) {
        auto templates = random_template_set(rng, 2 + rng.next_below(12));
        logeval::PreparedTemplateSet prepared;
        try {
            prepared = prep::prepare_templates(templates);
        } catch (const logeval::DataError&) {
            // Distinct raw templates can collapse to one prepared form; the
            // sort itself cannot fail, so only duplicate-free sets matter here.
            continue;
        }
        for (std::size_t i = 0; i < prepared.entries.size(); ++i) {
            const auto& entry = prepared.entries[i];
            CHECK(entry.sorted_index == i);
            if (i > 0) {
                const auto& prev = prepared.entries[i - 1];
                const bool ordered =
                    prev.prepared_template < entry.prepared_template ||
                    (prev.prepared_template == entry.prepared_template &&
                     prev.event_id < entry.event_id);
                CHECK(ordered);
            }
            // Re-filtering a prepared template changes nothing.
            CHECK(prep::filter_numerics(entry.prepared_template) == entry.prepared_template);
            CHECK(prep::collapse_adjacent_placeholders(entry.prepared_template) ==
                  entry.prepared_template);
        }

        // Shuffle the input; the prepared order must not move.
        auto shuffled = templates;
        for (std::size_t i = shuffled.size(); i > 1; --i) {
            std::swap(shuffled[i - 1], shuffled[rng.next_below(i)]);
        }
        const auto again = prep::prepare_templates(shuffled);
        REQUIRE(again.entries.size() == prepared.entries.size());
        for (std::size_t i = 0; i < prepared.entries.size(); ++i) {
            CHECK(again.entries[i].event_id == prepared.entries[i].event_id);
            CHECK(again.entries[i].prepared_template == prepared.entries[i].prepared_template);
        }
    }
}

TEST_CASE("every correction rule is idempotent on random templates") {
    SplitMix64 rng(0xCAFE);
    corr::RuleParams params;
    params.user_strings = {"NODEVssh", "app"};
    const std::array<corr::RuleId, 10> rules = {
        corr::RuleId::MS, corr::RuleId::BL, corr::RuleId::US, corr::RuleId::DG,
        corr::RuleId::HEX, corr::RuleId::PS, corr::RuleId::VA, corr::RuleId::MT,
        corr::RuleId::DV, corr::RuleId::CV,
    };
    for (int trial = 0; trial < 300; ++trial) {
        const std::string tpl = random_correction_template(rng);
        for (const corr::RuleId rule : rules) {
            const std::string once = corr::apply_rule(tpl, rule, params);
            const std::string twice = corr::apply_rule(once, rule, params);
            REQUIRE_MESSAGE(once == twice, "rule " << corr::rule_name(rule)
                                                   << " not idempotent on '" << tpl << "': '"
                                                   << once << "' vs '" << twice << "'");
        }
    }
}

TEST_CASE("profiles are stable on their own output and keep ids accounted for") {
    SplitMix64 rng(0xD00D);
    const std::array<std::string_view, 5> profiles = {"v1", "v2", "v3", "v4", "v5"};
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<TemplateEntry> templates;
        const std::size_t count = 2 + rng.next_below(10);
        for (std::size_t i = 0; i < count; ++i) {
            TemplateEntry entry;
            entry.event_id = "E" + std::to_string(i + 1);
            entry.raw_template = random_correction_template(rng);
            templates.push_back(std::move(entry));
        }
        const corr::CorrectionProfile profile =
            corr::builtin_profile(std::string(profiles[rng.next_below(profiles.size())]));
        const corr::ProfileResult result = corr::apply_profile(templates, profile);

        // The merge map is total over the input and lands on survivors.
        REQUIRE(result.merge_map.size() == templates.size());
        std::set<std::string> survivors;
        for (const auto& entry : result.templates) survivors.insert(entry.event_id);
        for (const auto& mapping : result.merge_map) {
            CHECK(survivors.contains(mapping.second));
            // Survivors map to themselves.
            CHECK(result.merge_map.at(mapping.second) == mapping.second);
        }
        CHECK(result.merged_event_count == templates.size() - result.templates.size());

        // Applying the profile again must change nothing.
        const corr::ProfileResult again = corr::apply_profile(result.templates, profile);
        CHECK(again.merged_event_count == 0);
        REQUIRE(again.templates.size() == result.templates.size());
        for (std::size_t i = 0; i < result.templates.size(); ++i) {
            CHECK(again.templates[i].event_id == result.templates[i].event_id);
            CHECK(again.templates[i].raw_template == result.templates[i].raw_template);
        }
    }
}

TEST_CASE("correcting the parsed side preserves messages and group sizes") {
    SplitMix64 rng(0xFEED);
    for (int trial = 0; trial < 25; ++trial) {
        logeval::synth::SynthSpec spec;
        spec.template_count = 3 + rng.next_below(10);
        spec.message_count = 50 + rng.next_below(200);
        spec.variable_rate = 0.4;
        spec.seed = rng.next();
        Corpus corpus = logeval::synth::generate(spec).parsed;
        // Rewrite some templates into merge-prone shapes.
        for (auto& entry : corpus.parsed_templates) {
            if (rng.next_below(3) == 0) {
                entry.raw_template = "count " + std::to_string(rng.next_below(90)) + " done";
            }
        }

        std::map<std::string, std::size_t> before;
        for (const auto& rec : corpus.records) ++before[rec.parsed_event];

        corr::ProfileResult result;
        const Corpus corrected =
            corr::apply_profile_to_parsed(corpus, corr::builtin_profile("v2"), &result);
        REQUIRE(corrected.records.size() == corpus.records.size());

        std::map<std::string, std::size_t> after;
        for (const auto& rec : corrected.records) ++after[rec.parsed_event];
        // Every corrected group is the union of the groups merged into it.
        std::map<std::string, std::size_t> expected;
        for (const auto& [id, size] : before) expected[result.merge_map.at(id)] += size;
        CHECK(after == expected);
    }
}

TEST_CASE("template accuracy never exceeds grouping accuracy") {
    SplitMix64 rng(0x5EED);
    for (int trial = 0; trial < 50; ++trial) {
        logeval::synth::SynthSpec spec;
        spec.template_count = 2 + rng.next_below(15);
        spec.message_count = 20 + rng.next_below(300);
        spec.noise_rate = 0.05 * static_cast<double>(rng.next_below(10));
        spec.seed = rng.next();
        const auto generated = logeval::synth::generate(spec);
        const Corpus corpus =
            logeval::corpus::attach_ground_truth(generated.parsed, generated.truth);
        const auto scores = logeval::metrics::labeled_scores(corpus);
        CHECK(scores.fta <= scores.fga);
        CHECK(scores.ga >= 0.0);
        CHECK(scores.ga <= 1.0);
        CHECK(scores.pa >= 0.0);
        CHECK(scores.pa <= 1.0);
    }
}

TEST_CASE("merge-free corrections leave grouping metrics untouched") {
    SplitMix64 rng(0x90D);
    std::size_t merge_free = 0;
    for (int trial = 0; trial < 30; ++trial) {
        logeval::synth::SynthSpec spec;
        spec.template_count = 2 + rng.next_below(8);
        spec.message_count = 30 + rng.next_below(150);
        spec.noise_rate = 0.2;
        spec.seed = rng.next();
        const auto generated = logeval::synth::generate(spec);
        const Corpus corpus =
            logeval::corpus::attach_ground_truth(generated.parsed, generated.truth);

        corr::ProfileResult result;
        const Corpus corrected = corr::apply_profile_to_parsed(
            corpus, corr::builtin_profile("v2"), &result);
        if (result.merged_event_count != 0) continue;
        ++merge_free;
        CHECK(logeval::metrics::grouping_accuracy(corrected) ==
              logeval::metrics::grouping_accuracy(corpus));
        CHECK(logeval::metrics::f1_grouping_accuracy(corrected) ==
              logeval::metrics::f1_grouping_accuracy(corpus));
    }
    CHECK(merge_free > 0);  // the invariant must actually have been exercised
}

TEST_CASE("sorted-neighbor silhouette never scores below the exact mode") {
    SplitMix64 rng(0x0DD);
    for (int trial = 0; trial < 30; ++trial) {
        logeval::synth::SynthSpec spec;
        spec.template_count = 2 + rng.next_below(39);
        spec.message_count = 20 + rng.next_below(280);
        spec.variable_rate = 0.35;
        spec.noise_rate = trial % 3 == 0 ? 0.15 : 0.0;
        spec.seed = rng.next();
        const Corpus corpus = logeval::synth::generate(spec).parsed;
        const auto sorted =
            silhouette::evaluate_pmss(corpus, silhouette::NeighborMode::sorted_neighbor);
        const auto exact =
            silhouette::evaluate_pmss(corpus, silhouette::NeighborMode::exact_neighbor);
        CHECK(sorted.pmss >= exact.pmss);  // exact inequality, no tolerance
        CHECK(sorted.pmss >= -1.0);
        CHECK(sorted.pmss <= 1.0);
        CHECK(exact.pmss >= -1.0);
        CHECK(exact.pmss <= 1.0);
    }
}

TEST_CASE("worker count never changes the evaluation or its JSON form") {
    SplitMix64 rng(0x1045);
    for (int trial = 0; trial < 10; ++trial) {
        logeval::synth::SynthSpec spec;
        spec.template_count = 2 + rng.next_below(12);
        spec.message_count = 50 + rng.next_below(400);
        spec.noise_rate = 0.1;
        spec.seed = rng.next();
        const Corpus corpus = logeval::synth::generate(spec).parsed;

        const auto one = silhouette::evaluate_pmss(
            corpus, silhouette::NeighborMode::sorted_neighbor, true, 1);
        const auto many = silhouette::evaluate_pmss(
            corpus, silhouette::NeighborMode::sorted_neighbor, true, 1 + trial % 7);
        CHECK(one.pmss == many.pmss);
        REQUIRE(one.message_scores.size() == many.message_scores.size());
        for (std::size_t i = 0; i < one.message_scores.size(); ++i) {
            CHECK(one.message_scores[i].coefficient == many.message_scores[i].coefficient);
        }

        logeval::report::MetricReport a;
        a.dataset = "prop";
        a.parser = "synth";
        a.pmss = one.pmss;
        a.event_scores = one.event_scores;
        a.message_scores = one.message_scores;
        a.line_count = corpus.records.size();
        logeval::report::MetricReport b = a;
        b.pmss = many.pmss;
        b.event_scores = many.event_scores;
        b.message_scores = many.message_scores;
        CHECK(logeval::report::to_json_text(a) == logeval::report::to_json_text(b));
    }
}

} // TEST_SUITE
