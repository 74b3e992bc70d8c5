// Micro-benchmarks for the hot paths: token distance, template matching,
// message tokenization, the full silhouette evaluation, and the labeled
// metrics.  Corpora come from the deterministic generator so runs are
// comparable across machines.
#include "logeval/corpus.hpp"
#include "logeval/corrections.hpp"
#include "logeval/labeled_metrics.hpp"
#include "logeval/silhouette.hpp"
#include "logeval/synth.hpp"
#include "logeval/template_prep.hpp"
#include "logeval/token_distance.hpp"

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

namespace {

using logeval::Corpus;
namespace prep = logeval::prep;
namespace silhouette = logeval::silhouette;
namespace synth = logeval::synth;

Corpus make_corpus(std::size_t templates, std::size_t messages) {
    synth::SynthSpec spec;
    spec.template_count = templates;
    spec.message_count = messages;
    spec.variable_rate = 0.3;
    spec.noise_rate = 0.05;
    spec.seed = 20260815;
    synth::SynthResult result = synth::generate(spec);
    return std::move(result.parsed);
}

void bm_levenshtein(benchmark::State& state) {
    const std::vector<std::string> a = {"Bluetooth:", "L2CAP", "(ver", "2.1", ")",
                                        "socket",     "layer", "started"};
    const std::vector<std::string> b = {"Bluetooth:", "(ver", ")", "socket", "closed"};
    std::vector<std::size_t> buffer;
    for (auto _ : state) {
        benchmark::DoNotOptimize(logeval::dist::levenshtein(a, b, buffer));
    }
}
BENCHMARK(bm_levenshtein);

void bm_full_match(benchmark::State& state) {
    const logeval::MatchPattern pattern = prep::compile_pattern("Bluetooth: <*> (ver <*>)");
    const std::string message = "Bluetooth: L2CAP (ver 2.1)";
    for (auto _ : state) {
        benchmark::DoNotOptimize(pattern.full_match(message));
    }
}
BENCHMARK(bm_full_match);

void bm_tokenize_message(benchmark::State& state) {
    logeval::TemplateEntry entry;
    entry.event_id = "E1";
    entry.raw_template = "Bluetooth: <*> (ver <*>)";
    const logeval::PreparedTemplateSet prepared = prep::prepare_templates({entry});
    const std::string message = "Bluetooth: L2CAP (ver 2.1)";
    std::vector<std::string_view> tokens;
    for (auto _ : state) {
        logeval::dist::tokenize_message(message, prepared.entries[0], tokens);
        benchmark::DoNotOptimize(tokens.data());
    }
}
BENCHMARK(bm_tokenize_message);

void bm_evaluate_pmss(benchmark::State& state) {
    const Corpus corpus =
        make_corpus(static_cast<std::size_t>(state.range(0)), 1000);
    const auto mode = state.range(1) == 0 ? silhouette::NeighborMode::sorted_neighbor
                                          : silhouette::NeighborMode::exact_neighbor;
    for (auto _ : state) {
        benchmark::DoNotOptimize(silhouette::evaluate_pmss(corpus, mode, false, 1));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 1000);
}
BENCHMARK(bm_evaluate_pmss)
    ->ArgsProduct({{10, 50}, {0, 1}})
    ->ArgNames({"templates", "exact"})
    ->Unit(benchmark::kMillisecond);

void bm_labeled_scores(benchmark::State& state) {
    synth::SynthSpec spec;
    spec.template_count = 20;
    spec.message_count = 1000;
    spec.noise_rate = 0.1;
    spec.seed = 20260815;
    synth::SynthResult generated = synth::generate(spec);
    const Corpus corpus =
        logeval::corpus::attach_ground_truth(generated.parsed, generated.truth);
    for (auto _ : state) {
        benchmark::DoNotOptimize(logeval::metrics::labeled_scores(corpus));
    }
}
BENCHMARK(bm_labeled_scores)->Unit(benchmark::kMillisecond);

void bm_correction_profile(benchmark::State& state) {
    const Corpus corpus = make_corpus(50, 10);
    const logeval::corrections::CorrectionProfile profile =
        logeval::corrections::builtin_profile("v5");
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            logeval::corrections::apply_profile(corpus.parsed_templates, profile));
    }
}
BENCHMARK(bm_correction_profile);

} // namespace

BENCHMARK_MAIN();
