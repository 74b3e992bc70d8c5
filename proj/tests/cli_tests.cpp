// End-to-end tests that drive the installed `logeval` binary as a subprocess.
// The binary path arrives as the first non-flag program argument (wired up by
// CMake); everything else is forwarded to doctest.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "logeval/corpus.hpp"
#include "logeval/silhouette.hpp"

#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string g_cli;
std::filesystem::path g_scratch;

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot read " << path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE_MESSAGE(out.good(), "cannot write " << path.string());
    out << body;
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const auto out_file = g_scratch / ("stdout_" + std::to_string(counter) + ".txt");
    const auto err_file = g_scratch / ("stderr_" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string command = "\"" + g_cli + "\" " + args + " > \"" + out_file.string() +
                                "\" 2> \"" + err_file.string() + "\"";
    const int status = std::system(command.c_str());
    RunResult result;
    if (status != -1 && WIFEXITED(status)) result.code = WEXITSTATUS(status);
    result.out = slurp(out_file);
    result.err = slurp(err_file);
    return result;
}

std::filesystem::path dir(const std::string& name) {
    const auto path = g_scratch / name;
    std::filesystem::create_directories(path);
    return path;
}

// Generates a corpus pair through the CLI itself and returns the two paths.
std::pair<std::filesystem::path, std::filesystem::path> synth_pair(
    const std::filesystem::path& where, unsigned seed, const std::string& extra = "") {
    const auto truth = where / "truth.csv";
    const auto parsed = where / "parsed.csv";
    const RunResult r = run_cli("synth --template-count 6 --message-count 80 --seed " +
                                std::to_string(seed) + " " + extra + " --out-truth \"" +
                                truth.string() + "\" --out-parsed \"" + parsed.string() + "\"");
    REQUIRE_MESSAGE(r.code == 0, "synth failed: " << r.err);
    return {truth, parsed};
}

std::string report_json(const std::string& dataset, const std::string& parser,
                        const std::string& version,
                        const std::vector<std::pair<std::string, double>>& metrics,
                        std::size_t line_count = 100,
                        const std::vector<std::pair<std::string, double>>& timing = {}) {
    nlohmann::ordered_json doc;
    doc["dataset"] = dataset;
    doc["parser"] = parser;
    if (!version.empty()) doc["truth_version"] = version;
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (const auto& [name, value] : metrics) m[name] = value;
    doc["metrics"] = std::move(m);
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    for (const auto& [name, value] : timing) t[name] = value;
    doc["timing_ms"] = std::move(t);
    doc["line_count"] = line_count;
    return doc.dump(2) + "\n";
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("--help exits 0 and lists the subcommands") {
    const RunResult r = run_cli("--help");
    CHECK(r.code == 0);
    CHECK(r.out.find("evaluate") != std::string::npos);
    CHECK(r.out.find("correct") != std::string::npos);
    CHECK(r.out.find("compare-versions") != std::string::npos);
    CHECK(r.out.find("rank") != std::string::npos);
    CHECK(r.out.find("correlate") != std::string::npos);
    CHECK(r.out.find("synth") != std::string::npos);
}

TEST_CASE("bad invocations exit with the usage code") {
    CHECK(run_cli("--no-such-flag").code == 1);
    CHECK(run_cli("").code == 1);                         // a subcommand is required
    CHECK(run_cli("evaluate").code == 1);                 // missing required options
    CHECK(run_cli("evaluate --parsed x.csv --metrics wat").code == 1);
    CHECK(run_cli("evaluate --parsed x.csv --metrics pmss --neighbors nope").code == 1);
}

TEST_CASE("synth writes a deterministic corpus pair") {
    const auto d = dir("synth_det");
    const auto [truth_a, parsed_a] = synth_pair(d, 9);
    CHECK(std::filesystem::exists(truth_a));
    CHECK(std::filesystem::exists(parsed_a));

    const auto d2 = dir("synth_det_again");
    const auto [truth_b, parsed_b] = synth_pair(d2, 9);
    CHECK(slurp(truth_a) == slurp(truth_b));
    CHECK(slurp(parsed_a) == slurp(parsed_b));

    const auto d3 = dir("synth_other_seed");
    const auto [truth_c, parsed_c] = synth_pair(d3, 10);
    CHECK(slurp(truth_a) != slurp(truth_c));

    // The summary on stdout is JSON carrying the paths.
    const RunResult r = run_cli("synth --out-truth \"" + (d / "t2.csv").string() +
                                "\" --out-parsed \"" + (d / "p2.csv").string() + "\"");
    CHECK(r.code == 0);
    const auto summary = nlohmann::json::parse(r.out);
    CHECK(summary.at("templates").get<int>() == 5);  // generator default
    CHECK(summary.at("seed").get<int>() == 1);
}

TEST_CASE("evaluate reproduces the library's silhouette score exactly") {
    const auto d = dir("eval_pmss");
    const auto [truth, parsed] = synth_pair(d, 21, "--noise-rate 0.1");

    const auto out = d / "report.json";
    const RunResult r = run_cli("evaluate --parsed \"" + parsed.string() +
                                "\" --metrics pmss --keep-message-scores --out \"" +
                                out.string() + "\"");
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto doc = nlohmann::json::parse(slurp(out));

    const logeval::Corpus corpus = logeval::corpus::load_structured_log(parsed.string());
    const auto expected = logeval::silhouette::evaluate_pmss(
        corpus, logeval::silhouette::NeighborMode::sorted_neighbor, true, 1);
    CHECK(doc.at("metrics").at("pmss").get<double>() == expected.pmss);
    CHECK(doc.at("line_count").get<std::size_t>() == corpus.records.size());
    REQUIRE(doc.at("emss").size() == expected.event_scores.size());
    for (std::size_t i = 0; i < expected.event_scores.size(); ++i) {
        CHECK(doc["emss"][i].at("event_id").get<std::string>() ==
              expected.event_scores[i].event_id);
        CHECK(doc["emss"][i].at("emss").get<double>() == expected.event_scores[i].emss);
    }
    CHECK(doc.at("message_scores").size() == corpus.records.size());
    CHECK(doc.at("truth_version").is_null());
    CHECK_FALSE(doc.at("metrics").contains("ga"));

    // The exact-neighbor mode flows through --neighbors.
    const RunResult exact = run_cli("evaluate --parsed \"" + parsed.string() +
                                    "\" --metrics pmss --neighbors exact");
    REQUIRE(exact.code == 0);
    const auto exact_doc = nlohmann::json::parse(exact.out);
    const auto exact_expected = logeval::silhouette::evaluate_pmss(
        corpus, logeval::silhouette::NeighborMode::exact_neighbor);
    CHECK(exact_doc.at("metrics").at("pmss").get<double>() == exact_expected.pmss);
}

TEST_CASE("evaluate scores a perfect parse at 1.0 on every labeled metric") {
    const auto d = dir("eval_perfect");
    const auto [truth, parsed] = synth_pair(d, 33);
    // Zero noise: parsed equals truth, so compare the file to itself.
    const RunResult r = run_cli("evaluate --parsed \"" + parsed.string() +
                                "\" --groundtruth \"" + truth.string() +
                                "\" --metrics ga,pa,fga,fta --dataset demo --parser self"
                                " --truth-version v1");
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.at("dataset").get<std::string>() == "demo");
    CHECK(doc.at("parser").get<std::string>() == "self");
    CHECK(doc.at("truth_version").get<std::string>() == "v1");
    CHECK(doc.at("metrics").at("ga").get<double>() == 1.0);
    CHECK(doc.at("metrics").at("pa").get<double>() == 1.0);
    CHECK(doc.at("metrics").at("fga").get<double>() == 1.0);
    CHECK(doc.at("metrics").at("fta").get<double>() == 1.0);
    CHECK_FALSE(doc.at("metrics").contains("pmss"));
}

TEST_CASE("evaluate exit codes: usage, data, and undefined computations") {
    const auto d = dir("eval_errors");
    const auto [truth, parsed] = synth_pair(d, 5);

    // Labeled metrics without a ground truth: usage error.
    const RunResult usage =
        run_cli("evaluate --parsed \"" + parsed.string() + "\" --metrics ga");
    CHECK(usage.code == 1);
    CHECK(usage.err.find("groundtruth") != std::string::npos);

    // Missing input file: data error.
    CHECK(run_cli("evaluate --parsed \"" + (d / "missing.csv").string() +
                  "\" --metrics pmss").code == 2);

    // A single-template corpus has no neighbor: computation undefined.
    const auto single = d / "single.csv";
    write_text(single, "LineId,Content,EventId,EventTemplate\n"
                       "1,alpha 1,E1,alpha <*>\n"
                       "2,alpha 2,E1,alpha <*>\n");
    const RunResult undefined =
        run_cli("evaluate --parsed \"" + single.string() + "\" --metrics pmss");
    CHECK(undefined.code == 3);
    CHECK(undefined.err.find("error") != std::string::npos);
}

TEST_CASE("evaluate --output csv emits the tabular report") {
    const auto d = dir("eval_csv");
    const auto [truth, parsed] = synth_pair(d, 13);
    const RunResult r = run_cli("evaluate --parsed \"" + parsed.string() +
                                "\" --groundtruth \"" + truth.string() +
                                "\" --metrics ga,pmss --output csv --dataset demo");
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(r.out.rfind("dataset,parser,truth_version,ga,pa,fga,fta,pmss,line_count\n", 0) == 0);
    CHECK(r.out.find("demo,parser,") != std::string::npos);
    CHECK(r.out.find("1.000") != std::string::npos);  // ga of a perfect parse
}

TEST_CASE("worker count does not change the written report") {
    const auto d = dir("eval_jobs");
    const auto [truth, parsed] = synth_pair(d, 55, "--noise-rate 0.2");
    const auto one = d / "jobs1.json";
    const auto many = d / "jobs4.json";
    REQUIRE(run_cli("evaluate --parsed \"" + parsed.string() +
                    "\" --metrics pmss --keep-message-scores --jobs 1 --out \"" +
                    one.string() + "\"").code == 0);
    REQUIRE(run_cli("evaluate --parsed \"" + parsed.string() +
                    "\" --metrics pmss --keep-message-scores --jobs 4 --out \"" +
                    many.string() + "\"").code == 0);
    CHECK(slurp(one) == slurp(many));  // byte-for-byte
}

TEST_CASE("correct with the identity profile reproduces its input") {
    const auto d = dir("correct_identity");
    const auto [truth, parsed] = synth_pair(d, 17);
    const auto out_dir = d / "v1";
    const RunResult r = run_cli("correct --groundtruth \"" + truth.string() +
                                "\" --profile v1 --out-dir \"" + out_dir.string() + "\"");
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(slurp(out_dir / "corrected_structured.csv") == slurp(truth));
    const auto summary = nlohmann::json::parse(r.out);
    CHECK(summary.at("merged_events").get<int>() == 0);
    CHECK(summary.at("events_in").get<int>() == summary.at("events_out").get<int>());
    CHECK(std::filesystem::exists(out_dir / "corrected_templates.csv"));
    CHECK(std::filesystem::exists(out_dir / "merge_map.csv"));
}

TEST_CASE("correct applies value-assignment merges and reports them") {
    const auto d = dir("correct_merge");
    const auto input = d / "gt.csv";
    write_text(input, "LineId,Content,EventId,EventTemplate\n"
                      "1,tty=ssh,E1,tty=ssh\n"
                      "2,tty=pts,E2,tty=pts\n"
                      "3,session closed,E3,session closed\n");
    const auto out_dir = d / "v3";
    const RunResult r = run_cli("correct --groundtruth \"" + input.string() +
                                "\" --profile v3 --out-dir \"" + out_dir.string() + "\"");
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto summary = nlohmann::json::parse(r.out);
    CHECK(summary.at("events_in").get<int>() == 3);
    CHECK(summary.at("events_out").get<int>() == 2);
    CHECK(summary.at("merged_events").get<int>() == 1);

    const std::string merge_map = slurp(out_dir / "merge_map.csv");
    CHECK(merge_map.find("E2,E1") != std::string::npos);
    const std::string corrected = slurp(out_dir / "corrected_structured.csv");
    CHECK(corrected.find("tty=<*>") != std::string::npos);
    CHECK(corrected.find("2,tty=pts,E1,") != std::string::npos);  // remapped record

    // A second pass over the corrected output is a fixed point.
    const auto out_dir2 = d / "v3_again";
    const RunResult r2 = run_cli("correct --groundtruth \"" +
                                 (out_dir / "corrected_structured.csv").string() +
                                 "\" --profile v3 --out-dir \"" + out_dir2.string() + "\"");
    REQUIRE_MESSAGE(r2.code == 0, r2.err);
    CHECK(slurp(out_dir2 / "corrected_structured.csv") ==
          slurp(out_dir / "corrected_structured.csv"));
    CHECK(nlohmann::json::parse(r2.out).at("merged_events").get<int>() == 0);
}

TEST_CASE("correct rejects unknown profiles") {
    const auto d = dir("correct_unknown");
    const auto [truth, parsed] = synth_pair(d, 3);
    CHECK(run_cli("correct --groundtruth \"" + truth.string() +
                  "\" --profile v9 --out-dir \"" + d.string() + "\"").code == 1);
}

TEST_CASE("compare-versions diffs correction profiles over a ground truth") {
    const auto d = dir("compare_gt");
    const auto input = d / "gt.csv";
    write_text(input, "LineId,Content,EventId,EventTemplate\n"
                      "1,euid=0,E1,euid=0\n"
                      "2,euid=1,E1,euid=0\n"
                      "3,session closed,E2,session closed\n"
                      "4,session closed,E2,session closed\n");
    const RunResult self = run_cli("compare-versions --groundtruth \"" + input.string() +
                                   "\" --profiles v1,v1");
    REQUIRE_MESSAGE(self.code == 0, self.err);
    const auto self_doc = nlohmann::json::parse(self.out);
    REQUIRE(self_doc.at("version_diff").size() == 1);
    CHECK(self_doc["version_diff"][0].at("template_diff_pct").get<double>() == 0.0);
    CHECK(self_doc["version_diff"][0].at("message_diff_pct").get<double>() == 0.0);

    // v1 vs v2: E1's template is rewritten (euid=<*>), E2 untouched.
    const RunResult pair = run_cli("compare-versions --groundtruth \"" + input.string() +
                                   "\" --profiles v1,v2");
    REQUIRE_MESSAGE(pair.code == 0, pair.err);
    const auto pair_doc = nlohmann::json::parse(pair.out);
    CHECK(pair_doc["version_diff"][0].at("template_diff_pct").get<double>() == 50.0);
    CHECK(pair_doc["version_diff"][0].at("message_diff_pct").get<double>() == 50.0);

    CHECK(run_cli("compare-versions --groundtruth \"" + input.string() +
                  "\" --profiles v1").code == 1);
    CHECK(run_cli("compare-versions").code == 1);
}

TEST_CASE("compare-versions builds delta and optimal tables from reports") {
    const auto d = dir("compare_reports");
    const auto r1 = d / "r1.json";
    const auto r2 = d / "r2.json";
    write_text(r1, report_json("hdfs", "drain", "v1",
                               {{"pa", 0.30}, {"fta", 0.50}}));
    write_text(r2, report_json("hdfs", "drain", "v2",
                               {{"pa", 0.817}, {"fta", 0.51}}));
    const RunResult r = run_cli("compare-versions --report \"" + r1.string() +
                                "\" --report \"" + r2.string() + "\"");
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.at("delta_pa").size() == 1);
    CHECK(doc["delta_pa"][0].at("delta").get<double>() == doctest::Approx(0.517).epsilon(1e-12));
    CHECK(doc["delta_pa"][0].at("flagged").get<bool>());
    CHECK(doc["delta_fta"][0].at("delta").get<double>() == doctest::Approx(0.01).epsilon(1e-9));
    CHECK_FALSE(doc["delta_fta"][0].at("flagged").get<bool>());
    REQUIRE(doc.at("optimal_pa").size() == 2);  // one cell per version
    CHECK(doc["optimal_pa"][0].at("parser").get<std::string>() == "drain");

    // CSV mode produces blank-line-separated tables.
    const RunResult csv = run_cli("compare-versions --report \"" + r1.string() +
                                  "\" --report \"" + r2.string() + "\" --output csv");
    REQUIRE(csv.code == 0);
    CHECK(csv.out.find("metric,dataset,parser,delta,flagged") != std::string::npos);
    CHECK(csv.out.find("pa,hdfs,drain,0.517,yes") != std::string::npos);
    CHECK(csv.out.find("fta,hdfs,drain,0.010,no") != std::string::npos);
}

TEST_CASE("rank reports winners, selection gaps, and timing") {
    const auto d = dir("rank");
    const std::vector<std::pair<std::string, std::string>> files = {
        {"a1", report_json("hdfs", "drain", "v1", {{"pmss", 0.70}, {"fga", 0.90}}, 2000,
                           {{"pmss", 30.0}})},
        {"a2", report_json("hdfs", "spell", "v1", {{"pmss", 0.75}, {"fga", 0.80}}, 2000,
                           {{"pmss", 60.0}})},
        {"b1", report_json("bgl", "drain", "v1", {{"pmss", 0.60}, {"fga", 0.85}}, 1000)},
        {"b2", report_json("bgl", "spell", "v1", {{"pmss", 0.50}, {"fga", 0.95}}, 1000)},
    };
    std::string report_args;
    for (const auto& [name, body] : files) {
        const auto path = d / (name + ".json");
        write_text(path, body);
        report_args += " --report \"" + path.string() + "\"";
    }
    const RunResult r = run_cli("rank" + report_args +
                                " --metric pmss --gap-reference fga --gap-selector pmss"
                                " --timing");
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.at("optimal").size() == 2);
    CHECK(doc["optimal"][0].at("dataset").get<std::string>() == "bgl");
    CHECK(doc["optimal"][0].at("parser").get<std::string>() == "drain");
    CHECK(doc["optimal"][1].at("dataset").get<std::string>() == "hdfs");
    CHECK(doc["optimal"][1].at("parser").get<std::string>() == "spell");

    // hdfs: pmss picks spell, whose fga trails the best by (0.9-0.8)/0.9.
    // bgl: pmss picks drain, fga best is spell: (0.95-0.85)/0.95.
    const auto& per_dataset = doc.at("gap").at("per_dataset");
    REQUIRE(per_dataset.size() == 2);
    CHECK(per_dataset[0].at("gap").get<double>() ==
          doctest::Approx((0.95 - 0.85) / 0.95).epsilon(1e-12));
    CHECK(per_dataset[1].at("gap").get<double>() ==
          doctest::Approx((0.9 - 0.8) / 0.9).epsilon(1e-12));

    // 30ms over 2000 lines is 15 ms per thousand.
    const auto& timing = doc.at("timing");
    REQUIRE(timing.size() == 2);
    CHECK(timing[0].at("parser").get<std::string>() == "drain");
    CHECK(timing[0].at("ms_per_1k").get<double>() == 15.0);
    CHECK(timing[1].at("parser").get<std::string>() == "spell");
    CHECK(timing[1].at("ms_per_1k").get<double>() == 30.0);

    CHECK(run_cli("rank" + report_args + " --metric pmss --gap-reference fga").code == 1);
}

TEST_CASE("correlate scores monotone metric agreement at exactly 1.0") {
    const auto d = dir("correlate");
    std::string report_args;
    for (int i = 0; i < 5; ++i) {
        const auto path = d / ("r" + std::to_string(i) + ".json");
        const double x = 0.1 * static_cast<double>(i + 1);
        write_text(path, report_json("d" + std::to_string(i), "p", "v1",
                                     {{"pmss", x}, {"fga", x * x}, {"fta", 0.5}}));
        report_args += " --report \"" + path.string() + "\"";
    }
    const RunResult r = run_cli("correlate" + report_args + " --pair pmss:fga");
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.at("pairs").size() == 1);
    CHECK(doc["pairs"][0].at("n").get<int>() == 5);
    CHECK(doc["pairs"][0].at("rho").get<double>() == 1.0);
    CHECK(doc["pairs"][0].at("p_value").get<double>() == 0.0);

    // A constant series has no defined correlation; with no other pair the
    // whole command is undefined.
    const RunResult degenerate = run_cli("correlate" + report_args + " --pair pmss:fta");
    CHECK(degenerate.code == 3);

    // Mixed defined/undefined pairs succeed, reporting null for the bad one.
    const RunResult mixed =
        run_cli("correlate" + report_args + " --pair pmss:fga --pair pmss:fta");
    REQUIRE(mixed.code == 0);
    const auto mixed_doc = nlohmann::json::parse(mixed.out);
    CHECK(mixed_doc["pairs"][1].at("rho").is_null());

    CHECK(run_cli("correlate" + report_args + " --pair nocolon").code == 1);
}

} // TEST_SUITE

int main(int argc, char** argv) {
    std::vector<const char*> doctest_args;
    doctest_args.push_back(argv[0]);
    for (int i = 1; i < argc; ++i) {
        if (g_cli.empty() && argv[i][0] != '-') {
            g_cli = argv[i];
            continue;
        }
        doctest_args.push_back(argv[i]);
    }
    if (g_cli.empty()) {
        std::cerr << "usage: logeval_cli_tests <path-to-logeval> [doctest options]\n";
        return 2;
    }
    g_scratch = std::filesystem::temp_directory_path() / "logeval_cli_tests";
    std::filesystem::remove_all(g_scratch);
    std::filesystem::create_directories(g_scratch);

    doctest::Context context;
    context.applyCommandLine(static_cast<int>(doctest_args.size()), doctest_args.data());
    return context.run();
}
