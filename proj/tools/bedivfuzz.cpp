#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bediv/campaign.hpp"
#include "bediv/choice_source.hpp"
#include "bediv/diversity.hpp"
#include "bediv/generators.hpp"
#include "bediv/harness.hpp"

namespace fs = std::filesystem;
using namespace bediv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitConfig = 2;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Durations are integer seconds with an optional s/m/h suffix.
std::optional<std::uint64_t> parse_duration_ms(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::uint64_t multiplier = 1000;
    std::string digits = text;
    char suffix = text.back();
    if (suffix == 's' || suffix == 'm' || suffix == 'h') {
        digits = text.substr(0, text.size() - 1);
        if (suffix == 'm') multiplier = 60'000;
        if (suffix == 'h') multiplier = 3'600'000;
    }
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](unsigned char c) {
            return std::isdigit(c);
        })) {
        return std::nullopt;
    }
    return std::stoull(digits) * multiplier;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("BEDIV_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            // fall through to 0
        }
    }
    return 0;
}

int cmd_fuzz(const std::string& mode_name, const std::string& sut, const std::string& generator,
             const std::string& budget_text, std::uint64_t runs, std::uint64_t seed,
             const std::string& out_dir, double epsilon, std::uint64_t stats_interval,
             const std::string& trace_log, const std::string& seed_corpus) {
    CampaignConfig config;
    auto mode = parse_campaign_mode(mode_name);
    if (!mode) {
        std::cerr << "unknown mode: " << mode_name << "\n";
        return kExitConfig;
    }
    config.mode = *mode;
    if (!find_generator(generator)) {
        std::cerr << "unknown generator: " << generator << "\n";
        return kExitConfig;
    }
    if (find_sut(sut) == nullptr) {
        std::cerr << "unknown SUT: " << sut << "\n";
        return kExitConfig;
    }
    if (budget_text.empty() == (runs == 0)) {
        std::cerr << "exactly one of --budget or --runs is required\n";
        return kExitConfig;
    }
    if (runs > 0) {
        config.budget = {Budget::Unit::Runs, runs};
    } else {
        auto ms = parse_duration_ms(budget_text);
        if (!ms || *ms == 0) {
            std::cerr << "bad --budget duration: " << budget_text << "\n";
            return kExitConfig;
        }
        config.budget = {Budget::Unit::WallClockMs, *ms};
    }
    if (epsilon < 0.0 || epsilon > 1.0) {
        std::cerr << "--epsilon must be in [0, 1]\n";
        return kExitConfig;
    }
    config.sut = sut;
    config.generator = generator;
    config.seed = seed;
    config.out_dir = out_dir;
    config.mutation.epsilon = epsilon;
    config.stats_interval = stats_interval;
    config.trace_log_path = trace_log;
    if (!seed_corpus.empty()) config.seed_corpus_dir = seed_corpus;

    CampaignReport report = run_campaign(config);

    std::cout << "total_runs,valid_runs,diverse_valid_runs,num_branches,num_traces,"
                 "b0,b1,b2,queue_size,failures\n";
    std::cout << report.total_runs << ',' << report.valid_runs << ','
              << report.diverse_valid_runs << ',' << report.num_branches << ','
              << report.num_traces << ',' << format_double(report.final_profile.b0) << ','
              << format_double(report.final_profile.b1) << ','
              << format_double(report.final_profile.b2) << ',' << report.queue_size << ','
              << report.failure_count << '\n';
    if (!report.io_error.empty()) {
        std::cerr << "campaign aborted: " << report.io_error << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

// The recorded class is the token after the last '_' in the file name
// (corpus naming convention id_<counter>_<result>).
std::optional<ValidityResult> recorded_class(const fs::path& path) {
    std::string name = path.filename().string();
    auto pos = name.rfind('_');
    if (pos == std::string::npos) return std::nullopt;
    std::string token = name.substr(pos + 1);
    if (!token.empty()) token[0] = static_cast<char>(std::toupper(token[0]));
    ValidityResult result;
    if (!parse_validity(token, result)) return std::nullopt;
    return result;
}

int cmd_replay(const std::string& in, const std::string& sut_name,
               const std::string& generator_name) {
    GeneratorFn generator = find_generator(generator_name);
    if (!generator) {
        std::cerr << "unknown generator: " << generator_name << "\n";
        return kExitConfig;
    }
    const BenchmarkSut* sut = find_sut(sut_name);
    if (sut == nullptr) {
        std::cerr << "unknown SUT: " << sut_name << "\n";
        return kExitConfig;
    }
    std::vector<fs::path> files;
    if (fs::is_directory(in)) {
        for (const auto& entry : fs::directory_iterator(in)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
    } else if (fs::is_regular_file(in)) {
        files.push_back(in);
    } else {
        std::cerr << "no such file or directory: " << in << "\n";
        return kExitConfig;
    }
    bool all_reproduced = true;
    for (const auto& path : files) {
        ParamsSnapshot params;
        try {
            params = read_params_file(path.string());
        } catch (const IoError& e) {
            std::cerr << e.what() << "\n";
            return kExitConfig;
        }
        auto source = SplitParameterSequence::replaying(params);
        std::string verdict;
        try {
            GeneratedInput input = generator(source);
            ExecutionRecord record = run(*sut, input);
            verdict = to_string(record.result);
            if (auto expected = recorded_class(path); expected && record.result != *expected) {
                all_reproduced = false;
            }
        } catch (const SequenceExhausted&) {
            verdict = "ReplayExhausted";
            all_reproduced = false;
        }
        std::cout << path.string() << ',' << verdict << '\n';
    }
    return all_reproduced ? kExitOk : kExitMismatch;
}

int cmd_diversity(const std::string& log_path, const std::string& q_list, bool valid_only) {
    std::ifstream log(log_path);
    if (!log) {
        std::cerr << "cannot open trace log: " << log_path << "\n";
        return kExitConfig;
    }
    std::vector<double> orders;
    std::stringstream ss(q_list);
    std::string token;
    while (std::getline(ss, token, ',')) {
        try {
            orders.push_back(std::stod(token));
        } catch (...) {
            std::cerr << "bad q value: " << token << "\n";
            return kExitConfig;
        }
    }
    if (orders.empty()) {
        std::cerr << "--q list is empty\n";
        return kExitConfig;
    }
    AbundanceVector av;
    try {
        av = abundance_from_trace_log(log, valid_only);
    } catch (const MalformedLine& e) {
        std::cerr << "malformed trace log: " << e.what() << "\n";
        return kExitConfig;
    }
    std::string out;
    for (double q : orders) {
        if (!out.empty()) out += ',';
        out += av.empty() ? "0" : format_double(behavioral_diversity(av, q));
    }
    std::cout << out << '\n';
    return kExitOk;
}

bool read_stats(const std::string& path, std::string& header, std::string& last_row) {
    std::ifstream is(path);
    if (!is) return false;
    if (!std::getline(is, header)) return false;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty()) last_row = line;
    }
    return !last_row.empty();
}

int cmd_compare(const std::string& a_path, const std::string& b_path) {
    std::string header_a, row_a, header_b, row_b;
    if (!read_stats(a_path, header_a, row_a)) {
        std::cerr << "cannot read stats file: " << a_path << "\n";
        return kExitConfig;
    }
    if (!read_stats(b_path, header_b, row_b)) {
        std::cerr << "cannot read stats file: " << b_path << "\n";
        return kExitConfig;
    }
    if (header_a != header_b || header_a != kStatsHeader) {
        std::cerr << "stats column mismatch\n";
        return kExitConfig;
    }
    auto split = [](const std::string& row) {
        std::vector<std::string> fields;
        std::stringstream ss(row);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        return fields;
    };
    auto fields_a = split(row_a);
    auto fields_b = split(row_b);
    auto columns = split(kStatsHeader);
    if (fields_a.size() != columns.size() || fields_b.size() != columns.size()) {
        std::cerr << "stats column mismatch\n";
        return kExitConfig;
    }
    auto column_index = [&columns](const std::string& name) {
        return static_cast<std::size_t>(
            std::find(columns.begin(), columns.end(), name) - columns.begin());
    };
    std::cout << "delta_b0,delta_b1,delta_b2,delta_diverse_valid_runs\n";
    std::string out;
    for (const char* name : {"b0", "b1", "b2", "diverse_valid_runs"}) {
        std::size_t idx = column_index(name);
        double delta = std::stod(fields_b[idx]) - std::stod(fields_a[idx]);
        if (!out.empty()) out += ',';
        out += format_double(delta);
    }
    std::cout << out << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generator-based coverage-guided fuzzer with behavioral-diversity metrics"};
    app.require_subcommand(1);

    // fuzz
    auto* fuzz = app.add_subcommand("fuzz", "run a fuzzing campaign");
    std::string mode, sut, generator = "tree", budget_text, out_dir, trace_log, seed_corpus;
    std::uint64_t runs = 0, seed = default_seed(), stats_interval = 1000;
    double epsilon = 0.2;
    fuzz->add_option("--mode", mode, "bediv-structure|bediv-simple|zest|quickcheck")->required();
    fuzz->add_option("--sut", sut, "bst|xml|expr")->required();
    fuzz->add_option("--generator", generator, "tree|xml|expr")->required();
    fuzz->add_option("--budget", budget_text, "wall-clock budget, integer seconds (s/m/h suffix)");
    fuzz->add_option("--runs", runs, "run-count budget (deterministic)");
    fuzz->add_option("--seed", seed, "campaign RNG seed (env BEDIV_SEED as fallback)");
    fuzz->add_option("--out", out_dir, "output corpus directory")->required();
    fuzz->add_option("--epsilon", epsilon, "exploration factor for adaptive mutation");
    fuzz->add_option("--stats-interval", stats_interval, "runs (with --runs) or ms (with --budget)");
    fuzz->add_option("--trace-log", trace_log, "write a per-run trace log to this path");
    fuzz->add_option("--seed-corpus", seed_corpus, "directory of BDVF files to seed the queue");

    // replay
    auto* replay = app.add_subcommand("replay", "replay saved parameter files");
    std::string replay_in, replay_sut, replay_generator;
    replay->add_option("--in", replay_in, "BDVF file or directory")->required();
    replay->add_option("--sut", replay_sut, "bst|xml|expr")->required();
    replay->add_option("--generator", replay_generator, "tree|xml|expr")->required();

    // diversity
    auto* diversity = app.add_subcommand("diversity", "Hill numbers from a trace log");
    std::string log_path, q_list = "0,1,2";
    bool valid_only = false;
    diversity->add_option("--log", log_path, "trace log path")->required();
    diversity->add_option("--q", q_list, "comma-separated diversity orders");
    diversity->add_flag("--valid-only", valid_only, "restrict to traces of Valid runs");

    // compare
    auto* compare = app.add_subcommand("compare", "final-row deltas of two stats files");
    std::string a_path, b_path;
    compare->add_option("--a", a_path, "baseline stats.csv")->required();
    compare->add_option("--b", b_path, "candidate stats.csv")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (fuzz->parsed()) {
            return cmd_fuzz(mode, sut, generator, budget_text, runs, seed, out_dir, epsilon,
                            stats_interval, trace_log, seed_corpus);
        }
        if (replay->parsed()) return cmd_replay(replay_in, replay_sut, replay_generator);
        if (diversity->parsed()) return cmd_diversity(log_path, q_list, valid_only);
        if (compare->parsed()) return cmd_compare(a_path, b_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
