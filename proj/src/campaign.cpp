#include "bediv/campaign.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace bediv {

namespace fs = std::filesystem;

std::string to_string(CampaignMode mode) {
    switch (mode) {
        case CampaignMode::BedivStructure: return "bediv-structure";
        case CampaignMode::BedivSimple: return "bediv-simple";
        case CampaignMode::Zest: return "zest";
        default: return "quickcheck";
    }
}

std::optional<CampaignMode> parse_campaign_mode(const std::string& name) {
    if (name == "bediv-structure") return CampaignMode::BedivStructure;
    if (name == "bediv-simple") return CampaignMode::BedivSimple;
    if (name == "zest") return CampaignMode::Zest;
    if (name == "quickcheck") return CampaignMode::Quickcheck;
    return std::nullopt;
}

std::uint64_t num_children(std::uint64_t parent_novelty, double mean_saved_novelty) {
    double fraction = 1.0 + static_cast<double>(parent_novelty) / std::max(1.0, mean_saved_novelty);
    double children = 50.0 * fraction;
    return static_cast<std::uint64_t>(std::clamp(children, 10.0, 100.0));
}

bool should_save(ValidityResult result, bool new_coverage, bool new_signature,
                 CampaignMode mode) {
    switch (mode) {
        case CampaignMode::BedivStructure:
            return result == ValidityResult::Valid && new_coverage && new_signature;
        case CampaignMode::BedivSimple:
            return result == ValidityResult::Valid && new_coverage;
        case CampaignMode::Zest:
            return result != ValidityResult::Failure && new_coverage;
        default:
            return false;
    }
}

bool update_coverage_stats(const ExecutionRecord& record, CampaignState& state,
                           std::optional<MutationKind> kind) {
    for (BranchId b : record.covered) state.coverage.insert(b);
    bool new_trace = state.traces.insert(record.trace_id).second;
    if (new_trace) {
        state.abundance.add_trace(record.covered);
    }
    if (kind) record_outcome(state.scoreboard, *kind, new_trace);
    if (record.result == ValidityResult::Valid) {
        ++state.valid_runs;
        if (new_trace) ++state.diverse_valid_runs;
    }
    return new_trace;
}

void seed_queue(CampaignState& state, std::mt19937_64& rng) {
    ParamsSnapshot seed;
    seed.structural.resize(16);
    seed.value.resize(16);
    for (auto& b : seed.structural) b = static_cast<std::uint8_t>(rng() & 0xff);
    for (auto& b : seed.value) b = static_cast<std::uint8_t>(rng() & 0xff);
    state.queue.push_back({std::move(seed), 0});
}

const char* const kStatsHeader =
    "elapsed_ms,total_runs,valid_runs,diverse_valid_runs,num_branches,num_traces,"
    "b0,b1,b2,n_s,u_s,n_v,u_v";

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

class Campaign {
public:
    explicit Campaign(const CampaignConfig& config)
        : config_(config), rng_(config.seed), start_(std::chrono::steady_clock::now()) {}

    CampaignReport execute() {
        generator_ = find_generator(config_.generator);
        if (!generator_) throw InvalidDomain("unknown generator: " + config_.generator);
        sut_ = find_sut(config_.sut);
        if (sut_ == nullptr) throw InvalidDomain("unknown SUT: " + config_.sut);

        try {
            open_outputs();
            if (config_.mode == CampaignMode::Quickcheck) {
                quickcheck_loop();
            } else {
                guided_loop();
            }
            emit_stats(); // final row
        } catch (const IoError& e) {
            io_error_ = e.what();
        }
        return build_report();
    }

private:
    std::int64_t elapsed_ms() const {
        using namespace std::chrono;
        return duration_cast<milliseconds>(steady_clock::now() - start_).count();
    }

    // Stats rows report 0 elapsed time in run-count mode so that reruns with
    // the same seed produce byte-identical stats.csv.
    std::int64_t stats_elapsed() const {
        return config_.budget.unit == Budget::Unit::Runs ? 0 : elapsed_ms();
    }

    bool budget_left() const {
        if (config_.budget.unit == Budget::Unit::Runs) {
            return state_.total_runs < config_.budget.amount;
        }
        return static_cast<std::uint64_t>(elapsed_ms()) < config_.budget.amount;
    }

    void open_outputs() {
        if (!config_.out_dir.empty()) {
            std::error_code ec;
            fs::create_directories(fs::path(config_.out_dir) / "queue", ec);
            fs::create_directories(fs::path(config_.out_dir) / "failures", ec);
            if (ec) throw IoError("cannot create corpus directories under " + config_.out_dir);
            stats_.open(fs::path(config_.out_dir) / "stats.csv", std::ios::trunc);
            if (!stats_) throw IoError("cannot open stats.csv under " + config_.out_dir);
            stats_ << kStatsHeader << '\n';
        }
        if (!config_.trace_log_path.empty()) {
            trace_log_.open(config_.trace_log_path, std::ios::trunc);
            if (!trace_log_) throw IoError("cannot open trace log " + config_.trace_log_path);
        }
    }

    void load_seed_corpus() {
        if (!config_.seed_corpus_dir) return;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(*config_.seed_corpus_dir)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& path : files) {
            state_.queue.push_back({read_params_file(path.string()), 0});
        }
    }

    void persist(const char* subdir, const ParamsSnapshot& params, ValidityResult result) {
        if (config_.out_dir.empty()) return;
        std::string name = to_string(result);
        for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        char file[64];
        std::snprintf(file, sizeof file, "id_%06llu_%s",
                      static_cast<unsigned long long>(saved_counter_++), name.c_str());
        write_params_file((fs::path(config_.out_dir) / subdir / file).string(), params);
    }

    void emit_stats() {
        if (!stats_.is_open()) return;
        DiversityProfile p = profile_of(state_.abundance);
        stats_ << stats_elapsed() << ',' << state_.total_runs << ',' << state_.valid_runs << ','
               << state_.diverse_valid_runs << ',' << state_.coverage.size() << ','
               << state_.traces.size() << ',' << format_double(p.b0) << ','
               << format_double(p.b1) << ',' << format_double(p.b2) << ','
               << state_.scoreboard.n_s << ',' << state_.scoreboard.u_s << ','
               << state_.scoreboard.n_v << ',' << state_.scoreboard.u_v << '\n';
        stats_.flush();
        if (!stats_) throw IoError("stats.csv write failed");
    }

    void maybe_emit_stats() {
        if (!stats_.is_open()) return;
        if (config_.budget.unit == Budget::Unit::Runs) {
            if (config_.stats_interval > 0 && state_.total_runs % config_.stats_interval == 0) {
                emit_stats();
            }
        } else if (static_cast<std::uint64_t>(elapsed_ms() - last_stats_ms_) >=
                   config_.stats_interval) {
            last_stats_ms_ = elapsed_ms();
            emit_stats();
        }
    }

    // Executes one generated input and performs the Alg. 1 bookkeeping.
    // Returns false once the budget is gone.
    bool execute_one(const ParamsSnapshot& mutated, std::optional<MutationKind> kind) {
        auto source = SplitParameterSequence::extending(mutated, rng_());
        GeneratedInput input = generator_(source);
        ExecutionRecord record = run(*sut_, input);
        ++state_.total_runs;
        if (trace_log_.is_open()) {
            trace_log_ << trace_log_line(state_.total_runs, record) << '\n';
            if (!trace_log_) throw IoError("trace log write failed");
        }
        if (record.result == ValidityResult::Failure) {
            state_.failures.push_back(input.source_snapshot);
            if (record.fault_site != 0 && !fault_first_run_.contains(record.fault_site)) {
                fault_first_run_[record.fault_site] = state_.total_runs;
            }
            // One file per distinct failure trace; the in-memory list keeps
            // every occurrence.
            if (persisted_failure_traces_.insert(record.trace_id).second) {
                persist("failures", input.source_snapshot, record.result);
            }
        } else {
            bool new_coverage = std::any_of(record.covered.begin(), record.covered.end(),
                                            [this](BranchId b) {
                                                return !state_.coverage.contains(b);
                                            });
            bool new_signature = !state_.structures.contains(input.signature);
            if (should_save(record.result, new_coverage, new_signature, config_.mode)) {
                std::uint64_t novelty = static_cast<std::uint64_t>(std::count_if(
                    record.covered.begin(), record.covered.end(),
                    [this](BranchId b) { return !state_.coverage.contains(b); }));
                state_.queue.push_back({input.source_snapshot, novelty});
                state_.saved_novelty_sum += novelty;
                if (config_.mode == CampaignMode::BedivStructure) {
                    state_.structures.insert(input.signature);
                }
                persist("queue", input.source_snapshot, record.result);
            }
            update_coverage_stats(record, state_, kind);
        }
        maybe_emit_stats();
        return budget_left();
    }

    std::pair<ParamsSnapshot, std::optional<MutationKind>> mutate_for_mode(
        const ParamsSnapshot& parent) {
        switch (config_.mode) {
            case CampaignMode::BedivStructure:
            case CampaignMode::BedivSimple: {
                auto [mutated, kind] =
                    mutate_adaptive(parent, state_.scoreboard, config_.mutation, rng_);
                return {std::move(mutated), kind};
            }
            default: {
                // Zest-style: full havoc on a uniformly chosen sequence, no
                // structural bookkeeping.
                if ((rng_() & 1) != 0) {
                    return {{mutate_sequence(parent.structural, rng_,
                                             config_.mutation.max_mutation_sites),
                             parent.value},
                            std::nullopt};
                }
                return {{parent.structural,
                         mutate_sequence(parent.value, rng_,
                                         config_.mutation.max_mutation_sites)},
                        std::nullopt};
            }
        }
    }

    void guided_loop() {
        seed_queue(state_, rng_);
        load_seed_corpus();
        bool keep_going = true;
        while (keep_going) {
            for (std::size_t i = 0; keep_going && i < state_.queue.size(); ++i) {
                double mean_novelty = static_cast<double>(state_.saved_novelty_sum) /
                                      static_cast<double>(state_.queue.size());
                std::uint64_t children =
                    num_children(state_.queue[i].new_branches_at_save, mean_novelty);
                for (std::uint64_t c = 0; keep_going && c < children; ++c) {
                    auto [mutated, kind] = mutate_for_mode(state_.queue[i].params);
                    keep_going = execute_one(mutated, kind);
                }
            }
        }
    }

    void quickcheck_loop() {
        // Blackbox random sampling: fresh parameters each run, coverage is
        // observed for reporting only and never feeds back into generation.
        bool keep_going = true;
        while (keep_going) {
            auto source = SplitParameterSequence::recording(rng_());
            GeneratedInput probe_input = generator_(source);
            keep_going = execute_one(probe_input.source_snapshot, std::nullopt);
        }
    }

    CampaignReport build_report() {
        CampaignReport report;
        report.total_runs = state_.total_runs;
        report.valid_runs = state_.valid_runs;
        report.diverse_valid_runs = state_.diverse_valid_runs;
        report.num_branches = state_.coverage.size();
        report.num_traces = state_.traces.size();
        report.final_profile = profile_of(state_.abundance, stats_elapsed());
        report.queue_size = state_.queue.size();
        report.failure_count = state_.failures.size();
        report.fault_first_run = fault_first_run_;
        report.scoreboard = state_.scoreboard;
        report.out_dir = config_.out_dir;
        report.io_error = io_error_;
        return report;
    }

    CampaignConfig config_;
    CampaignState state_;
    std::mt19937_64 rng_;
    std::chrono::steady_clock::time_point start_;
    GeneratorFn generator_;
    const BenchmarkSut* sut_ = nullptr;
    std::ofstream stats_;
    std::ofstream trace_log_;
    std::uint64_t saved_counter_ = 0;
    std::unordered_set<std::uint64_t> persisted_failure_traces_;
    std::int64_t last_stats_ms_ = 0;
    std::map<int, std::uint64_t> fault_first_run_;
    std::string io_error_;
};

} // namespace

CampaignReport run_campaign(const CampaignConfig& config) {
    Campaign campaign(config);
    return campaign.execute();
}

} // namespace bediv
