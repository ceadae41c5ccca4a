#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "bediv/choice_source.hpp"
#include "bediv/diversity.hpp"
#include "bediv/generators.hpp"
#include "bediv/harness.hpp"
#include "bediv/mutation.hpp"

namespace bediv {

enum class CampaignMode { BedivStructure, BedivSimple, Zest, Quickcheck };

std::string to_string(CampaignMode mode);
std::optional<CampaignMode> parse_campaign_mode(const std::string& name);

// Campaign budget: either a fixed number of runs (deterministic, used by
// tests) or wall-clock milliseconds.
struct Budget {
    enum class Unit { Runs, WallClockMs };
    Unit unit = Unit::Runs;
    std::uint64_t amount = 1000;
};

struct CampaignConfig {
    CampaignMode mode = CampaignMode::BedivStructure;
    Budget budget;
    std::uint64_t seed = 0;
    std::string generator = "tree";
    std::string sut = "bst";
    MutationConfig mutation;
    std::uint64_t stats_interval = 1000; // runs (run-count mode) or ms
    std::string out_dir;                 // empty: no corpus/stats persistence
    std::string trace_log_path;          // empty: no trace log
    std::optional<std::string> seed_corpus_dir;
};

struct QueueEntry {
    ParamsSnapshot params;
    std::uint64_t new_branches_at_save = 0;
};

struct CampaignState {
    std::vector<QueueEntry> queue;
    std::vector<ParamsSnapshot> failures;
    std::unordered_set<BranchId> coverage;
    std::unordered_set<std::uint64_t> traces;
    std::unordered_set<StructuralSignature, SignatureHash> structures;
    AbundanceVector abundance;
    MutationScoreboard scoreboard;

    std::uint64_t total_runs = 0;
    std::uint64_t valid_runs = 0;
    std::uint64_t diverse_valid_runs = 0;
    std::uint64_t saved_novelty_sum = 0; // over queue entries, for num_children
};

struct CampaignReport {
    std::uint64_t total_runs = 0;
    std::uint64_t valid_runs = 0;
    std::uint64_t diverse_valid_runs = 0;
    std::uint64_t num_branches = 0;
    std::uint64_t num_traces = 0;
    DiversityProfile final_profile;
    std::uint64_t queue_size = 0;
    std::uint64_t failure_count = 0;
    std::map<int, std::uint64_t> fault_first_run; // fault site -> run index
    MutationScoreboard scoreboard;
    std::string out_dir;
    std::string io_error; // non-empty iff the campaign aborted on persistence failure
};

// Zest-style child budget: 50 * (1 + novelty / max(1, mean saved novelty)),
// clamped to [10, 100].
std::uint64_t num_children(std::uint64_t parent_novelty, double mean_saved_novelty);

// The per-mode save heuristic over a completed (non-Failure) run.
//   bediv-structure: Valid and new coverage and new structure.
//   bediv-simple:    Valid and new coverage.
//   zest:            new coverage (invalid inputs saved too).
//   quickcheck:      never.
bool should_save(ValidityResult result, bool new_coverage, bool new_signature,
                 CampaignMode mode);

// Merges a run into C/T/abundance, updates the valid and diverse-valid
// counters, and credits the mutation scoreboard when a kind is given.
// Returns true iff the trace was new.
bool update_coverage_stats(const ExecutionRecord& record, CampaignState& state,
                           std::optional<MutationKind> kind);

// Pushes the initial random entry (16 octets per sequence) onto an empty
// queue.
void seed_queue(CampaignState& state, std::mt19937_64& rng);

// Runs the configured campaign loop until the budget expires. Writes corpus
// files, stats.csv and the optional trace log under config.out_dir.
CampaignReport run_campaign(const CampaignConfig& config);

// stats.csv header shared by the writer and the compare command.
extern const char* const kStatsHeader;

} // namespace bediv
