#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "bediv/choice_source.hpp"

namespace bediv {

enum class MutationKind { Structural, Value };

// Counts how many inputs each mutation kind produced (N) and how many of
// those exercised a unique trace (U). Monotone within a campaign.
struct MutationScoreboard {
    std::uint64_t n_s = 0;
    std::uint64_t u_s = 0;
    std::uint64_t n_v = 0;
    std::uint64_t u_v = 0;
};

struct MutationConfig {
    double epsilon = 0.2; // exploration factor
    int max_mutation_sites = 16;
};

// Byte-level havoc over one sequence: k mutations, k geometric with mean 4
// capped at max_sites, each uniformly an overwrite / insert / delete of a
// random span (length 1-8). overwrite_only restricts to overwrites so the
// value-cursor alignment is preserved. Never returns the input unchanged:
// an empty input that saw only deletions gets one random octet appended; any
// other accidental identity gets one byte flipped.
std::vector<std::uint8_t> mutate_sequence(const std::vector<std::uint8_t>& seq,
                                          std::mt19937_64& rng, int max_sites,
                                          bool overwrite_only = false);

// Structure-changing mutation: havoc over the structural bytes, value bytes
// untouched.
ParamsSnapshot mutate_structural(const ParamsSnapshot& input, std::mt19937_64& rng,
                                 const MutationConfig& config);

// Structure-preserving mutation: overwrite-only havoc over the value bytes,
// structural bytes untouched.
ParamsSnapshot mutate_value(const ParamsSnapshot& input, std::mt19937_64& rng,
                            const MutationConfig& config);

// R_x = U_x / N_x for x in {s, v}; 0 when N_x = 0.
std::pair<double, double> calculate_scores(const MutationScoreboard& scoreboard);

// The adaptive strategy: with probability epsilon a uniformly random kind,
// otherwise the kind with the strictly greater score; score ties fall back
// to the uniform-random branch.
std::pair<ParamsSnapshot, MutationKind> mutate_adaptive(const ParamsSnapshot& input,
                                                        const MutationScoreboard& scoreboard,
                                                        const MutationConfig& config,
                                                        std::mt19937_64& rng);

// Sibling of mutate_adaptive that only picks the kind, for callers that
// handle the byte work themselves.
MutationKind pick_mutation_kind(const MutationScoreboard& scoreboard, double epsilon,
                                std::mt19937_64& rng);

void record_outcome(MutationScoreboard& scoreboard, MutationKind kind, bool unique_trace);

} // namespace bediv
