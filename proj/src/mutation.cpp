#include "bediv/mutation.hpp"

#include <algorithm>

namespace bediv {

namespace {

std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

std::uint8_t random_octet(std::mt19937_64& rng) {
    return static_cast<std::uint8_t>(rng() & 0xff);
}

std::size_t random_span_length(std::mt19937_64& rng) {
    return std::uniform_int_distribution<std::size_t>(1, 8)(rng);
}

enum class Op { Overwrite, Insert, Delete, Arith };

} // namespace

std::vector<std::uint8_t> mutate_sequence(const std::vector<std::uint8_t>& seq,
                                          std::mt19937_64& rng, int max_sites,
                                          bool overwrite_only) {
    std::vector<std::uint8_t> out = seq;
    // Mostly single-octet nudges: a parameter sequence decodes left to
    // right, so any edit rerandomizes the interpretation of everything
    // after it. Small, rare edits keep children in the parent's semantic
    // neighborhood, where saved (valid, interesting) behavior is dense;
    // broad scrambles mostly land in the long tail of noise behaviors.
    // Occasional bursts keep enough reach to escape plateaus and to
    // assemble fault-triggering patterns; structural bursts are rarer
    // because a rewritten prefix throws the whole neighborhood away.
    const bool burst = uniform_index(rng, overwrite_only ? 2 : 32) == 0;
    if (!burst && !out.empty()) {
        // Edits near the tail keep more of the parent's decoded prefix, so
        // favor late positions half the time.
        std::size_t at;
        if (uniform_index(rng, 2) == 0) {
            at = out.size() - 1 - uniform_index(rng, std::min<std::size_t>(out.size(), 4));
        } else {
            at = uniform_index(rng, out.size());
        }
        if (uniform_index(rng, 2) == 0) {
            auto delta = static_cast<std::uint8_t>(1 + uniform_index(rng, 8));
            if (uniform_index(rng, 2) == 0) {
                out[at] = static_cast<std::uint8_t>(out[at] + delta);
            } else {
                out[at] = static_cast<std::uint8_t>(out[at] - delta);
            }
        } else {
            out[at] = random_octet(rng);
        }
        if (out == seq) out[at] ^= static_cast<std::uint8_t>(1 + uniform_index(rng, 255));
        return out;
    }
    // Structural bursts resample the whole sequence with a fresh length and
    // a per-rewrite bias for the low bits (swarm-style): recursion choices
    // that read single bits get pushed toward unusually deep or unusually
    // flat structures, which single-octet nudges can never reach from the
    // queue's parents once their neighborhoods are exhausted.
    if (burst && !overwrite_only) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double theta = unit(rng);
        out.assign(16 + uniform_index(rng, 241), 0);
        for (auto& b : out) {
            b = static_cast<std::uint8_t>(random_octet(rng) & 0xfe);
            if (unit(rng) < theta) b |= 1;
        }
        if (out == seq) out[uniform_index(rng, out.size())] ^= 0x01;
        return out;
    }
    // Value bursts: multi-site havoc, geometric with mean 4 sites.
    std::geometric_distribution<int> extra(0.25);
    int k = std::min(1 + extra(rng), std::max(1, max_sites));
    for (int i = 0; i < k; ++i) {
        Op op = overwrite_only ? (uniform_index(rng, 2) == 0 ? Op::Overwrite : Op::Arith)
                               : static_cast<Op>(uniform_index(rng, 4));
        switch (op) {
            case Op::Overwrite: {
                if (out.empty()) break;
                std::size_t start = uniform_index(rng, out.size());
                std::size_t len = std::min(random_span_length(rng), out.size() - start);
                for (std::size_t j = 0; j < len; ++j) out[start + j] = random_octet(rng);
                break;
            }
            case Op::Insert: {
                std::size_t at = uniform_index(rng, out.size() + 1);
                std::size_t len = random_span_length(rng);
                std::vector<std::uint8_t> span(len);
                for (auto& b : span) b = random_octet(rng);
                out.insert(out.begin() + static_cast<std::ptrdiff_t>(at), span.begin(),
                           span.end());
                break;
            }
            case Op::Delete: {
                if (out.empty()) break;
                std::size_t start = uniform_index(rng, out.size());
                std::size_t len = std::min(random_span_length(rng), out.size() - start);
                out.erase(out.begin() + static_cast<std::ptrdiff_t>(start),
                          out.begin() + static_cast<std::ptrdiff_t>(start + len));
                break;
            }
            case Op::Arith: {
                // Small additive nudge on one octet. Decoded choices stay
                // near the parent's (low octets shift an integer choice by
                // the delta modulo its domain), which explores a saved
                // input's close neighborhood instead of remapping it.
                if (out.empty()) break;
                std::size_t at = uniform_index(rng, out.size());
                auto delta = static_cast<std::uint8_t>(1 + uniform_index(rng, 8));
                if (uniform_index(rng, 2) == 0) {
                    out[at] = static_cast<std::uint8_t>(out[at] + delta);
                } else {
                    out[at] = static_cast<std::uint8_t>(out[at] - delta);
                }
                break;
            }
        }
    }
    if (out == seq) {
        if (out.empty()) {
            out.push_back(random_octet(rng));
        } else {
            std::size_t at = uniform_index(rng, out.size());
            out[at] ^= static_cast<std::uint8_t>(1 + uniform_index(rng, 255));
        }
    }
    return out;
}

ParamsSnapshot mutate_structural(const ParamsSnapshot& input, std::mt19937_64& rng,
                                 const MutationConfig& config) {
    return {mutate_sequence(input.structural, rng, config.max_mutation_sites), input.value};
}

ParamsSnapshot mutate_value(const ParamsSnapshot& input, std::mt19937_64& rng,
                            const MutationConfig& config) {
    return {input.structural,
            mutate_sequence(input.value, rng, config.max_mutation_sites, true)};
}

std::pair<double, double> calculate_scores(const MutationScoreboard& scoreboard) {
    double r_s = scoreboard.n_s == 0
                     ? 0.0
                     : static_cast<double>(scoreboard.u_s) / static_cast<double>(scoreboard.n_s);
    double r_v = scoreboard.n_v == 0
                     ? 0.0
                     : static_cast<double>(scoreboard.u_v) / static_cast<double>(scoreboard.n_v);
    return {r_s, r_v};
}

MutationKind pick_mutation_kind(const MutationScoreboard& scoreboard, double epsilon,
                                std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) >= epsilon) {
        auto [r_s, r_v] = calculate_scores(scoreboard);
        if (r_s > r_v) return MutationKind::Structural;
        if (r_v > r_s) return MutationKind::Value;
        // Tie: resort to random mutation.
    }
    return (rng() & 1) != 0 ? MutationKind::Structural : MutationKind::Value;
}

std::pair<ParamsSnapshot, MutationKind> mutate_adaptive(const ParamsSnapshot& input,
                                                        const MutationScoreboard& scoreboard,
                                                        const MutationConfig& config,
                                                        std::mt19937_64& rng) {
    MutationKind kind = pick_mutation_kind(scoreboard, config.epsilon, rng);
    if (kind == MutationKind::Structural) {
        return {mutate_structural(input, rng, config), kind};
    }
    return {mutate_value(input, rng, config), kind};
}

void record_outcome(MutationScoreboard& scoreboard, MutationKind kind, bool unique_trace) {
    if (kind == MutationKind::Structural) {
        ++scoreboard.n_s;
        if (unique_trace) ++scoreboard.u_s;
    } else {
        ++scoreboard.n_v;
        if (unique_trace) ++scoreboard.u_v;
    }
}

} // namespace bediv
