#include <doctest.h>

#include <array>
#include <map>
#include <random>

#include "bediv/choice_source.hpp"
#include "bediv/generators.hpp"
#include "bediv/mutation.hpp"

using namespace bediv;

namespace {

ParamsSnapshot sample_snapshot(std::uint64_t seed) {
    auto src = SplitParameterSequence::recording(seed);
    return generate_tree(src, kTreeDefaultDepth).source_snapshot;
}

} // namespace

TEST_CASE("mutate_sequence basics") {
    std::mt19937_64 rng(1);
    SUBCASE("an empty sequence grows instead of staying empty") {
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<std::uint8_t> seq;
            auto mutated = mutate_sequence(seq, rng, 16);
            CHECK_FALSE(mutated.empty());
        }
    }
    SUBCASE("mutation output differs from its input") {
        std::vector<std::uint8_t> seq{10, 20, 30, 40, 50, 60, 70, 80};
        int changed = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            if (mutate_sequence(seq, rng, 16) != seq) ++changed;
        }
        CHECK(changed == 1000);
    }
    SUBCASE("deterministic given an identically seeded engine") {
        std::vector<std::uint8_t> seq{1, 2, 3, 4, 5};
        std::mt19937_64 a(99), b(99);
        for (int trial = 0; trial < 100; ++trial) {
            CHECK(mutate_sequence(seq, a, 16) == mutate_sequence(seq, b, 16));
        }
    }
    SUBCASE("overwrite-only mode preserves length") {
        std::vector<std::uint8_t> seq(32, 7);
        for (int trial = 0; trial < 200; ++trial) {
            auto mutated = mutate_sequence(seq, rng, 16, /*overwrite_only=*/true);
            CHECK(mutated.size() == seq.size());
            CHECK(mutated != seq);
        }
    }
}

TEST_CASE("mutation kind purity") {
    std::mt19937_64 rng(2);
    MutationConfig config;
    ParamsSnapshot base = sample_snapshot(7);
    SUBCASE("value mutation never touches the structural half") {
        for (int trial = 0; trial < 1000; ++trial) {
            ParamsSnapshot mutated = mutate_value(base, rng, config);
            CHECK(mutated.structural == base.structural);
            CHECK(mutated.value.size() == base.value.size());
        }
    }
    SUBCASE("structural mutation never touches the value half") {
        for (int trial = 0; trial < 1000; ++trial) {
            ParamsSnapshot mutated = mutate_structural(base, rng, config);
            CHECK(mutated.value == base.value);
        }
    }
}

TEST_CASE("value mutations preserve the structural signature") {
    std::mt19937_64 rng(3);
    MutationConfig config;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto recorder = SplitParameterSequence::recording(seed);
        GeneratedInput base = generate_tree(recorder, kTreeDefaultDepth);
        for (int trial = 0; trial < 50; ++trial) {
            ParamsSnapshot mutated = mutate_value(base.source_snapshot, rng, config);
            auto replay = SplitParameterSequence::extending(mutated, rng());
            GeneratedInput regenerated = generate_tree(replay, kTreeDefaultDepth);
            CHECK(regenerated.signature == base.signature);
        }
    }
}

TEST_CASE("structural mutations frequently change the signature") {
    std::mt19937_64 rng(4);
    MutationConfig config;
    int changed = 0;
    const int trials = 1000;
    for (int trial = 0; trial < trials; ++trial) {
        auto recorder = SplitParameterSequence::recording(trial + 1000);
        GeneratedInput base = generate_tree(recorder, kTreeDefaultDepth);
        ParamsSnapshot mutated = mutate_structural(base.source_snapshot, rng, config);
        auto replay = SplitParameterSequence::extending(mutated, rng());
        GeneratedInput regenerated = generate_tree(replay, kTreeDefaultDepth);
        if (!(regenerated.signature == base.signature)) ++changed;
    }
    CHECK(changed >= trials / 2);
}

TEST_CASE("heuristic scores") {
    SUBCASE("zero attempts score zero, not NaN") {
        MutationScoreboard board;
        auto [rs, rv] = calculate_scores(board);
        CHECK(rs == 0.0);
        CHECK(rv == 0.0);
    }
    SUBCASE("scores are unique-output frequencies") {
        MutationScoreboard board;
        board.n_s = 10;
        board.u_s = 4;
        board.n_v = 8;
        board.u_v = 1;
        auto [rs, rv] = calculate_scores(board);
        CHECK(rs == doctest::Approx(0.4));
        CHECK(rv == doctest::Approx(0.125));
    }
    SUBCASE("record_outcome bumps the right counters") {
        MutationScoreboard board;
        record_outcome(board, MutationKind::Structural, true);
        record_outcome(board, MutationKind::Structural, false);
        record_outcome(board, MutationKind::Value, true);
        CHECK(board.n_s == 2);
        CHECK(board.u_s == 1);
        CHECK(board.n_v == 1);
        CHECK(board.u_v == 1);
    }
}

TEST_CASE("epsilon-greedy branch selection") {
    std::mt19937_64 rng(5);
    const int trials = 200000;
    auto frequency = [&](MutationScoreboard board, double epsilon) {
        int structural = 0;
        for (int trial = 0; trial < trials; ++trial) {
            if (pick_mutation_kind(board, epsilon, rng) == MutationKind::Structural) {
                ++structural;
            }
        }
        return static_cast<double>(structural) / trials;
    };
    SUBCASE("epsilon = 1 explores uniformly") {
        MutationScoreboard board;
        board.n_s = 10;
        board.u_s = 10; // structural looks perfect, but exploration ignores it
        board.n_v = 10;
        CHECK(frequency(board, 1.0) == doctest::Approx(0.5).epsilon(0.06));
    }
    SUBCASE("epsilon = 0 always exploits the argmax") {
        MutationScoreboard board;
        board.n_s = 10;
        board.u_s = 9;
        board.n_v = 10;
        board.u_v = 1;
        CHECK(frequency(board, 0.0) == doctest::Approx(1.0));
        std::swap(board.u_s, board.u_v);
        CHECK(frequency(board, 0.0) == doctest::Approx(0.0));
    }
    SUBCASE("epsilon = 0.2 splits 0.9 / 0.1 around a clear winner") {
        MutationScoreboard board;
        board.n_s = 10;
        board.u_s = 1;
        board.n_v = 10;
        board.u_v = 9;
        // Value wins greedily 80% of the time; exploration adds half of 20%.
        CHECK(frequency(board, 0.2) == doctest::Approx(0.1).epsilon(0.1));
    }
    SUBCASE("ties fall back to a fair coin") {
        MutationScoreboard board; // everything zero: R_s == R_v
        CHECK(frequency(board, 0.0) == doctest::Approx(0.5).epsilon(0.06));
    }
}

TEST_CASE("mutate_adaptive returns the kind it applied") {
    std::mt19937_64 rng(6);
    MutationConfig config;
    ParamsSnapshot base = sample_snapshot(11);
    MutationScoreboard board;
    std::map<MutationKind, int> kinds;
    for (int trial = 0; trial < 2000; ++trial) {
        auto [mutated, kind] = mutate_adaptive(base, board, config, rng);
        ++kinds[kind];
        if (kind == MutationKind::Value) {
            CHECK(mutated.structural == base.structural);
        } else {
            CHECK(mutated.value == base.value);
        }
    }
    // With an empty scoreboard both kinds tie, so both must appear.
    CHECK(kinds[MutationKind::Structural] > 0);
    CHECK(kinds[MutationKind::Value] > 0);
}
