#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bediv/choice_source.hpp"
#include "bediv/errors.hpp"
#include "bediv/generators.hpp"
#include "bediv/harness.hpp"

using namespace bediv;

namespace {

BenchmarkSut probe_replayer(std::vector<BranchId> probes) {
    return BenchmarkSut{
        "replayer",
        [probes = std::move(probes)](const std::string&) {
            for (BranchId b : probes) probe(b);
            return ValidityResult::Valid;
        },
        false};
}

// Independent oracle for BST validity: flatten the serialized tree with a
// tiny standalone parser and check the inorder walk is strictly increasing.
struct FlatParser {
    const std::string& text;
    std::size_t pos = 0;
    bool ok = true;
    std::vector<long> inorder;

    explicit FlatParser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && text[pos] == ' ') ++pos;
    }

    bool parse_int(long& out) {
        std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) return false;
        out = std::stol(text.substr(start, pos - start));
        return true;
    }

    // node := int | "(" ")" | "(" int node node ")" | "(" int ")"
    bool parse_node(bool allow_empty) {
        skip_ws();
        if (pos >= text.size()) return false;
        if (text[pos] != '(') {
            long v;
            if (!parse_int(v)) return false;
            inorder.push_back(v);
            return true;
        }
        ++pos;
        skip_ws();
        if (allow_empty && pos < text.size() && text[pos] == ')') {
            ++pos;
            return true;
        }
        long v;
        if (!parse_int(v)) return false;
        skip_ws();
        if (pos < text.size() && text[pos] == ')') {
            inorder.push_back(v);
            ++pos;
            return true;
        }
        std::size_t left_mark = inorder.size();
        if (!parse_node(true)) return false;
        (void)left_mark;
        inorder.push_back(v);
        if (!parse_node(true)) return false;
        skip_ws();
        if (pos >= text.size() || text[pos] != ')') return false;
        ++pos;
        return true;
    }
};

bool oracle_bst_valid(const std::string& text) {
    FlatParser p(text);
    if (!p.parse_node(false)) return false;
    p.skip_ws();
    if (p.pos != p.text.size()) return false;
    return std::is_sorted(p.inorder.begin(), p.inorder.end(),
                          [](long a, long b) { return a <= b; });
}

} // namespace

TEST_CASE("probe outside a run throws") {
    CHECK_THROWS_AS(probe(1), ProbeOutsideRun);
}

TEST_CASE("execution records collapse hit counts into the covered set") {
    ExecutionRecord record = run(probe_replayer({1, 2, 2, 3}), "x");
    CHECK(record.result == ValidityResult::Valid);
    CHECK(record.covered == std::vector<BranchId>{1, 2, 3});
}

TEST_CASE("trace identity respects hit buckets") {
    auto id_of = [](std::vector<BranchId> probes) {
        return run(probe_replayer(std::move(probes)), "x").trace_id;
    };
    SUBCASE("different bucket for branch 2 gives a different trace") {
        CHECK(id_of({1, 2, 2, 3}) != id_of({1, 2, 3}));
    }
    SUBCASE("counts inside the same bucket coincide") {
        // 4 and 7 both fall in the 4-7 bucket.
        CHECK(id_of({2, 2, 2, 2}) == id_of({2, 2, 2, 2, 2, 2, 2}));
    }
    SUBCASE("first-occurrence order matters") {
        CHECK(id_of({1, 2}) != id_of({2, 1}));
    }
    SUBCASE("identity is stable across runs") {
        CHECK(id_of({5, 9, 5}) == id_of({5, 9, 5}));
    }
}

TEST_CASE("hit bucket boundaries") {
    CHECK(hit_bucket(1) == 1);
    CHECK(hit_bucket(2) == 2);
    CHECK(hit_bucket(3) == 3);
    CHECK(hit_bucket(4) == 4);
    CHECK(hit_bucket(7) == 4);
    CHECK(hit_bucket(8) == 5);
    CHECK(hit_bucket(15) == 5);
    CHECK(hit_bucket(16) == 6);
    CHECK(hit_bucket(31) == 6);
    CHECK(hit_bucket(32) == 7);
    CHECK(hit_bucket(127) == 7);
    CHECK(hit_bucket(128) == 8);
    CHECK(hit_bucket(100000) == 8);
}

TEST_CASE("bst checker verdicts") {
    const BenchmarkSut* sut = find_sut("bst");
    REQUIRE(sut != nullptr);
    CHECK(run(*sut, "(5 (3) (7))").result == ValidityResult::Valid);
    CHECK(run(*sut, "(3 (5) (7))").result == ValidityResult::Invalid);
    CHECK(run(*sut, "7").result == ValidityResult::Valid);
    CHECK(run(*sut, "(5 (5) (7))").result == ValidityResult::Invalid);
    CHECK(run(*sut, "not a tree").result == ValidityResult::Invalid);

    SUBCASE("agrees with an independent inorder oracle on generated trees") {
        for (std::uint64_t seed = 0; seed < 400; ++seed) {
            auto src = SplitParameterSequence::recording(seed);
            std::string tree = generate_tree(src, kTreeDefaultDepth).concrete;
            bool expected = oracle_bst_valid(tree);
            bool actual = run(*sut, tree).result == ValidityResult::Valid;
            CAPTURE(tree);
            CHECK(actual == expected);
        }
    }
}

TEST_CASE("xml validator verdicts") {
    const BenchmarkSut* sut = find_sut("xml");
    REQUIRE(sut != nullptr);
    CHECK(run(*sut, "<a></a>").result == ValidityResult::Valid);
    CHECK(run(*sut, "<a><b></b></a>").result == ValidityResult::Valid);
    // Root tag must be one of a, b, c.
    CHECK(run(*sut, "<f></f>").result == ValidityResult::Invalid);
    // Children must carry a strictly larger tag than their parent.
    CHECK(run(*sut, "<b><a></a></b>").result == ValidityResult::Invalid);
    // Attributes are only legal on even-index tags (a, c, e, ...).
    CHECK(run(*sut, "<a id=\"3\"></a>").result == ValidityResult::Valid);
    CHECK(run(*sut, "<b id=\"3\"></b>").result == ValidityResult::Invalid);
    // Mismatched close tag is a parse failure, not a crash.
    CHECK(run(*sut, "<a></b>").result == ValidityResult::Invalid);
    // Nesting is capped at 3 levels below the root.
    CHECK(run(*sut, "<a><b><c><d></d></c></b></a>").result == ValidityResult::Valid);
    CHECK(run(*sut, "<a><b><c><d><e></e></d></c></b></a>").result ==
          ValidityResult::Invalid);
}

TEST_CASE("expression evaluator verdicts and seeded faults") {
    const BenchmarkSut* sut = find_sut("expr");
    REQUIRE(sut != nullptr);
    SUBCASE("plain evaluation") {
        CHECK(run(*sut, "7").result == ValidityResult::Valid);
        CHECK(run(*sut, "(1 + 2)").result == ValidityResult::Valid);
        CHECK(run(*sut, "(let x0 = 3 in (x0 * x0))").result == ValidityResult::Valid);
        // Free variables are rejected, not crashed on.
        CHECK(run(*sut, "x2").result == ValidityResult::Invalid);
        CHECK(run(*sut, "(let x0 = 1 in x1)").result == ValidityResult::Invalid);
        CHECK(run(*sut, "garbage").result == ValidityResult::Invalid);
    }
    SUBCASE("fault 1: division by a literal zero") {
        ExecutionRecord record = run(*sut, "(4 / 0)");
        CHECK(record.result == ValidityResult::Failure);
        CHECK(record.fault_site == kFaultDivByLiteralZero);
    }
    SUBCASE("division by a computed zero is merely invalid") {
        CHECK(run(*sut, "(4 / (1 - 1))").result == ValidityResult::Invalid);
    }
    SUBCASE("fault 2: nesting at or beyond the guard depth") {
        std::string deep = "(1 + (1 + (1 + (1 + (1 + (1 + 1))))))";
        ExecutionRecord record = run(*sut, deep);
        CHECK(record.result == ValidityResult::Failure);
        CHECK(record.fault_site == kFaultDeepNesting);
    }
    SUBCASE("fault 3: multiply with a subtraction on the right") {
        ExecutionRecord record = run(*sut, "(2 * (3 - 1))");
        CHECK(record.result == ValidityResult::Failure);
        CHECK(record.fault_site == kFaultOperatorPair);
        // Subtraction on the left is fine.
        CHECK(run(*sut, "((3 - 1) * 2)").result == ValidityResult::Valid);
    }
    SUBCASE("faults are gated behind the seeded-fault switch") {
        BenchmarkSut safe{"expr-safe",
                          [](const std::string& t) { return expr_eval(t, false); },
                          false};
        CHECK(run(safe, "(4 / 0)").result == ValidityResult::Invalid);
        CHECK(run(safe, "(2 * (3 - 1))").result == ValidityResult::Valid);
    }
}

TEST_CASE("failures interrupt the trace but keep the prefix") {
    ExecutionRecord record = run(
        BenchmarkSut{"boom",
                     [](const std::string&) -> ValidityResult {
                         probe(40);
                         probe(41);
                         throw SutFault(9, "boom");
                     },
                     true},
        "x");
    CHECK(record.result == ValidityResult::Failure);
    CHECK(record.fault_site == 9);
    CHECK(record.covered == std::vector<BranchId>{40, 41});
}

TEST_CASE("validity result round-trips through text") {
    for (auto result : {ValidityResult::Valid, ValidityResult::Invalid,
                        ValidityResult::Failure}) {
        ValidityResult parsed;
        REQUIRE(parse_validity(to_string(result), parsed));
        CHECK(parsed == result);
    }
    ValidityResult ignored;
    CHECK_FALSE(parse_validity("weird", ignored));
}

TEST_CASE("trace log line format") {
    ExecutionRecord record = run(probe_replayer({1, 2, 2, 3}), "x");
    std::string line = trace_log_line(7, record);
    std::istringstream fields(line);
    std::string token;
    std::getline(fields, token, ',');
    CHECK(token == "7");
    std::getline(fields, token, ',');
    CHECK(token == "Valid");
    std::getline(fields, token, ',');
    CHECK(token.size() == 16); // zero-padded hex trace id
    std::vector<std::string> branches;
    while (std::getline(fields, token, ',')) branches.push_back(token);
    CHECK(branches == std::vector<std::string>{"1", "2", "3"});
}

TEST_CASE("sut registry") {
    CHECK(find_sut("bst"));
    CHECK(find_sut("xml"));
    CHECK(find_sut("expr"));
    CHECK_FALSE(find_sut("nope"));
    CHECK(sut_names().size() == 3);
}
