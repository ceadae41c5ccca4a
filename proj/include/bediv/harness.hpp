#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bediv/errors.hpp"
#include "bediv/generators.hpp"

namespace bediv {

enum class ValidityResult { Valid, Invalid, Failure };

std::string to_string(ValidityResult r);
bool parse_validity(const std::string& text, ValidityResult& out);

using BranchId = int;

// Thrown by a SUT when one of its seeded faults fires. The site id is stable
// and used for crash deduplication.
struct SutFault : std::runtime_error {
    SutFault(int site_id, const std::string& what) : std::runtime_error(what), site(site_id) {}
    int site;
};

// Result of one SUT run. trace_id is a 64-bit digest of the branch-event
// stream with per-branch hit counts bucketed AFL-style
// ({1,2,3,4-7,8-15,16-31,32-127,128+}) before hashing.
struct ExecutionRecord {
    ValidityResult result = ValidityResult::Invalid;
    std::vector<BranchId> covered; // sorted, unique
    std::uint64_t trace_id = 0;
    int fault_site = 0; // nonzero iff result == Failure from a seeded fault
};

// Maps a raw hit count to its AFL-style power-of-two bucket (1..8).
int hit_bucket(std::uint32_t count);

// Per-run branch counter table. A run context must be active (see ActiveRun)
// for probe() to be legal.
class RunContext {
public:
    void hit(BranchId branch);
    bool empty() const { return order_.empty(); }
    std::vector<BranchId> covered() const;
    std::uint64_t trace_id() const;

private:
    std::vector<BranchId> order_; // first-occurrence order
    std::vector<std::uint32_t> counts_;
    std::vector<int> index_; // branch -> slot + 1, grown on demand
};

// Increments the branch counter of the active run context.
void probe(BranchId branch);

// RAII activation of a run context for the current thread.
class ActiveRun {
public:
    ActiveRun();
    ~ActiveRun();
    ActiveRun(const ActiveRun&) = delete;
    ActiveRun& operator=(const ActiveRun&) = delete;
    RunContext& context() { return ctx_; }

private:
    RunContext ctx_;
    RunContext* previous_;
};

// An instrumented benchmark SUT. The body probes branch coverage while
// executing and returns the validity verdict; seeded faults throw SutFault.
struct BenchmarkSut {
    std::string name;
    std::function<ValidityResult(const std::string&)> body;
    bool seeded_faults = false;
};

// Executes the SUT on the serialized input. Uncaught SUT faults become
// Failure records with whatever coverage accumulated before the fault.
ExecutionRecord run(const BenchmarkSut& sut, const std::string& concrete);
ExecutionRecord run(const BenchmarkSut& sut, const GeneratedInput& input);

// Bundled SUTs:
//   bst_checker  - parses the tree serialization, Valid iff strict BST order.
//   xml_validator- Valid iff well-formed plus a small fixed nesting schema.
//   expr_eval    - parses and evaluates expressions; Valid iff evaluation
//                  completes in bounds; carries three seeded faults.
ValidityResult bst_checker(const std::string& text);
ValidityResult xml_validator(const std::string& text);
ValidityResult expr_eval(const std::string& text, bool seeded_faults);

// Seeded fault sites in expr_eval.
constexpr int kFaultDivByLiteralZero = 1;
constexpr int kFaultDeepNesting = 2;
constexpr int kFaultOperatorPair = 3;

// Registry of bundled SUTs: "bst", "xml", "expr" (faults enabled).
const BenchmarkSut* find_sut(const std::string& name);
std::vector<std::string> sut_names();

// Trace-log line: run_index,result,trace_id(hex),branch,branch,...
std::string trace_log_line(std::uint64_t run_index, const ExecutionRecord& record);

} // namespace bediv
