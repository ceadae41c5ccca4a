#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <span>
#include <vector>

#include "bediv/errors.hpp"
#include "bediv/harness.hpp"

namespace bediv {

// Per-branch abundance: c(b) = number of unique traces that executed branch
// b. All stored counts are >= 1.
class AbundanceVector {
public:
    // Credits one new unique trace covering the given branches.
    void add_trace(std::span<const BranchId> covered);

    bool empty() const { return entries_.empty(); }
    std::size_t richness() const { return entries_.size(); }
    std::uint64_t total() const { return total_; }
    const std::map<BranchId, std::uint64_t>& entries() const { return entries_; }
    std::vector<std::uint64_t> counts() const;

private:
    std::map<BranchId, std::uint64_t> entries_;
    std::uint64_t total_ = 0;
};

// Hill number of order q over positive abundance counts: normalizes
// p_i = c_i / sum(c) and returns (sum p_i^q)^(1/(1-q)); within 1e-9 of q = 1
// the Shannon exponential exp(-sum p_i ln p_i) is used instead.
double hill_number(std::span<const std::uint64_t> counts, double q);

// B(q): the Hill number over a branch abundance distribution. B(0) is the
// number of covered branches.
double behavioral_diversity(const AbundanceVector& abundance, double q);

struct DiversityProfile {
    double b0 = 0;
    double b1 = 0;
    double b2 = 0;
    std::int64_t elapsed_ms = 0;
};

DiversityProfile profile_of(const AbundanceVector& abundance, std::int64_t elapsed_ms = 0);

// Builds the abundance vector from a harness trace log
// (run_index,result,trace_id,branch,...). Lines are deduplicated by
// trace_id, first occurrence wins; with valid_only only Valid lines are
// considered. Throws MalformedLine with the 1-based line number.
AbundanceVector abundance_from_trace_log(std::istream& log, bool valid_only);

// Replays a trace log and emits one (b0, b1, b2) profile per interval_runs
// log lines (and one final profile for a partial tail). elapsed_ms carries
// the line count at the snapshot.
std::vector<DiversityProfile> profile_series(std::istream& log, std::uint64_t interval_runs,
                                             bool valid_only);

} // namespace bediv
