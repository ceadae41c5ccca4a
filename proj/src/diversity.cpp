#include "bediv/diversity.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <unordered_set>

namespace bediv {

void AbundanceVector::add_trace(std::span<const BranchId> covered) {
    for (BranchId b : covered) {
        ++entries_[b];
        ++total_;
    }
}

std::vector<std::uint64_t> AbundanceVector::counts() const {
    std::vector<std::uint64_t> out;
    out.reserve(entries_.size());
    for (const auto& [branch, count] : entries_) out.push_back(count);
    return out;
}

double hill_number(std::span<const std::uint64_t> counts, double q) {
    if (counts.empty()) throw EmptyAbundance("hill_number: empty abundance vector");
    long double total = 0;
    for (std::uint64_t c : counts) {
        if (c == 0) throw NonPositiveCount("hill_number: zero abundance count");
        total += static_cast<long double>(c);
    }
    if (std::abs(q - 1.0) <= 1e-9) {
        // q -> 1 limit: exponential of the Shannon index.
        long double shannon = 0;
        for (std::uint64_t c : counts) {
            long double p = static_cast<long double>(c) / total;
            shannon -= p * std::log(p);
        }
        return static_cast<double>(std::exp(shannon));
    }
    long double sum = 0;
    for (std::uint64_t c : counts) {
        long double p = static_cast<long double>(c) / total;
        sum += std::pow(p, static_cast<long double>(q));
    }
    return static_cast<double>(std::pow(sum, 1.0L / (1.0L - static_cast<long double>(q))));
}

double behavioral_diversity(const AbundanceVector& abundance, double q) {
    auto counts = abundance.counts();
    return hill_number(counts, q);
}

DiversityProfile profile_of(const AbundanceVector& abundance, std::int64_t elapsed_ms) {
    DiversityProfile p;
    p.elapsed_ms = elapsed_ms;
    if (abundance.empty()) return p;
    auto counts = abundance.counts();
    p.b0 = hill_number(counts, 0.0);
    p.b1 = hill_number(counts, 1.0);
    p.b2 = hill_number(counts, 2.0);
    return p;
}

namespace {

struct TraceLine {
    ValidityResult result;
    std::uint64_t trace_id;
    std::vector<BranchId> branches;
};

TraceLine parse_trace_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 3) throw MalformedLine(line_no, "expected run_index,result,trace_id");
    TraceLine out;
    try {
        (void)std::stoull(fields[0]);
    } catch (...) {
        throw MalformedLine(line_no, "bad run index '" + fields[0] + "'");
    }
    if (!parse_validity(fields[1], out.result))
        throw MalformedLine(line_no, "bad result '" + fields[1] + "'");
    try {
        out.trace_id = std::stoull(fields[2], nullptr, 16);
    } catch (...) {
        throw MalformedLine(line_no, "bad trace id '" + fields[2] + "'");
    }
    for (std::size_t i = 3; i < fields.size(); ++i) {
        try {
            out.branches.push_back(std::stoi(fields[i]));
        } catch (...) {
            throw MalformedLine(line_no, "bad branch id '" + fields[i] + "'");
        }
    }
    return out;
}

} // namespace

AbundanceVector abundance_from_trace_log(std::istream& log, bool valid_only) {
    AbundanceVector av;
    std::unordered_set<std::uint64_t> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(log, line)) {
        ++line_no;
        if (line.empty()) continue;
        TraceLine parsed = parse_trace_line(line, line_no);
        if (valid_only && parsed.result != ValidityResult::Valid) continue;
        if (!seen.insert(parsed.trace_id).second) continue;
        av.add_trace(parsed.branches);
    }
    return av;
}

std::vector<DiversityProfile> profile_series(std::istream& log, std::uint64_t interval_runs,
                                             bool valid_only) {
    if (interval_runs == 0) interval_runs = 1;
    std::vector<DiversityProfile> series;
    AbundanceVector av;
    std::unordered_set<std::uint64_t> seen;
    std::string line;
    std::size_t line_no = 0;
    std::uint64_t since_snapshot = 0;
    while (std::getline(log, line)) {
        ++line_no;
        if (line.empty()) continue;
        TraceLine parsed = parse_trace_line(line, line_no);
        if (!(valid_only && parsed.result != ValidityResult::Valid) &&
            seen.insert(parsed.trace_id).second) {
            av.add_trace(parsed.branches);
        }
        if (++since_snapshot == interval_runs) {
            series.push_back(profile_of(av, static_cast<std::int64_t>(line_no)));
            since_snapshot = 0;
        }
    }
    if (since_snapshot != 0) {
        series.push_back(profile_of(av, static_cast<std::int64_t>(line_no)));
    }
    return series;
}

} // namespace bediv
