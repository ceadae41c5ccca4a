#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bediv {

// Strict replay ran past the end of a recorded parameter sequence.
struct SequenceExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A typed choice was requested over an empty or inverted domain.
struct InvalidDomain : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// probe() was called with no active run context.
struct ProbeOutsideRun : std::logic_error {
    using std::logic_error::logic_error;
};

struct EmptyAbundance : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NonPositiveCount : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct MalformedLine : std::runtime_error {
    MalformedLine(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_no(line) {}
    std::size_t line_no;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bediv
