#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "bediv/errors.hpp"

namespace bediv {

// Which of the two parameter sequences a typed choice draws from. Structural
// choices steer the generator's control flow (input shape); value choices
// only fill in content.
enum class ChoiceKind { Structural, Value };

// 128-bit digest identifying a consumed structural byte prefix. Fixed
// algorithm and seed, so digests are stable across processes and platforms.
struct StructuralSignature {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;

    friend bool operator==(const StructuralSignature&, const StructuralSignature&) = default;
    friend auto operator<=>(const StructuralSignature&, const StructuralSignature&) = default;

    std::string hex() const;
};

struct SignatureHash {
    std::size_t operator()(const StructuralSignature& s) const noexcept {
        return static_cast<std::size_t>(s.hi ^ (s.lo * 0x9e3779b97f4a7c15ULL));
    }
};

StructuralSignature digest128(std::span<const std::uint8_t> bytes);

// An untyped octet stream with a read cursor. Replaying from cursor 0 with
// the same consumer yields byte-for-byte identical consumption.
class ParameterSequence {
public:
    ParameterSequence() = default;
    explicit ParameterSequence(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}

    const std::vector<std::uint8_t>& bytes() const { return bytes_; }
    std::size_t cursor() const { return cursor_; }
    std::size_t remaining() const { return bytes_.size() - cursor_; }

    std::span<const std::uint8_t> consumed() const {
        return {bytes_.data(), cursor_};
    }

    void reset() { cursor_ = 0; }

    // Reads n octets, advancing the cursor. The caller guarantees enough
    // bytes are present; SplitParameterSequence handles extension.
    void read(std::uint8_t* out, std::size_t n);

    void append(std::uint8_t b) { bytes_.push_back(b); }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t cursor_ = 0;
};

// The (structural, value) byte snapshot that fully determines one generated
// input. This is what the corpus, the mutators, and the BDVF files carry.
struct ParamsSnapshot {
    std::vector<std::uint8_t> structural;
    std::vector<std::uint8_t> value;

    friend bool operator==(const ParamsSnapshot&, const ParamsSnapshot&) = default;
};

// The tuple of disjoint structural and value parameter sequences behind the
// typed choice API. In record-extend mode an exhausted sequence is extended
// with fresh octets from the seeded engine; in strict mode exhaustion throws
// SequenceExhausted (used for replay).
class SplitParameterSequence {
public:
    // Fresh recording source: both sequences empty, extension enabled.
    static SplitParameterSequence recording(std::uint64_t engine_seed);

    // Replay of recorded bytes; any read past the end throws.
    static SplitParameterSequence replaying(ParamsSnapshot snapshot);

    // Existing bytes with record-extend semantics, for mutated sequences
    // that may consume more than the parent did.
    static SplitParameterSequence extending(ParamsSnapshot snapshot, std::uint64_t engine_seed);

    std::vector<std::uint8_t> next_bytes(ChoiceKind kind, std::size_t n);

    // Consumes 4 octets (unsigned 32-bit LE), reduced modulo the domain size.
    std::int64_t choose_int(ChoiceKind kind, std::int64_t lo, std::int64_t hi);

    // Consumes 1 octet; false iff its least-significant bit is 0.
    bool choose_bool(ChoiceKind kind);

    template <typename T>
    T choose_from(ChoiceKind kind, const std::vector<T>& domain) {
        if (domain.empty()) throw InvalidDomain("choose_from: empty domain");
        auto idx = choose_int(kind, 0, static_cast<std::int64_t>(domain.size()) - 1);
        return domain[static_cast<std::size_t>(idx)];
    }

    // Digest over the structural octets consumed so far.
    StructuralSignature structural_signature() const;

    // Rewinds both cursors to 0; bytes are kept.
    void reset();

    bool strict() const { return strict_; }
    const ParameterSequence& structural() const { return structural_; }
    const ParameterSequence& value() const { return value_; }

    // Bytes actually consumed so far, trimmed to the cursors.
    ParamsSnapshot consumed_snapshot() const;

private:
    SplitParameterSequence() = default;

    ParameterSequence& sequence(ChoiceKind kind) {
        return kind == ChoiceKind::Structural ? structural_ : value_;
    }
    void ensure_available(ChoiceKind kind, std::size_t n);

    ParameterSequence structural_;
    ParameterSequence value_;
    std::mt19937_64 engine_;
    bool strict_ = false;
};

// BDVF parameter file format: magic "BDVF", version u16 LE, structural
// length u32 LE, value length u32 LE, structural bytes, value bytes.
void write_params_file(const std::string& path, const ParamsSnapshot& snapshot);
ParamsSnapshot read_params_file(const std::string& path);

// A (location, domain, kind) descriptor of one random-choice site in a
// generator. Locations are unique within a generator.
struct ChoicePoint {
    std::string location;
    std::size_t domain_size = 0;
    ChoiceKind kind = ChoiceKind::Value;
};

} // namespace bediv
