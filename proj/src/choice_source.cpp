#include "bediv/choice_source.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace bediv {

namespace {

std::uint64_t fmix64(std::uint64_t k) {
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    k *= 0xc4ceb9fe1a85ec53ULL;
    k ^= k >> 33;
    return k;
}

} // namespace

StructuralSignature digest128(std::span<const std::uint8_t> bytes) {
    // Two independent FNV-1a lanes with distinct offsets, cross-mixed in the
    // finalizer. Not cryptographic; fixed constants keep it stable.
    std::uint64_t h1 = 0xcbf29ce484222325ULL;
    std::uint64_t h2 = 0x9ae16a3b2f90404fULL;
    for (std::uint8_t b : bytes) {
        h1 = (h1 ^ b) * 0x100000001b3ULL;
        h2 = (h2 ^ b) * 0x9ddfea08eb382d69ULL;
    }
    h1 ^= bytes.size();
    h2 += bytes.size();
    StructuralSignature sig;
    sig.hi = fmix64(h1 + 0x2d358dccaa6c78a5ULL * h2);
    sig.lo = fmix64(h2 ^ (h1 >> 17) ^ 0x8bb84b93962eacc9ULL);
    return sig;
}

std::string StructuralSignature::hex() const {
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx",
                  static_cast<unsigned long long>(hi),
                  static_cast<unsigned long long>(lo));
    return buf;
}

void ParameterSequence::read(std::uint8_t* out, std::size_t n) {
    std::memcpy(out, bytes_.data() + cursor_, n);
    cursor_ += n;
}

SplitParameterSequence SplitParameterSequence::recording(std::uint64_t engine_seed) {
    SplitParameterSequence s;
    s.engine_.seed(engine_seed);
    return s;
}

SplitParameterSequence SplitParameterSequence::replaying(ParamsSnapshot snapshot) {
    SplitParameterSequence s;
    s.structural_ = ParameterSequence(std::move(snapshot.structural));
    s.value_ = ParameterSequence(std::move(snapshot.value));
    s.strict_ = true;
    return s;
}

SplitParameterSequence SplitParameterSequence::extending(ParamsSnapshot snapshot,
                                                         std::uint64_t engine_seed) {
    SplitParameterSequence s;
    s.structural_ = ParameterSequence(std::move(snapshot.structural));
    s.value_ = ParameterSequence(std::move(snapshot.value));
    s.engine_.seed(engine_seed);
    return s;
}

void SplitParameterSequence::ensure_available(ChoiceKind kind, std::size_t n) {
    ParameterSequence& seq = sequence(kind);
    if (seq.remaining() >= n) return;
    if (strict_) {
        throw SequenceExhausted(kind == ChoiceKind::Structural
                                    ? "structural sequence exhausted"
                                    : "value sequence exhausted");
    }
    std::size_t missing = n - seq.remaining();
    for (std::size_t i = 0; i < missing; ++i) {
        seq.append(static_cast<std::uint8_t>(engine_() & 0xff));
    }
}

std::vector<std::uint8_t> SplitParameterSequence::next_bytes(ChoiceKind kind, std::size_t n) {
    ensure_available(kind, n);
    std::vector<std::uint8_t> out(n);
    sequence(kind).read(out.data(), n);
    return out;
}

std::int64_t SplitParameterSequence::choose_int(ChoiceKind kind, std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw InvalidDomain("choose_int: lo > hi");
    ensure_available(kind, 4);
    std::uint8_t raw[4];
    sequence(kind).read(raw, 4);
    std::uint32_t u = static_cast<std::uint32_t>(raw[0]) |
                      static_cast<std::uint32_t>(raw[1]) << 8 |
                      static_cast<std::uint32_t>(raw[2]) << 16 |
                      static_cast<std::uint32_t>(raw[3]) << 24;
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(u % span);
}

bool SplitParameterSequence::choose_bool(ChoiceKind kind) {
    ensure_available(kind, 1);
    std::uint8_t raw;
    sequence(kind).read(&raw, 1);
    return (raw & 1) != 0;
}

StructuralSignature SplitParameterSequence::structural_signature() const {
    return digest128(structural_.consumed());
}

void SplitParameterSequence::reset() {
    structural_.reset();
    value_.reset();
}

ParamsSnapshot SplitParameterSequence::consumed_snapshot() const {
    auto s = structural_.consumed();
    auto v = value_.consumed();
    return {{s.begin(), s.end()}, {v.begin(), v.end()}};
}

namespace {

constexpr char kMagic[4] = {'B', 'D', 'V', 'F'};
constexpr std::uint16_t kVersion = 1;

void put_u16(std::ostream& os, std::uint16_t v) {
    char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
    os.write(b, 2);
}

void put_u32(std::ostream& os, std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>(v >> 24)};
    os.write(b, 4);
}

std::uint16_t get_u16(std::istream& is) {
    unsigned char b[2];
    is.read(reinterpret_cast<char*>(b), 2);
    return static_cast<std::uint16_t>(b[0] | b[1] << 8);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

} // namespace

void write_params_file(const std::string& path, const ParamsSnapshot& snapshot) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + path);
    os.write(kMagic, 4);
    put_u16(os, kVersion);
    put_u32(os, static_cast<std::uint32_t>(snapshot.structural.size()));
    put_u32(os, static_cast<std::uint32_t>(snapshot.value.size()));
    os.write(reinterpret_cast<const char*>(snapshot.structural.data()),
             static_cast<std::streamsize>(snapshot.structural.size()));
    os.write(reinterpret_cast<const char*>(snapshot.value.data()),
             static_cast<std::streamsize>(snapshot.value.size()));
    if (!os) throw IoError("write failed: " + path);
}

ParamsSnapshot read_params_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for reading: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("bad magic in " + path);
    std::uint16_t version = get_u16(is);
    if (!is || version != kVersion)
        throw IoError("unsupported format version in " + path);
    std::uint32_t slen = get_u32(is);
    std::uint32_t vlen = get_u32(is);
    if (!is) throw IoError("truncated header in " + path);
    ParamsSnapshot snap;
    snap.structural.resize(slen);
    snap.value.resize(vlen);
    is.read(reinterpret_cast<char*>(snap.structural.data()), slen);
    is.read(reinterpret_cast<char*>(snap.value.data()), vlen);
    if (!is) throw IoError("truncated payload in " + path);
    return snap;
}

} // namespace bediv
