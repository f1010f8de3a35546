#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>

namespace omni {

// Opaque task identifier. Wraps the canonical text so two ids compare equal
// exactly when the tasks are the same.
class TaskId {
public:
    TaskId() = default;
    explicit TaskId(std::string s) : value_(std::move(s)) {}
    const std::string& str() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }
    auto operator<=>(const TaskId&) const = default;
    bool operator==(const TaskId&) const = default;

private:
    std::string value_;
};

enum class VerdictSource { oracle, embedding, fm, cached };

inline const char* to_string(VerdictSource s) {
    switch (s) {
        case VerdictSource::oracle: return "oracle";
        case VerdictSource::embedding: return "embedding";
        case VerdictSource::fm: return "fm";
        case VerdictSource::cached: return "cached";
    }
    return "?";
}

struct InterestVerdict {
    TaskId task;
    bool interesting = true;
    VerdictSource source = VerdictSource::oracle;
};

using Rng = std::mt19937_64;

// [0,1) from the top 53 bits; does not depend on libstdc++'s
// generate_canonical so sequences stay fixed across toolchains.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased index in [0, n) by rejection.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

// Independent stream for (seed, purpose). splitmix64 mixing.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + stream + 0x632BE59BD9B4E019ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return Rng(z);
}

}  // namespace omni

template <>
struct std::hash<omni::TaskId> {
    std::size_t operator()(const omni::TaskId& t) const noexcept {
        return std::hash<std::string>{}(t.str());
    }
};
