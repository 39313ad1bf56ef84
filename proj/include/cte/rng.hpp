#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace cte {

/// SplitMix64 finalizer. Used both as a mixing function for seed derivation
/// and as the step function of SplitMix64Engine.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derive a child seed from a parent seed and a sequence of stream labels.
/// Every stochastic entity (subset, row, user, pair) gets its own seed so the
/// result never depends on the order in which entities are processed.
constexpr std::uint64_t derive_seed(std::uint64_t seed) noexcept { return mix64(seed); }

template <typename... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label, Rest... rest) noexcept
{
    return derive_seed(mix64(seed ^ mix64(label + 0x9e3779b97f4a7c15ULL)), rest...);
}

/// FNV-1a; stable across platforms, unlike std::hash.
constexpr std::uint64_t hash_string(std::string_view s) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Small counter-style engine satisfying UniformRandomBitGenerator. Cheap to
/// construct, so one instance per row or per subset is fine.
class SplitMix64Engine {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64Engine(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

} // namespace cte
