#pragma once

#include <cstdint>
#include <random>

namespace imedub {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Owned, seedable stream of random numbers. One per simulation run; never
/// shared between threads.
class RandomStream {
public:
    using engine_type = std::mt19937_64;

    explicit RandomStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    engine_type& engine() noexcept { return engine_; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// Uniform on [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    bool coin() { return (engine_() >> 63) != 0; }

    /// An independent child stream. Deterministic given this stream's state.
    RandomStream split() { return RandomStream(splitmix64(engine_() ^ 0xD1B54A32D192ED03ULL)); }

private:
    engine_type engine_;
    std::uint64_t seed_;
};

}  // namespace imedub
