#pragma once

#include <cstdint>
#include <random>

namespace ergm {

/// Seedable generator with platform-independent output. The engine is
/// std::mt19937_64 (fully specified by the standard); seeds are scrambled
/// with SplitMix64, bounded integers use Lemire's multiply-and-reject
/// method, and uniforms take the top 53 bits. The standard distribution
/// classes are avoided because their output is implementation-defined.
class Rng {
public:
    static constexpr const char* kAlgorithm = "mt19937_64+splitmix64-seed+lemire-bounded+u53";

    explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(splitmix64(seed)) {}

    static std::uint64_t splitmix64(std::uint64_t x) noexcept {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = -bound % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Independent stream for replica i derived from this generator's seed.
    Rng split(std::uint64_t i) const { return Rng(splitmix64(seed_ ^ splitmix64(i + 1))); }

    friend bool operator==(const Rng& a, const Rng& b) { return a.seed_ == b.seed_ && a.engine_ == b.engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace ergm
