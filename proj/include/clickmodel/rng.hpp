#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace clickmodel {

/// 64-bit FNV-1a. Stable across platforms; used to derive per-key substreams
/// so parallel workers never share generator state.
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// mt19937_64 with explicit mappings instead of std distributions, which are
/// implementation-defined and would make seeded runs compiler-dependent.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double next_unit() { return (gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    /// Uniform integer in [0, n). Modulo bias is negligible for small n.
    std::uint64_t next_below(std::uint64_t n) { return gen_() % n; }

    bool bernoulli(double p) { return next_unit() < p; }

  private:
    std::mt19937_64 gen_;
};

/// Deterministic substream for (seed, key), independent of processing order.
inline Rng substream(std::uint64_t seed, std::string_view key) {
    return Rng(splitmix64(seed) ^ fnv1a(key));
}

inline Rng substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(seed) ^ splitmix64(index + 0x51ed2701u));
}

}  // namespace clickmodel
