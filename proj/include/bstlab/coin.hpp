#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace bstlab {

// 64-bit finalizer (splitmix64). Used to derive decorrelated generator seeds
// from (base, index) pairs so that streams that happen to share a base seed
// do not share state.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Uniform double in [0, 1) built from the top 53 bits of one draw. Avoids
// std::uniform_real_distribution so the stream is identical on every
// platform for a given seed.
inline double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Exactly uniform integer in [0, bound) by rejection sampling.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        const std::uint64_t x = rng();
        if (x < limit) return x % bound;
    }
}

/// Seeded Bernoulli stream: each draw is tail with probability `p_tail`.
///
/// The sole randomness entry point for the rebalancing schemes. Convention:
/// draw u uniform in [0,1), tail iff u < p. This makes p=0 deterministically
/// head and p=1 deterministically tail with no special-casing.
class CoinSource {
public:
    CoinSource(double p_tail, std::uint64_t seed) : p_tail_(p_tail), rng_(seed) {
        if (!(p_tail >= 0.0 && p_tail <= 1.0))
            throw std::invalid_argument("CoinSource: p_tail must lie in [0,1]");
    }

    // True = tail (move up), false = head (stop and rotate).
    bool tail() {
        ++flips_drawn_;
        return unit_double(rng_) < p_tail_;
    }

    double p_tail() const { return p_tail_; }
    std::uint64_t flips_drawn() const { return flips_drawn_; }

private:
    double p_tail_;
    std::mt19937_64 rng_;
    std::uint64_t flips_drawn_ = 0;
};

}  // namespace bstlab
