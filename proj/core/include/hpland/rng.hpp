#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace hpland {

// One SplitMix64 step. Used for seed mixing and cheap stateless hashes.
std::uint64_t splitmix64(std::uint64_t& state);

// Collapses several seed components into one stream seed. Mixing is
// order-sensitive, so (a, b) and (b, a) give unrelated streams.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

// Deterministic random stream. std::mt19937_64 has a fully specified output
// sequence; the double conversions below avoid std::*_distribution, whose
// results vary across standard library implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    // Standard normal via Box-Muller; pairs are cached.
    double normal();

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Uniform index in [0, bound). bound must be positive.
    std::size_t uniform_index(std::size_t bound) { return static_cast<std::size_t>(next_u64() % bound); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Fisher-Yates shuffle driven by RngStream, so fold assignments and similar
// shuffles reproduce across platforms.
template <typename T>
void shuffle(std::vector<T>& items, RngStream& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = rng.uniform_index(i);
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace hpland
