#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hpland/search_space.hpp"

namespace hpland {

// Gray-code Sobol sequence over [0,1)^n with Joe-Kuo direction numbers.
// Index 0 of the raw sequence is the all-zeros point; sampling entry points
// below skip it.
class SobolSequence {
public:
    static constexpr std::size_t kMaxDimension = 16;
    static constexpr unsigned kBits = 32;

    explicit SobolSequence(std::size_t dimension);

    // Raw point at the current index, then advance.
    UnitVector next();

    // Integer lattice form of next(): each coordinate is value * 2^-32.
    const std::vector<std::uint32_t>& next_bits();

    void skip(std::size_t count);
    std::size_t index() const { return index_; }
    std::size_t dimension() const { return dim_; }

private:
    std::size_t dim_;
    std::size_t index_ = 0;
    std::vector<std::uint32_t> state_;
    std::vector<std::array<std::uint32_t, kBits>> directions_;
};

// `count` scrambled quasi-random configurations in [0,1)^n. The raw all-zeros
// point is skipped before scrambling; scrambling is a per-dimension digital
// XOR shift derived from `seed`, so output is a pure function of
// (space dimension, count, seed).
std::vector<UnitVector> sobol_sample(const SearchSpace& space, std::size_t count, std::uint64_t seed);

// Same skip rule, no scrambling. First 1-D points: 0.5, 0.75, 0.25, ...
std::vector<UnitVector> sobol_sample_unscrambled(const SearchSpace& space, std::size_t count);

}  // namespace hpland
