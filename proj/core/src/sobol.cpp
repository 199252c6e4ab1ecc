#include "hpland/sobol.hpp"

#include <bit>

#include "hpland/errors.hpp"
#include "hpland/rng.hpp"

namespace hpland {

namespace {

// Joe-Kuo direction-number table (new-joe-kuo-6), dimensions 2..16.
// Dimension 1 is the van der Corput sequence (all m_j = 1).
struct PolyRow {
    unsigned degree;         // s
    unsigned coefficients;   // a, bits of the primitive polynomial interior
    std::array<std::uint32_t, 6> m;  // initial direction integers, m_1..m_s
};

constexpr std::array<PolyRow, 15> kJoeKuo = {{
    {1, 0, {1, 0, 0, 0, 0, 0}},
    {2, 1, {1, 3, 0, 0, 0, 0}},
    {3, 1, {1, 3, 1, 0, 0, 0}},
    {3, 2, {1, 1, 1, 0, 0, 0}},
    {4, 1, {1, 1, 3, 3, 0, 0}},
    {4, 4, {1, 3, 5, 13, 0, 0}},
    {5, 2, {1, 1, 5, 5, 17, 0}},
    {5, 4, {1, 1, 5, 5, 5, 0}},
    {5, 7, {1, 1, 7, 11, 19, 0}},
    {5, 11, {1, 1, 5, 1, 1, 0}},
    {5, 13, {1, 1, 1, 3, 11, 0}},
    {5, 14, {1, 3, 5, 5, 31, 0}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
}};

std::array<std::uint32_t, SobolSequence::kBits> build_directions(std::size_t dim_index) {
    constexpr unsigned bits = SobolSequence::kBits;
    std::array<std::uint32_t, bits> v{};
    if (dim_index == 0) {
        for (unsigned j = 1; j <= bits; ++j) {
            v[j - 1] = 1u << (bits - j);
        }
        return v;
    }
    const PolyRow& row = kJoeKuo[dim_index - 1];
    const unsigned s = row.degree;
    std::array<std::uint32_t, bits> m{};
    for (unsigned j = 0; j < s; ++j) {
        m[j] = row.m[j];
    }
    for (unsigned j = s; j < bits; ++j) {
        // m_j = 2a_1 m_{j-1} ^ 4a_2 m_{j-2} ^ ... ^ 2^s m_{j-s} ^ m_{j-s}
        std::uint32_t value = m[j - s] ^ (m[j - s] << s);
        for (unsigned k = 1; k < s; ++k) {
            std::uint32_t a_k = (row.coefficients >> (s - 1 - k)) & 1u;
            if (a_k != 0) {
                value ^= m[j - k] << k;
            }
        }
        m[j] = value;
    }
    for (unsigned j = 1; j <= bits; ++j) {
        v[j - 1] = m[j - 1] << (bits - j);
    }
    return v;
}

constexpr double kScale = 0x1.0p-32;

}  // namespace

SobolSequence::SobolSequence(std::size_t dimension) : dim_(dimension) {
    if (dimension == 0) {
        throw ValidationError("Sobol sequence dimension must be >= 1");
    }
    if (dimension > kMaxDimension) {
        throw ValidationError("Sobol sequence supports up to " + std::to_string(kMaxDimension) +
                              " dimensions");
    }
    state_.assign(dim_, 0);
    directions_.reserve(dim_);
    for (std::size_t d = 0; d < dim_; ++d) {
        directions_.push_back(build_directions(d));
    }
}

const std::vector<std::uint32_t>& SobolSequence::next_bits() {
    if (index_ > 0) {
        // Gray-code update: flip the direction for the lowest zero bit of index-1.
        std::uint64_t prev = static_cast<std::uint64_t>(index_ - 1);
        unsigned column = static_cast<unsigned>(std::countr_one(prev));
        for (std::size_t d = 0; d < dim_; ++d) {
            state_[d] ^= directions_[d][column];
        }
    }
    ++index_;
    return state_;
}

UnitVector SobolSequence::next() {
    const auto& bits = next_bits();
    UnitVector point;
    point.coords.resize(dim_);
    for (std::size_t d = 0; d < dim_; ++d) {
        point.coords[d] = static_cast<double>(bits[d]) * kScale;
    }
    return point;
}

void SobolSequence::skip(std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        (void)next();
    }
}

namespace {

std::vector<UnitVector> sample_impl(std::size_t dimension, std::size_t count,
                                    const std::vector<std::uint32_t>& masks) {
    SobolSequence seq(dimension);
    seq.skip(1);  // drop the all-zeros index-0 point
    std::vector<UnitVector> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto& bits = seq.next_bits();
        UnitVector point;
        point.coords.resize(dimension);
        for (std::size_t d = 0; d < dimension; ++d) {
            std::uint32_t value = masks.empty() ? bits[d] : (bits[d] ^ masks[d]);
            point.coords[d] = static_cast<double>(value) * kScale;
        }
        out.push_back(std::move(point));
    }
    return out;
}

}  // namespace

std::vector<UnitVector> sobol_sample(const SearchSpace& space, std::size_t count, std::uint64_t seed) {
    if (count == 0) {
        throw ValidationError("sobol_sample: count must be >= 1");
    }
    RngStream rng(mix_seed({0x736f626f6cULL, seed}));
    std::vector<std::uint32_t> masks(space.dimension());
    for (auto& mask : masks) {
        mask = static_cast<std::uint32_t>(rng.next_u64() >> 32);
    }
    return sample_impl(space.dimension(), count, masks);
}

std::vector<UnitVector> sobol_sample_unscrambled(const SearchSpace& space, std::size_t count) {
    if (count == 0) {
        throw ValidationError("sobol_sample: count must be >= 1");
    }
    return sample_impl(space.dimension(), count, {});
}

}  // namespace hpland
