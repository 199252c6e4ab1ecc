#include <array>
#include <cstddef>
#include <vector>

#include <doctest.h>

#include "hpland/errors.hpp"
#include "hpland/search_space.hpp"
#include "hpland/sobol.hpp"

#include "helpers.hpp"

using namespace hpland;
using test_support::cube_space;

namespace {

// Reference opening of the 16-dimensional sequence (indices 1..8; index 0 is
// the skipped all-zeros point). Frozen from an independent generator built
// on the same published direction-number tables. All values are exact
// dyadic rationals, so comparisons are exact.
constexpr std::size_t kOracleDims = 16;
constexpr std::array<std::array<double, kOracleDims>, 8> kOpeningPoints = {{
    {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5},
    {0.75, 0.25, 0.25, 0.25, 0.75, 0.75, 0.25, 0.75, 0.75, 0.75, 0.75, 0.75, 0.25, 0.25, 0.75,
     0.25},
    {0.25, 0.75, 0.75, 0.75, 0.25, 0.25, 0.75, 0.25, 0.25, 0.25, 0.25, 0.25, 0.75, 0.75, 0.25,
     0.75},
    {0.375, 0.375, 0.625, 0.875, 0.375, 0.125, 0.375, 0.875, 0.875, 0.625, 0.875, 0.375, 0.375,
     0.625, 0.375, 0.875},
    {0.875, 0.875, 0.125, 0.375, 0.875, 0.625, 0.875, 0.375, 0.375, 0.125, 0.375, 0.875, 0.875,
     0.125, 0.875, 0.375},
    {0.625, 0.125, 0.875, 0.625, 0.625, 0.875, 0.125, 0.125, 0.125, 0.375, 0.125, 0.625, 0.125,
     0.875, 0.625, 0.625},
    {0.125, 0.625, 0.375, 0.125, 0.125, 0.375, 0.625, 0.625, 0.625, 0.875, 0.625, 0.125, 0.625,
     0.375, 0.125, 0.125},
    {0.1875, 0.3125, 0.9375, 0.4375, 0.5625, 0.3125, 0.4375, 0.9375, 0.9375, 0.3125, 0.6875,
     0.0625, 0.9375, 0.9375, 0.8125, 0.9375},
}};

}  // namespace

TEST_SUITE("sobol") {

TEST_CASE("one-dimensional opening values match the reference sequence") {
    const auto points = sobol_sample_unscrambled(cube_space(1), 5);
    REQUIRE(points.size() == 5);
    const double expected[] = {0.5, 0.75, 0.25, 0.375, 0.875};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(points[i].coords[0] == expected[i]);
    }
}

TEST_CASE("sixteen-dimensional opening values match the frozen reference") {
    SobolSequence sequence(kOracleDims);
    sequence.skip(1);  // the all-zeros point
    for (const auto& expected : kOpeningPoints) {
        const UnitVector point = sequence.next();
        for (std::size_t d = 0; d < kOracleDims; ++d) {
            CHECK(point.coords[d] == expected[d]);
        }
    }
}

TEST_CASE("sampling is deterministic in (dimension, count, seed)") {
    const SearchSpace space = cube_space(3);
    const auto a = sobol_sample(space, 128, 7);
    const auto b = sobol_sample(space, 128, 7);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].coords == b[i].coords);
    }
    const auto c = sobol_sample(space, 128, 8);
    bool any_difference = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        any_difference = any_difference || a[i].coords != c[i].coords;
    }
    CHECK(any_difference);
}

TEST_CASE("scrambled points stay inside the half-open cube") {
    const SearchSpace space = cube_space(5);
    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xfffffffffffffffULL}) {
        for (const UnitVector& u : sobol_sample(space, 257, seed)) {
            for (double coord : u.coords) {
                CHECK(coord >= 0.0);
                CHECK(coord < 1.0);
            }
        }
    }
}

TEST_CASE("raw sequence satisfies exact dyadic balance in up to four dimensions") {
    // For 2^k raw points, every dyadic interval [j/2^m, (j+1)/2^m) of every
    // dimension holds exactly 2^(k-m) points, for all m <= k.
    constexpr unsigned k = 7;
    constexpr std::size_t count = 1u << k;
    for (std::size_t n = 1; n <= 4; ++n) {
        SobolSequence sequence(n);
        std::vector<UnitVector> points;
        points.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            points.push_back(sequence.next());
        }
        for (std::size_t d = 0; d < n; ++d) {
            for (unsigned m = 1; m <= k; ++m) {
                const std::size_t bins = 1u << m;
                std::vector<int> counts(bins, 0);
                for (const UnitVector& u : points) {
                    ++counts[static_cast<std::size_t>(u.coords[d] * static_cast<double>(bins))];
                }
                for (int bin_count : counts) {
                    CHECK(bin_count == static_cast<int>(count / bins));
                }
            }
        }
    }
}

TEST_CASE("half-cube coverage of 128 unscrambled samples") {
    // With the index-0 skip, indices 1..128 drop one point from [0, 0.5) and
    // pick up the first point of the next block, landing on 64 per half.
    const SearchSpace space = cube_space(3);
    const auto points = sobol_sample_unscrambled(space, 128);
    for (std::size_t d = 0; d < 3; ++d) {
        int low_half = 0;
        for (const UnitVector& u : points) {
            low_half += u.coords[d] < 0.5 ? 1 : 0;
        }
        CHECK(low_half == 64);
    }
}

TEST_CASE("dimension limit is enforced") {
    CHECK_THROWS_AS(SobolSequence(0), ValidationError);
    CHECK_THROWS_AS(SobolSequence(SobolSequence::kMaxDimension + 1), ValidationError);
    CHECK_THROWS_AS(sobol_sample(cube_space(17), 8, 1), ValidationError);
    CHECK_NOTHROW(SobolSequence(SobolSequence::kMaxDimension));
}

TEST_CASE("sample count must be positive") {
    CHECK_THROWS_AS(sobol_sample(cube_space(2), 0, 1), ValidationError);
}

}  // TEST_SUITE
