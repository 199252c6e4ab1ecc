#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "hpland/search_space.hpp"
#include "hpland/trainable.hpp"

namespace hpland {

// One Gaussian bump of the ground-truth mean landscape, in unit coordinates.
struct GaussianBump {
    UnitVector center;
    double height = 0.0;
    double width = 0.1;  // isotropic standard deviation
};

// Ground-truth mean function for one training phase: base + sum of bumps.
struct SurrogatePhase {
    double base = 0.0;
    std::vector<GaussianBump> bumps;
};

// Axis-aligned box in the unit cube. Configurations inside it get a
// two-cluster seed offset (sign from seed parity), manufacturing bimodal
// per-configuration return distributions.
struct BimodalRegion {
    UnitVector low;
    UnitVector high;
};

// Closed-form stand-in for an iteratively trained learner. Training carries
// a scalar skill that accumulates the phase mean functions; evaluation
// returns skill + phase mean + per-seed offset + Gaussian noise. Everything
// is deterministic given the seeds.
struct SurrogateSpec {
    SearchSpace space;
    std::vector<long long> phase_end_steps;  // strictly increasing; windows W_j
    std::vector<SurrogatePhase> phases;      // parallel to phase_end_steps
    double noise_sigma = 0.0;
    double seed_offset_scale = 0.0;
    std::optional<BimodalRegion> bimodal_region;
};

// Throws ValidationError on dimension mismatches, non-increasing windows,
// non-positive bump widths, or negative noise/offset magnitudes.
void validate(const SurrogateSpec& spec);

// Ground-truth mean of phase `phase_ordinal` (0-based) at a unit point.
double surrogate_mean(const SurrogateSpec& spec, std::size_t phase_ordinal, const UnitVector& u);

// Deterministic per-seed return offset: inside the bimodal region the offset
// is +-seed_offset_scale with sign from seed parity (even seeds up); outside
// it is seed_offset_scale times a fixed hash of the seed in [-1, 1].
double surrogate_seed_offset(const SurrogateSpec& spec, const UnitVector& u, std::uint64_t seed);

std::unique_ptr<Trainable> surrogate_trainable(SurrogateSpec spec);

}  // namespace hpland
