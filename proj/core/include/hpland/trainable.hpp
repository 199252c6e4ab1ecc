#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hpland/search_space.hpp"

namespace hpland {

// Serialized learner state. An empty vector denotes the initial (untrained)
// state at step 0.
using OpaqueState = std::vector<std::byte>;

// Abstract iteratively trained learner: advance a state over a step window
// under one configuration and seed, or roll out evaluation episodes from a
// state. Implementations must be deterministic (identical inputs produce
// identical outputs) and safe to call concurrently, since independent
// (configuration, seed) runs execute in parallel.
class Trainable {
public:
    virtual ~Trainable() = default;

    virtual OpaqueState train(const OpaqueState& state_in, const ConfigVector& config,
                              std::uint64_t seed, long long from_step, long long to_step) = 0;

    // Returns one undiscounted evaluation return per episode; all finite.
    virtual std::vector<double> evaluate(const OpaqueState& state, std::uint64_t eval_seed,
                                         int episodes) = 0;
};

}  // namespace hpland
