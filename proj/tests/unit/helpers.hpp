#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hpland/collect.hpp"
#include "hpland/rng.hpp"
#include "hpland/search_space.hpp"
#include "hpland/surrogate.hpp"

namespace test_support {

using namespace hpland;

inline UnitVector uv(std::vector<double> coords) {
    return UnitVector{std::move(coords)};
}

// n linear [0,1] axes named x0, x1, ...
inline SearchSpace cube_space(std::size_t n) {
    std::vector<HyperparameterDef> dims;
    for (std::size_t d = 0; d < n; ++d) {
        dims.push_back({"x" + std::to_string(d), 0.0, 1.0, Scale::Linear});
    }
    return SearchSpace(std::move(dims));
}

// A typical value-based-agent space: log learning rate, log discount,
// linear exploration floor.
inline SearchSpace agent_space() {
    return SearchSpace({{"lr", 1e-4, 0.1, Scale::Log},
                        {"gamma", 0.8, 0.9999, Scale::Log},
                        {"eps_final", 0.01, 1.0, Scale::Linear}});
}

inline std::vector<double> uniform_samples(RngStream& rng, std::size_t count, double lo,
                                           double hi) {
    std::vector<double> samples(count);
    for (double& value : samples) {
        value = rng.uniform(lo, hi);
    }
    return samples;
}

inline std::vector<double> normal_samples(RngStream& rng, std::size_t count, double mean,
                                          double stddev) {
    std::vector<double> samples(count);
    for (double& value : samples) {
        value = rng.normal(mean, stddev);
    }
    return samples;
}

// Random scattered unit-cube points with targets from the given callable.
template <typename F>
std::vector<std::pair<UnitVector, double>> scattered_points(RngStream& rng, std::size_t count,
                                                            std::size_t n, F&& target) {
    std::vector<std::pair<UnitVector, double>> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        UnitVector u;
        u.coords.resize(n);
        for (double& coord : u.coords) {
            coord = rng.uniform();
        }
        const double value = target(u);
        points.emplace_back(std::move(u), value);
    }
    return points;
}

// Small deterministic collection plan over the 2-D cube.
inline PhasePlan small_plan(int num_configs = 6, int eval_episodes = 4) {
    PhasePlan plan{cube_space(2),
                   num_configs,
                   {11, 12, 13},
                   {100, 200, 300},
                   300,
                   eval_episodes,
                   901,
                   902};
    return plan;
}

// Flat-landscape surrogate matched to small_plan: one broad bump per phase,
// noiseless unless widened by the caller.
inline SurrogateSpec small_surrogate(const PhasePlan& plan) {
    SurrogateSpec spec{plan.space, plan.phase_steps, {}, 0.0, 0.0, std::nullopt};
    const std::vector<std::vector<double>> centers = {{0.2, 0.3}, {0.5, 0.6}, {0.8, 0.4}};
    for (std::size_t i = 0; i < plan.phase_steps.size(); ++i) {
        SurrogatePhase phase;
        phase.base = 0.1;
        phase.bumps.push_back({uv(centers[i % centers.size()]), 1.0, 0.25});
        spec.phases.push_back(std::move(phase));
    }
    return spec;
}

}  // namespace test_support
