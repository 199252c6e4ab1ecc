// Microbenchmarks for the hot paths: quasi-random sampling, the folding
// statistic, model fitting and prediction, and the core aggregation
// statistic. Run the binary directly; these are not part of the test suite.

#include <benchmark/benchmark.h>

#include <cmath>
#include <utility>
#include <vector>

#include "hpland/folding.hpp"
#include "hpland/igpr.hpp"
#include "hpland/ilm.hpp"
#include "hpland/rng.hpp"
#include "hpland/search_space.hpp"
#include "hpland/sobol.hpp"
#include "hpland/stats.hpp"

namespace {

hpland::SearchSpace cube(std::size_t n) {
    std::vector<hpland::HyperparameterDef> dims;
    for (std::size_t d = 0; d < n; ++d) {
        dims.push_back({"x" + std::to_string(d), 0.0, 1.0, hpland::Scale::Linear});
    }
    return hpland::SearchSpace(std::move(dims));
}

std::vector<std::pair<hpland::UnitVector, double>> bumpy_points(std::size_t count,
                                                                std::size_t n) {
    hpland::RngStream rng(1234);
    std::vector<std::pair<hpland::UnitVector, double>> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        hpland::UnitVector u;
        u.coords.resize(n);
        for (double& coord : u.coords) {
            coord = rng.uniform();
        }
        double target = 0.0;
        for (double coord : u.coords) {
            target += std::sin(3.0 * coord);
        }
        points.emplace_back(std::move(u), target);
    }
    return points;
}

void BM_SobolSample(benchmark::State& state) {
    const hpland::SearchSpace space = cube(4);
    const auto count = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(hpland::sobol_sample(space, count, 42));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count));
}
BENCHMARK(BM_SobolSample)->Arg(64)->Arg(1024);

void BM_FoldingStatistic(benchmark::State& state) {
    hpland::RngStream rng(99);
    std::vector<double> samples(static_cast<std::size_t>(state.range(0)));
    for (double& value : samples) {
        value = rng.normal();
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(hpland::folding_statistic(samples));
    }
}
BENCHMARK(BM_FoldingStatistic)->Arg(100)->Arg(1000);

void BM_IlmFit(benchmark::State& state) {
    const auto points = bumpy_points(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hpland::fit_ilm(points));
    }
}
BENCHMARK(BM_IlmFit)->Arg(32)->Arg(128);

void BM_IgprPredict(benchmark::State& state) {
    const auto points = bumpy_points(64, 2);
    hpland::IgprOptions options;
    options.restarts = 2;
    const hpland::IgprSurface surface = hpland::fit_igpr(points, options);
    hpland::RngStream rng(7);
    hpland::UnitVector probe;
    probe.coords = {rng.uniform(), rng.uniform()};
    for (auto _ : state) {
        benchmark::DoNotOptimize(surface.predict(probe));
    }
}
BENCHMARK(BM_IgprPredict);

void BM_Iqm(benchmark::State& state) {
    hpland::RngStream rng(5);
    std::vector<double> samples(static_cast<std::size_t>(state.range(0)));
    for (double& value : samples) {
        value = rng.normal();
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(hpland::iqm(samples));
    }
}
BENCHMARK(BM_Iqm)->Arg(30)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
