#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <doctest.h>

#include "hpland/dataset.hpp"
#include "hpland/errors.hpp"
#include "hpland/rng.hpp"

#include "helpers.hpp"

using namespace hpland;
using test_support::agent_space;
using test_support::cube_space;
using test_support::uv;

namespace {

SampleRow make_row(const SearchSpace& space, int phase, int conf, std::uint64_t seed, int episode,
                   EvalKind kind, const UnitVector& unit, double ret) {
    SampleRow row;
    row.phase_index = phase;
    row.checkpoint_step = 100 * (phase + 1);
    row.conf_index = conf;
    row.seed = seed;
    row.episode = episode;
    row.eval_kind = kind;
    row.unit = unit;
    row.config = space.to_config(unit);
    row.ret = ret;
    return row;
}

// phase 0: confs 0 and 1, two seeds x two episodes each.
LandscapeDataset small_dataset() {
    const SearchSpace space = cube_space(2);
    LandscapeDataset ds(space);
    const UnitVector u0 = uv({0.25, 0.5});
    const UnitVector u1 = uv({0.75, 0.5});
    int episode = 0;
    for (double ret : {1.0, 2.0, 3.0, 4.0}) {
        ds.add_row(make_row(space, 0, 0, 11 + episode % 2, episode / 2, EvalKind::Landscape, u0, ret));
        ++episode;
    }
    episode = 0;
    for (double ret : {10.0, 20.0, 30.0, 40.0}) {
        ds.add_row(make_row(space, 0, 1, 11 + episode % 2, episode / 2, EvalKind::Landscape, u1, ret));
        ++episode;
    }
    return ds;
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("add_row validates dimension, range, and unit/raw consistency") {
    const SearchSpace space = agent_space();
    LandscapeDataset ds(space);

    SampleRow good = make_row(space, 0, 0, 1, 0, EvalKind::Landscape, uv({0.5, 0.5, 0.5}), 1.0);
    CHECK_NOTHROW(ds.add_row(good));

    SampleRow wrong_dim = good;
    wrong_dim.unit = uv({0.5, 0.5});
    CHECK_THROWS_AS(ds.add_row(wrong_dim), ValidationError);

    SampleRow out_of_cube = good;
    out_of_cube.unit = uv({1.5, 0.5, 0.5});
    out_of_cube.config = good.config;
    CHECK_THROWS_AS(ds.add_row(out_of_cube), ValidationError);

    SampleRow inconsistent = good;
    inconsistent.config.values[0] *= 3.0;  // no longer to_config(unit)
    CHECK_THROWS_AS(ds.add_row(inconsistent), ValidationError);

    SampleRow negative_conf = good;
    negative_conf.conf_index = -1;
    CHECK_THROWS_AS(ds.add_row(negative_conf), ValidationError);

    SampleRow non_finite = good;
    non_finite.ret = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(ds.add_row(non_finite), ValidationError);
}

TEST_CASE("aggregate pools seeds and episodes per configuration") {
    const LandscapeDataset ds = small_dataset();
    const PerConfigStats stats = aggregate(ds, EvalKind::Landscape, 0);
    CHECK(stats.phase_index == 0);
    CHECK(stats.eval_kind == EvalKind::Landscape);
    REQUIRE(stats.configs.size() == 2);

    // {1,2,3,4}: interquartile mean 2.5, quantiles interpolate across the
    // sorted sample at positions 0.025 * 3 and 0.975 * 3.
    const ConfigStats& c0 = stats.configs[0];
    CHECK(c0.conf_index == 0);
    CHECK(c0.sample_count == 4);
    CHECK(c0.iqm == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(c0.q_lower == doctest::Approx(1.075).epsilon(1e-12));
    CHECK(c0.q_upper == doctest::Approx(3.925).epsilon(1e-12));
    CHECK((c0.unit.coords == std::vector<double>{0.25, 0.5}));

    const ConfigStats& c1 = stats.configs[1];
    CHECK(c1.conf_index == 1);
    CHECK(c1.iqm == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("aggregate of a constant configuration has zero-width band") {
    const SearchSpace space = cube_space(1);
    LandscapeDataset ds(space);
    for (int e = 0; e < 5; ++e) {
        ds.add_row(make_row(space, 2, 0, 9, e, EvalKind::Final, uv({0.5}), 3.25));
    }
    const PerConfigStats stats = aggregate(ds, EvalKind::Final, 2);
    REQUIRE(stats.configs.size() == 1);
    CHECK(stats.configs[0].iqm == 3.25);
    CHECK(stats.configs[0].q_lower == 3.25);
    CHECK(stats.configs[0].q_upper == 3.25);
}

TEST_CASE("aggregate rejects empty slices and configuration gaps") {
    const LandscapeDataset ds = small_dataset();
    CHECK_THROWS_AS(aggregate(ds, EvalKind::Final, 0), ValidationError);
    CHECK_THROWS_AS(aggregate(ds, EvalKind::Landscape, 1), ValidationError);

    const SearchSpace space = cube_space(2);
    LandscapeDataset gappy(space);
    gappy.add_row(make_row(space, 0, 0, 1, 0, EvalKind::Landscape, uv({0.1, 0.1}), 1.0));
    gappy.add_row(make_row(space, 0, 2, 1, 0, EvalKind::Landscape, uv({0.9, 0.9}), 2.0));
    CHECK_THROWS_AS(aggregate(gappy, EvalKind::Landscape, 0), ValidationError);
}

TEST_CASE("pooled normalization shares one affine across phases") {
    PerConfigStats phase0;
    phase0.phase_index = 0;
    phase0.configs = {ConfigStats{0, uv({0.5}), 0.0, -100.0, 50.0, 4}};
    PerConfigStats phase1;
    phase1.phase_index = 1;
    phase1.configs = {ConfigStats{0, uv({0.5}), 60.0, 40.0, 100.0, 4}};

    const NormalizedStats pooled = normalize({phase0, phase1}, NormalizationScope::PooledAllPhases);
    REQUIRE(pooled.affines.size() == 2);
    CHECK(pooled.affines[0].offset == pooled.affines[1].offset);
    CHECK(pooled.affines[0].scale == pooled.affines[1].scale);
    // Extremes across the pool: -100 and 100.
    CHECK(pooled.phases[0].configs[0].q_lower == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pooled.phases[1].configs[0].q_upper == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pooled.phases[0].configs[0].iqm == doctest::Approx(0.5).epsilon(1e-12));

    const NormalizedStats per_phase = normalize({phase0, phase1}, NormalizationScope::PerPhase);
    // Each phase now spans [0, 1] on its own.
    CHECK(per_phase.phases[0].configs[0].q_lower == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(per_phase.phases[0].configs[0].q_upper == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(per_phase.phases[1].configs[0].q_lower == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(per_phase.phases[1].configs[0].q_upper == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalization preserves within-phase ordering") {
    RngStream rng(55);
    std::vector<PerConfigStats> phases;
    for (int p = 0; p < 3; ++p) {
        PerConfigStats stats;
        stats.phase_index = p;
        for (int c = 0; c < 6; ++c) {
            const double center = rng.uniform(-50.0, 50.0);
            const double width = rng.uniform(0.1, 5.0);
            stats.configs.push_back(ConfigStats{c, uv({0.1 * c}), center, center - width,
                                                center + width, 8});
        }
        phases.push_back(stats);
    }
    for (NormalizationScope scope : {NormalizationScope::PooledAllPhases, NormalizationScope::PerPhase}) {
        const NormalizedStats normalized = normalize(phases, scope);
        for (std::size_t p = 0; p < phases.size(); ++p) {
            for (std::size_t a = 0; a < phases[p].configs.size(); ++a) {
                for (std::size_t b = 0; b < phases[p].configs.size(); ++b) {
                    const bool raw_less = phases[p].configs[a].iqm < phases[p].configs[b].iqm;
                    const bool norm_less =
                        normalized.phases[p].configs[a].iqm < normalized.phases[p].configs[b].iqm;
                    CHECK(raw_less == norm_less);
                }
                CHECK(normalized.phases[p].configs[a].q_lower <=
                      normalized.phases[p].configs[a].iqm + 1e-12);
                CHECK(normalized.phases[p].configs[a].iqm <=
                      normalized.phases[p].configs[a].q_upper + 1e-12);
            }
        }
    }
}

TEST_CASE("dataset-level normalization rescales raw returns") {
    const LandscapeDataset ds = small_dataset();
    const NormalizedDataset normalized = normalize(ds, NormalizationScope::PooledAllPhases);
    REQUIRE(normalized.phase_order == std::vector<int>{0});
    const Normalization& affine = normalized.affines[0];
    REQUIRE(normalized.dataset.rows().size() == ds.rows().size());
    // Returns span [1, 40]; the extremes map to 0 and 1.
    double lo = 1e300;
    double hi = -1e300;
    for (const SampleRow& row : normalized.dataset.rows()) {
        lo = std::min(lo, row.ret);
        hi = std::max(hi, row.ret);
    }
    CHECK(lo == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(affine.denormalize(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(affine.denormalize(1.0) == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("csv header names every column in order") {
    const SearchSpace space = agent_space();
    LandscapeDataset ds(space);
    ds.add_row(make_row(space, 0, 0, 1, 0, EvalKind::Landscape, uv({0.5, 0.5, 0.5}), 1.0));
    const std::string text = to_csv(ds);
    const std::string header = text.substr(0, text.find('\n'));
    CHECK(header ==
          "phase_index,checkpoint_step,conf_index,seed,episode,eval_kind,"
          "unit.lr,unit.gamma,unit.eps_final,hp.lr,hp.gamma,hp.eps_final,return");
}

TEST_CASE("rows are emitted in sorted order regardless of insertion order") {
    const SearchSpace space = cube_space(1);
    LandscapeDataset shuffled(space);
    LandscapeDataset ordered(space);
    std::vector<SampleRow> rows;
    for (int conf = 2; conf >= 0; --conf) {
        for (std::uint64_t seed : {13ULL, 11ULL}) {
            for (int episode : {1, 0}) {
                rows.push_back(make_row(space, 0, conf, seed, episode, EvalKind::Landscape,
                                        uv({0.2 + 0.3 * conf}), conf * 10.0 + episode));
            }
        }
    }
    for (const SampleRow& row : rows) {
        shuffled.add_row(row);
    }
    std::sort(rows.begin(), rows.end(), [](const SampleRow& a, const SampleRow& b) {
        return std::tuple(a.conf_index, a.seed, a.episode) < std::tuple(b.conf_index, b.seed, b.episode);
    });
    for (const SampleRow& row : rows) {
        ordered.add_row(row);
    }
    CHECK(to_csv(shuffled) == to_csv(ordered));
}

TEST_CASE("csv write/read round-trip preserves every field exactly") {
    const SearchSpace space = agent_space();
    LandscapeDataset ds(space);
    RngStream rng(404);
    for (int conf = 0; conf < 4; ++conf) {
        const UnitVector u = uv({rng.uniform(), rng.uniform(), rng.uniform()});
        for (int phase : {0, 1}) {
            for (int episode = 0; episode < 3; ++episode) {
                SampleRow row = make_row(space, phase, conf, 1000 + conf, episode,
                                         phase == 1 ? EvalKind::Final : EvalKind::Landscape, u,
                                         rng.normal(0.0, 17.0));
                ds.add_row(row);
            }
        }
    }

    const auto dir = std::filesystem::temp_directory_path() / "hpland_dataset_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "roundtrip.csv";
    write_csv(ds, path);
    const LandscapeDataset loaded = read_csv(path, space);

    ds.sort_rows();
    REQUIRE(loaded.rows().size() == ds.rows().size());
    for (std::size_t i = 0; i < ds.rows().size(); ++i) {
        const SampleRow& a = ds.rows()[i];
        const SampleRow& b = loaded.rows()[i];
        CHECK(a.phase_index == b.phase_index);
        CHECK(a.checkpoint_step == b.checkpoint_step);
        CHECK(a.conf_index == b.conf_index);
        CHECK(a.seed == b.seed);
        CHECK(a.episode == b.episode);
        CHECK(a.eval_kind == b.eval_kind);
        CHECK(a.unit.coords == b.unit.coords);
        CHECK(a.config.values == b.config.values);
        CHECK(a.ret == b.ret);  // bit-exact through shortest round-trip text
    }
    CHECK(to_csv(loaded) == to_csv(ds));
    std::filesystem::remove_all(dir);
}

TEST_CASE("csv schema violations are rejected") {
    const SearchSpace space = cube_space(1);
    CHECK_THROWS_AS(dataset_from_csv_text("", space), ValidationError);
    CHECK_THROWS_AS(dataset_from_csv_text("bogus,header\n", space), ValidationError);
    const std::string header =
        "phase_index,checkpoint_step,conf_index,seed,episode,eval_kind,unit.x0,hp.x0,return\n";
    CHECK_THROWS_AS(dataset_from_csv_text(header + "0,100,0,1,0,landscape,0.5\n", space),
                    ValidationError);  // short row
    CHECK_THROWS_AS(dataset_from_csv_text(header + "0,100,0,1,0,landscape,0.5,0.5,abc\n", space),
                    ValidationError);  // unparsable number
    CHECK_THROWS_AS(dataset_from_csv_text(header + "0,100,0,1,0,mystery,0.5,0.5,1.0\n", space),
                    ValidationError);  // unknown eval kind
    CHECK_NOTHROW(dataset_from_csv_text(header + "0,100,0,1,0,landscape,0.5,0.5,1.0\n", space));
}

TEST_CASE("eval kind names round-trip") {
    CHECK(eval_kind_name(EvalKind::Landscape) == "landscape");
    CHECK(eval_kind_name(EvalKind::Final) == "final");
    CHECK(eval_kind_from_name("landscape") == EvalKind::Landscape);
    CHECK(eval_kind_from_name("final") == EvalKind::Final);
    CHECK_THROWS_AS(eval_kind_from_name("midway"), ValidationError);
}

}  // TEST_SUITE
