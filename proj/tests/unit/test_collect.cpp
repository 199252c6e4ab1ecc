#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <vector>

#include <doctest.h>

#include "hpland/collect.hpp"
#include "hpland/errors.hpp"
#include "hpland/rng.hpp"
#include "hpland/stats.hpp"

#include "helpers.hpp"

using namespace hpland;
using test_support::small_plan;
using test_support::small_surrogate;
using test_support::uv;

namespace {

// Minimal Trainable whose evaluation is scripted from (config, seed): the
// state records just enough to reproduce them. Used to pin down selection
// and bookkeeping without the surrogate's landscape structure.
class ScriptedTrainable final : public Trainable {
public:
    using Fitness = std::function<double(const ConfigVector&, std::uint64_t seed, int episode)>;

    explicit ScriptedTrainable(Fitness fitness) : fitness_(std::move(fitness)) {}

    OpaqueState train(const OpaqueState&, const ConfigVector& config, std::uint64_t seed,
                      long long, long long) override {
        OpaqueState out(sizeof(std::uint64_t) + config.values.size() * sizeof(double));
        std::memcpy(out.data(), &seed, sizeof(seed));
        std::memcpy(out.data() + sizeof(seed), config.values.data(),
                    config.values.size() * sizeof(double));
        return out;
    }

    std::vector<double> evaluate(const OpaqueState& state, std::uint64_t, int episodes) override {
        std::uint64_t seed = 0;
        std::memcpy(&seed, state.data(), sizeof(seed));
        ConfigVector config;
        config.values.resize((state.size() - sizeof(seed)) / sizeof(double));
        std::memcpy(config.values.data(), state.data() + sizeof(seed),
                    config.values.size() * sizeof(double));
        std::vector<double> returns(static_cast<std::size_t>(episodes));
        for (int e = 0; e < episodes; ++e) {
            returns[static_cast<std::size_t>(e)] = fitness_(config, seed, e);
        }
        return returns;
    }

private:
    Fitness fitness_;
};

// Index of `config` in the plan's shared configuration sample.
int conf_index_of(const PhasePlan& plan, const ConfigVector& config) {
    const auto units = plan_configurations(plan);
    for (std::size_t i = 0; i < units.size(); ++i) {
        const ConfigVector candidate = plan.space.to_config(units[i]);
        if (candidate.values == config.values) {
            return static_cast<int>(i);
        }
    }
    throw std::logic_error("config not in plan sample");
}

}  // namespace

TEST_SUITE("collect") {

TEST_CASE("plan validation pins every protocol rule") {
    CHECK_NOTHROW(validate(small_plan()));

    PhasePlan bad = small_plan();
    bad.num_configs = 0;
    CHECK_THROWS_AS(validate(bad), ValidationError);

    bad = small_plan();
    bad.seeds.clear();
    CHECK_THROWS_AS(validate(bad), ValidationError);

    bad = small_plan();
    bad.seeds = {11, 11};
    CHECK_THROWS_AS(validate(bad), ValidationError);

    bad = small_plan();
    bad.sampler_seed = bad.seeds.front();
    CHECK_THROWS_AS(validate(bad), ValidationError);

    bad = small_plan();
    bad.eval_seed = bad.sampler_seed;
    CHECK_THROWS_AS(validate(bad), ValidationError);

    bad = small_plan();
    bad.phase_steps = {100, 100, 300};
    CHECK_THROWS_AS(validate(bad), ValidationError);

    bad = small_plan();
    bad.phase_steps.clear();
    CHECK_THROWS_AS(validate(bad), ValidationError);

    bad = small_plan();
    bad.t_final = 299;
    CHECK_THROWS_AS(validate(bad), ValidationError);

    bad = small_plan();
    bad.eval_episodes = 0;
    CHECK_THROWS_AS(validate(bad), ValidationError);

    CHECK(phase_count(small_plan()) == 3);
}

TEST_CASE("final checkpoints use exact integer arithmetic") {
    CHECK((final_checkpoints(1000) == std::array<long long, 3>{950, 975, 1000}));
    CHECK((final_checkpoints(301) == std::array<long long, 3>{285, 293, 301}));
    CHECK((final_checkpoints(20) == std::array<long long, 3>{19, 19, 20}));
    CHECK((final_checkpoints(1) == std::array<long long, 3>{0, 0, 1}));
    CHECK_THROWS_AS(final_checkpoints(0), ValidationError);
}

TEST_CASE("plan configurations are a deterministic function of the sampler seed") {
    const PhasePlan plan = small_plan();
    const auto a = plan_configurations(plan);
    const auto b = plan_configurations(plan);
    REQUIRE(a.size() == static_cast<std::size_t>(plan.num_configs));
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].coords == b[i].coords);
    }
    PhasePlan reseeded = plan;
    reseeded.sampler_seed = 903;
    const auto c = plan_configurations(reseeded);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        differs = differs || a[i].coords != c[i].coords;
    }
    CHECK(differs);
}

TEST_CASE("run_phase covers every (configuration, seed) pair once") {
    const PhasePlan plan = small_plan(3, 2);
    SurrogateSpec spec = small_surrogate(plan);
    auto trainable = surrogate_trainable(spec);

    const PhaseResult result = run_phase(plan, 1, *trainable, {});
    CHECK(result.snapshots.size() == 3 * 3);  // 3 configs x 3 seeds
    CHECK(result.landscape.rows().size() == 3 * 3 * 2);

    std::map<std::pair<int, std::uint64_t>, int> pair_rows;
    for (const auto& row : result.landscape.rows()) {
        CHECK(row.phase_index == 1);
        CHECK(row.checkpoint_step == plan.phase_steps[0]);
        CHECK(row.eval_kind == EvalKind::Landscape);
        ++pair_rows[{row.conf_index, row.seed}];
    }
    CHECK(pair_rows.size() == 9);
    for (const auto& [key, count] : pair_rows) {
        CHECK(count == 2);
    }

    // Snapshots arrive conf-major with seeds in plan order.
    for (std::size_t idx = 0; idx < result.snapshots.size(); ++idx) {
        CHECK(result.snapshots[idx].conf_index == static_cast<int>(idx / plan.seeds.size()));
        CHECK(result.snapshots[idx].seed == plan.seeds[idx % plan.seeds.size()]);
    }

    // Same plan, fresh trainable: byte-identical output.
    auto trainable2 = surrogate_trainable(spec);
    const PhaseResult rerun = run_phase(plan, 1, *trainable2, {});
    CHECK(to_csv(rerun.landscape) == to_csv(result.landscape));
    for (std::size_t idx = 0; idx < result.snapshots.size(); ++idx) {
        CHECK(rerun.snapshots[idx].state == result.snapshots[idx].state);
    }

    CHECK_THROWS_AS(run_phase(plan, 0, *trainable, {}), ValidationError);
    CHECK_THROWS_AS(run_phase(plan, 4, *trainable, {}), ValidationError);
}

TEST_CASE("evaluate_final records three checkpoints of pooled episodes") {
    const PhasePlan plan = small_plan(2, 5);
    SurrogateSpec spec = small_surrogate(plan);
    auto trainable = surrogate_trainable(spec);

    const PhaseResult phase1 = run_phase(plan, 1, *trainable, {});
    const LandscapeDataset finals = evaluate_final(plan, *trainable, phase1.snapshots);

    // 2 configs x 3 seeds x 3 checkpoints x 5 episodes.
    CHECK(finals.rows().size() == 2 * 3 * 3 * 5);
    const auto checkpoints = final_checkpoints(plan.t_final);
    std::map<std::pair<int, std::uint64_t>, std::vector<int>> episodes;
    for (const auto& row : finals.rows()) {
        CHECK(row.eval_kind == EvalKind::Final);
        CHECK(row.phase_index == 1);
        const bool known_step = row.checkpoint_step == checkpoints[0] ||
                                row.checkpoint_step == checkpoints[1] ||
                                row.checkpoint_step == checkpoints[2];
        CHECK(known_step);
        episodes[{row.conf_index, row.seed}].push_back(row.episode);
    }
    for (auto& [key, numbers] : episodes) {
        std::sort(numbers.begin(), numbers.end());
        REQUIRE(numbers.size() == 15);
        for (int e = 0; e < 15; ++e) {
            CHECK(numbers[static_cast<std::size_t>(e)] == e);  // 0..3E-1, gap-free
        }
    }

    CHECK_THROWS_AS(evaluate_final(plan, *trainable, {}), ValidationError);

    std::vector<Snapshot> mixed = phase1.snapshots;
    mixed.front().phase_index = 2;
    CHECK_THROWS_AS(evaluate_final(plan, *trainable, mixed), ValidationError);

    std::vector<Snapshot> duplicated = phase1.snapshots;
    duplicated.push_back(duplicated.front());
    CHECK_THROWS_AS(evaluate_final(plan, *trainable, duplicated), ValidationError);

    std::vector<Snapshot> foreign = phase1.snapshots;
    foreign.front().seed = 999;
    CHECK_THROWS_AS(evaluate_final(plan, *trainable, foreign), ValidationError);
}

TEST_CASE("a constant learner has fitness equal to its constant") {
    const PhasePlan plan = small_plan(2, 3);
    ScriptedTrainable constant([](const ConfigVector&, std::uint64_t, int) { return 42.5; });

    const PhaseResult phase1 = run_phase(plan, 1, constant, {});
    const LandscapeDataset finals = evaluate_final(plan, constant, phase1.snapshots);
    for (int conf = 0; conf < plan.num_configs; ++conf) {
        for (std::uint64_t seed : plan.seeds) {
            CHECK(final_fitness(finals, 1, conf, seed) == doctest::Approx(42.5).epsilon(1e-15));
        }
    }
    CHECK_THROWS_AS(final_fitness(finals, 2, 0, plan.seeds.front()), ValidationError);
}

TEST_CASE("selection takes the best configuration by pooled IQM, then the best seed") {
    PhasePlan plan = small_plan(3, 2);
    plan.seeds = {13, 11};  // plan order deliberately not sorted

    // conf 0 -> 1 everywhere; conf 1 -> 5 under seed 13, 3 under seed 11;
    // conf 2 -> 2 everywhere. Pooled IQMs: 1, 4, 2.
    ScriptedTrainable scripted([&plan](const ConfigVector& config, std::uint64_t seed, int) {
        const int conf = conf_index_of(plan, config);
        if (conf == 0) {
            return 1.0;
        }
        if (conf == 2) {
            return 2.0;
        }
        return seed == 13 ? 5.0 : 3.0;
    });

    const PhaseResult phase1 = run_phase(plan, 1, scripted, {});
    const LandscapeDataset finals = evaluate_final(plan, scripted, phase1.snapshots);
    const Selection best = select_best(plan, finals, 1);
    CHECK(best.phase_index == 1);
    CHECK(best.conf_index == 1);
    CHECK(best.seed == 13);

    // All-equal returns: ties resolve to the lowest conf_index and the
    // earliest seed in plan order.
    ScriptedTrainable flat([](const ConfigVector&, std::uint64_t, int) { return 7.0; });
    const PhaseResult flat_phase = run_phase(plan, 1, flat, {});
    const LandscapeDataset flat_finals = evaluate_final(plan, flat, flat_phase.snapshots);
    const Selection tied = select_best(plan, flat_finals, 1);
    CHECK(tied.conf_index == 0);
    CHECK(tied.seed == 13);  // first in plan order, not numerically smallest

    CHECK_THROWS_AS(select_best(plan, finals, 2), ValidationError);
}

TEST_CASE("selection requires complete final records") {
    const PhasePlan plan = small_plan(2, 2);
    SurrogateSpec spec = small_surrogate(plan);
    auto trainable = surrogate_trainable(spec);
    const PhaseResult phase1 = run_phase(plan, 1, *trainable, {});
    std::vector<Snapshot> partial(phase1.snapshots.begin(), phase1.snapshots.end() - 1);
    const LandscapeDataset finals = evaluate_final(plan, *trainable, partial);
    CHECK_THROWS_AS(select_best(plan, finals, 1), ValidationError);
}

TEST_CASE("the pipeline is greedy phase over phase and reruns identically") {
    const PhasePlan plan = small_plan(4, 3);
    SurrogateSpec spec = small_surrogate(plan);
    auto trainable = surrogate_trainable(spec);
    const RunArchive archive = run_pipeline(plan, *trainable);

    REQUIRE(archive.chosen.size() == 3);
    // 3 phases x 4 configs x 3 seeds snapshots.
    CHECK(archive.snapshots.size() == 3 * 4 * 3);
    CHECK(archive.landscape_records.rows().size() == 3 * 4 * 3 * 3);
    CHECK(archive.final_records.rows().size() == 3 * 4 * 3 * 3 * 3);

    // Each phase's recorded choice is exactly what select_best recomputes
    // from that phase's final records.
    for (int phase = 1; phase <= 3; ++phase) {
        LandscapeDataset slice(plan.space);
        for (const auto& row : archive.final_records.rows()) {
            if (row.phase_index == phase) {
                slice.add_row(row);
            }
        }
        const Selection expected = select_best(plan, slice, phase);
        CHECK(archive.chosen[static_cast<std::size_t>(phase - 1)].conf_index ==
              expected.conf_index);
        CHECK(archive.chosen[static_cast<std::size_t>(phase - 1)].seed == expected.seed);
    }

    auto trainable2 = surrogate_trainable(spec);
    const RunArchive rerun = run_pipeline(plan, *trainable2);
    CHECK(to_csv(rerun.landscape_records) == to_csv(archive.landscape_records));
    CHECK(to_csv(rerun.final_records) == to_csv(archive.final_records));
}

TEST_CASE("changing the eval seed leaves training untouched") {
    PhasePlan plan = small_plan(2, 3);
    SurrogateSpec spec = small_surrogate(plan);
    spec.noise_sigma = 0.2;  // give the eval stream something to do
    auto trainable = surrogate_trainable(spec);
    const PhaseResult base = run_phase(plan, 1, *trainable, {});

    PhasePlan reseeded = plan;
    reseeded.eval_seed = 9002;
    auto trainable2 = surrogate_trainable(spec);
    const PhaseResult moved = run_phase(reseeded, 1, *trainable2, {});

    REQUIRE(base.snapshots.size() == moved.snapshots.size());
    for (std::size_t i = 0; i < base.snapshots.size(); ++i) {
        CHECK(base.snapshots[i].state == moved.snapshots[i].state);
    }
    CHECK(to_csv(base.landscape) != to_csv(moved.landscape));
}

TEST_CASE("eval streams are distinct across contexts") {
    const std::uint64_t base = derive_eval_seed(902, 1, 0, 11, 0, EvalKind::Landscape);
    CHECK(base == derive_eval_seed(902, 1, 0, 11, 0, EvalKind::Landscape));
    CHECK(base != derive_eval_seed(902, 2, 0, 11, 0, EvalKind::Landscape));
    CHECK(base != derive_eval_seed(902, 1, 1, 11, 0, EvalKind::Landscape));
    CHECK(base != derive_eval_seed(902, 1, 0, 12, 0, EvalKind::Landscape));
    CHECK(base != derive_eval_seed(902, 1, 0, 11, 1, EvalKind::Landscape));
    CHECK(base != derive_eval_seed(902, 1, 0, 11, 0, EvalKind::Final));
    CHECK(base != derive_eval_seed(903, 1, 0, 11, 0, EvalKind::Landscape));
}

TEST_CASE("snapshot store enforces unique keys and persists to disk") {
    SnapshotStore store;
    store.put(Snapshot{1, 0, 11, OpaqueState{std::byte{1}, std::byte{2}}});
    store.put(Snapshot{1, 0, 12, OpaqueState{std::byte{3}}});
    store.put(Snapshot{2, 1, 11, OpaqueState{}});
    CHECK(store.size() == 3);
    CHECK(store.contains(1, 0, 11));
    CHECK_FALSE(store.contains(1, 1, 11));
    CHECK(store.get(1, 0, 12).state == OpaqueState{std::byte{3}});
    CHECK_THROWS_AS(store.get(9, 9, 9), ValidationError);
    CHECK_THROWS_AS(store.put(Snapshot{1, 0, 11, OpaqueState{}}), ValidationError);

    const auto dir = std::filesystem::temp_directory_path() / "hpland_snapshot_test";
    std::filesystem::remove_all(dir);
    store.write_dir(dir);
    CHECK(std::filesystem::exists(dir / "p1_c0_s11.snap"));
    CHECK(std::filesystem::exists(dir / "p1_c0_s12.snap"));
    CHECK(std::filesystem::exists(dir / "p2_c1_s11.snap"));

    const SnapshotStore loaded = SnapshotStore::read_dir(dir);
    CHECK(loaded.size() == store.size());
    for (const auto& [key, snapshot] : store.entries()) {
        const auto& other = loaded.get(snapshot.phase_index, snapshot.conf_index, snapshot.seed);
        CHECK(other.state == snapshot.state);
    }
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(SnapshotStore::read_dir(dir), ValidationError);  // gone
}

TEST_CASE("plan files parse, default, and reject unknown keys") {
    const std::string valid = R"({
        "space": {"dims": [
            {"name": "a", "low": 0.0, "high": 1.0, "scale": "linear"},
            {"name": "b", "low": 0.001, "high": 1.0, "scale": "log"}
        ]},
        "num_configs": 4,
        "seeds": [11, 12],
        "phase_steps": [100, 200],
        "eval_episodes": 3,
        "sampler_seed": 901,
        "eval_seed": 902,
        "surrogate": {
            "phases": [
                {"base": 0.1, "bumps": [{"center": [0.3, 0.4], "height": 1.0, "width": 0.2}]},
                {"base": 0.2}
            ],
            "noise_sigma": 0.05
        }
    })";
    const CollectionPlan parsed = plan_from_json_text(valid, ".");
    CHECK(parsed.plan.num_configs == 4);
    CHECK(parsed.plan.t_final == 200);  // defaults to the last phase step
    CHECK(parsed.plan.eval_episodes == 3);
    CHECK(parsed.plan.space.dimension() == 2);
    CHECK((parsed.surrogate.phase_end_steps == std::vector<long long>{100, 200}));
    CHECK(parsed.surrogate.phases.size() == 2);
    CHECK(parsed.surrogate.phases[0].bumps.size() == 1);
    CHECK(parsed.surrogate.noise_sigma == 0.05);

    CHECK_THROWS_AS(plan_from_json_text("not json", "."), ValidationError);
    CHECK_THROWS_AS(plan_from_json_text("[1,2]", "."), ValidationError);

    // Unknown keys anywhere are refused outright.
    std::string with_unknown = valid;
    with_unknown.insert(with_unknown.rfind('}'), ", \"verbose\": true");
    CHECK_THROWS_AS(plan_from_json_text(with_unknown, "."), ValidationError);

    // Space must come from exactly one source.
    std::string both_spaces = valid;
    both_spaces.insert(both_spaces.rfind('}'), ", \"space_file\": \"space.json\"");
    CHECK_THROWS_AS(plan_from_json_text(both_spaces, "."), ValidationError);

    // Missing protocol fields are named.
    const std::string no_seeds = R"({
        "space": {"dims": [{"name": "a", "low": 0.0, "high": 1.0, "scale": "linear"}]},
        "num_configs": 2,
        "phase_steps": [100],
        "sampler_seed": 901,
        "eval_seed": 902,
        "surrogate": {"phases": [{"base": 0.0}]}
    })";
    CHECK_THROWS_AS(plan_from_json_text(no_seeds, "."), ValidationError);
}

TEST_CASE("plans can reference a space file next to them") {
    const auto dir = std::filesystem::temp_directory_path() / "hpland_plan_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream space_file(dir / "space.json");
        space_file << R"({"dims": [{"name": "a", "low": 0.0, "high": 1.0, "scale": "linear"}]})";
    }
    {
        std::ofstream plan_file(dir / "plan.json");
        plan_file << R"({
            "space_file": "space.json",
            "num_configs": 2,
            "seeds": [11],
            "phase_steps": [100],
            "sampler_seed": 901,
            "eval_seed": 902,
            "surrogate": {"phases": [{"base": 0.0}]}
        })";
    }
    const CollectionPlan loaded = load_plan_file(dir / "plan.json");
    CHECK(loaded.plan.space.dimension() == 1);
    CHECK(loaded.plan.t_final == 100);
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(load_plan_file(dir / "plan.json"), ValidationError);
}

TEST_CASE("a large plan keeps its full cardinality") {
    PhasePlan plan = small_plan(128, 1);
    plan.seeds = {11, 12, 13, 14, 15};
    SurrogateSpec spec = small_surrogate(plan);
    auto trainable = surrogate_trainable(spec);
    const PhaseResult result = run_phase(plan, 2, *trainable,
                                         trainable->train({}, plan.space.to_config(uv({0.5, 0.5})),
                                                          plan.seeds.front(), 0,
                                                          plan.phase_steps[0]));
    CHECK(result.snapshots.size() == 128 * 5);
    CHECK(result.landscape.rows().size() == 128 * 5);
}

}  // TEST_SUITE
