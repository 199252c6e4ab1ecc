#include "hpland/collect.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "hpland/errors.hpp"
#include "hpland/parallel.hpp"
#include "hpland/rng.hpp"
#include "hpland/sobol.hpp"
#include "hpland/stats.hpp"

namespace hpland {

namespace {

constexpr std::uint64_t kEvalSeedTag = 0x6576616c5f6b6579ULL;

std::string pair_label(int phase_index, int conf_index, std::uint64_t seed) {
    return "phase " + std::to_string(phase_index) + ", configuration " +
           std::to_string(conf_index) + ", seed " + std::to_string(seed);
}

}  // namespace

void validate(const PhasePlan& plan) {
    if (plan.num_configs < 1) {
        throw ValidationError("plan: num_configs must be positive");
    }
    if (plan.eval_episodes < 1) {
        throw ValidationError("plan: eval_episodes must be positive");
    }
    if (plan.seeds.empty()) {
        throw ValidationError("plan: at least one training seed is required");
    }
    std::set<std::uint64_t> seen(plan.seeds.begin(), plan.seeds.end());
    if (seen.size() != plan.seeds.size()) {
        throw ValidationError("plan: training seeds must be pairwise distinct");
    }
    if (seen.count(plan.sampler_seed) || seen.count(plan.eval_seed)) {
        throw ValidationError("plan: sampler_seed and eval_seed must differ from the training seeds");
    }
    if (plan.sampler_seed == plan.eval_seed) {
        throw ValidationError("plan: sampler_seed and eval_seed must differ");
    }
    if (plan.phase_steps.empty()) {
        throw ValidationError("plan: at least one phase step is required");
    }
    long long previous = 0;
    for (long long step : plan.phase_steps) {
        if (step <= previous) {
            throw ValidationError("plan: phase_steps must be strictly increasing and positive");
        }
        previous = step;
    }
    if (plan.t_final != plan.phase_steps.back()) {
        throw ValidationError("plan: t_final must equal the last phase step");
    }
}

int phase_count(const PhasePlan& plan) { return static_cast<int>(plan.phase_steps.size()); }

std::vector<UnitVector> plan_configurations(const PhasePlan& plan) {
    return sobol_sample(plan.space, static_cast<std::size_t>(plan.num_configs), plan.sampler_seed);
}

std::array<long long, 3> final_checkpoints(long long t_final) {
    if (t_final < 1) {
        throw ValidationError("final_checkpoints: t_final must be positive");
    }
    // floor(0.95 t) and floor(0.975 t) via integer division; no floating
    // point so checkpoint steps never drift by one.
    return {t_final * 19 / 20, t_final * 39 / 40, t_final};
}

std::uint64_t derive_eval_seed(std::uint64_t eval_seed, int phase_index, int conf_index,
                               std::uint64_t seed, int checkpoint_ordinal, EvalKind kind) {
    return mix_seed({kEvalSeedTag, eval_seed, static_cast<std::uint64_t>(phase_index),
                     static_cast<std::uint64_t>(conf_index), seed,
                     static_cast<std::uint64_t>(checkpoint_ordinal),
                     kind == EvalKind::Final ? 1ULL : 0ULL});
}

void SnapshotStore::put(Snapshot snapshot) {
    const Key key{snapshot.phase_index, snapshot.conf_index, snapshot.seed};
    if (entries_.count(key)) {
        throw ValidationError("snapshot store: duplicate snapshot for " +
                              pair_label(snapshot.phase_index, snapshot.conf_index, snapshot.seed));
    }
    entries_.emplace(key, std::move(snapshot));
}

bool SnapshotStore::contains(int phase_index, int conf_index, std::uint64_t seed) const {
    return entries_.count(Key{phase_index, conf_index, seed}) != 0;
}

const Snapshot& SnapshotStore::get(int phase_index, int conf_index, std::uint64_t seed) const {
    auto it = entries_.find(Key{phase_index, conf_index, seed});
    if (it == entries_.end()) {
        throw ValidationError("snapshot store: no snapshot for " +
                              pair_label(phase_index, conf_index, seed));
    }
    return it->second;
}

void SnapshotStore::write_dir(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    for (const auto& [key, snapshot] : entries_) {
        const std::string name = "p" + std::to_string(snapshot.phase_index) + "_c" +
                                 std::to_string(snapshot.conf_index) + "_s" +
                                 std::to_string(snapshot.seed) + ".snap";
        std::ofstream file(dir / name, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw PipelineError("snapshot store: cannot write '" + (dir / name).string() + "'");
        }
        file.write(reinterpret_cast<const char*>(snapshot.state.data()),
                   static_cast<std::streamsize>(snapshot.state.size()));
        if (!file) {
            throw PipelineError("snapshot store: failed writing '" + (dir / name).string() + "'");
        }
    }
}

namespace {

// Parses "p<phase>_c<conf>_s<seed>" (extension already stripped).
SnapshotStore::Key parse_snapshot_name(const std::string& stem) {
    const auto fail = [&]() -> SnapshotStore::Key {
        throw ValidationError("snapshot store: unrecognized file name '" + stem + ".snap'");
    };
    if (stem.empty() || stem[0] != 'p') {
        return fail();
    }
    const std::size_t c_pos = stem.find("_c");
    const std::size_t s_pos = stem.find("_s", c_pos == std::string::npos ? 0 : c_pos + 2);
    if (c_pos == std::string::npos || s_pos == std::string::npos) {
        return fail();
    }
    auto parse_part = [&](std::size_t begin, std::size_t end, auto& out) {
        auto [ptr, ec] = std::from_chars(stem.data() + begin, stem.data() + end, out);
        if (ec != std::errc() || ptr != stem.data() + end) {
            fail();
        }
    };
    int phase = 0;
    int conf = 0;
    std::uint64_t seed = 0;
    parse_part(1, c_pos, phase);
    parse_part(c_pos + 2, s_pos, conf);
    parse_part(s_pos + 2, stem.size(), seed);
    return {phase, conf, seed};
}

}  // namespace

SnapshotStore SnapshotStore::read_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw ValidationError("snapshot store: '" + dir.string() + "' is not a directory");
    }
    SnapshotStore store;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".snap") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        const auto [phase, conf, seed] = parse_snapshot_name(path.stem().string());
        std::ifstream file(path, std::ios::binary);
        if (!file) {
            throw PipelineError("snapshot store: cannot read '" + path.string() + "'");
        }
        std::vector<char> bytes((std::istreambuf_iterator<char>(file)),
                                std::istreambuf_iterator<char>());
        OpaqueState state(bytes.size());
        std::transform(bytes.begin(), bytes.end(), state.begin(),
                       [](char c) { return static_cast<std::byte>(c); });
        store.put(Snapshot{phase, conf, seed, std::move(state)});
    }
    return store;
}

PhaseResult run_phase(const PhasePlan& plan, int phase_index, Trainable& trainable,
                      const OpaqueState& incoming) {
    validate(plan);
    if (phase_index < 1 || phase_index > phase_count(plan)) {
        throw ValidationError("run_phase: phase index " + std::to_string(phase_index) +
                              " outside [1, " + std::to_string(phase_count(plan)) + "]");
    }
    const std::vector<UnitVector> configs = plan_configurations(plan);
    const long long from_step = phase_index == 1 ? 0 : plan.phase_steps[phase_index - 2];
    const long long to_step = plan.phase_steps[phase_index - 1];
    const std::size_t seed_count = plan.seeds.size();
    const std::size_t pair_count = configs.size() * seed_count;

    std::vector<Snapshot> snapshots(pair_count);
    std::vector<std::vector<double>> returns(pair_count);
    parallel_for(pair_count, [&](std::size_t idx) {
        const int conf = static_cast<int>(idx / seed_count);
        const std::uint64_t seed = plan.seeds[idx % seed_count];
        try {
            const ConfigVector raw = plan.space.to_config(configs[static_cast<std::size_t>(conf)]);
            OpaqueState state = trainable.train(incoming, raw, seed, from_step, to_step);
            const std::uint64_t stream =
                derive_eval_seed(plan.eval_seed, phase_index, conf, seed, 0, EvalKind::Landscape);
            returns[idx] = trainable.evaluate(state, stream, plan.eval_episodes);
            if (returns[idx].size() != static_cast<std::size_t>(plan.eval_episodes)) {
                throw PipelineError("trainable returned " + std::to_string(returns[idx].size()) +
                                    " episodes, expected " + std::to_string(plan.eval_episodes));
            }
            snapshots[idx] = Snapshot{phase_index, conf, seed, std::move(state)};
        } catch (const std::exception& e) {
            throw PipelineError(pair_label(phase_index, conf, seed) + ": " + e.what());
        }
    });

    PhaseResult result{LandscapeDataset(plan.space), std::move(snapshots)};
    for (std::size_t idx = 0; idx < pair_count; ++idx) {
        const int conf = static_cast<int>(idx / seed_count);
        const UnitVector& unit = configs[static_cast<std::size_t>(conf)];
        const ConfigVector raw = plan.space.to_config(unit);
        for (int episode = 0; episode < plan.eval_episodes; ++episode) {
            SampleRow row;
            row.phase_index = phase_index;
            row.checkpoint_step = to_step;
            row.conf_index = conf;
            row.seed = plan.seeds[idx % seed_count];
            row.episode = episode;
            row.eval_kind = EvalKind::Landscape;
            row.unit = unit;
            row.config = raw;
            row.ret = returns[idx][static_cast<std::size_t>(episode)];
            result.landscape.add_row(std::move(row));
        }
    }
    return result;
}

LandscapeDataset evaluate_final(const PhasePlan& plan, Trainable& trainable,
                                const std::vector<Snapshot>& phase_snapshots) {
    validate(plan);
    if (phase_snapshots.empty()) {
        throw ValidationError("evaluate_final: no snapshots given");
    }
    const int phase_index = phase_snapshots.front().phase_index;
    if (phase_index < 1 || phase_index > phase_count(plan)) {
        throw ValidationError("evaluate_final: snapshot phase index out of range");
    }
    const std::set<std::uint64_t> plan_seeds(plan.seeds.begin(), plan.seeds.end());
    std::set<std::pair<int, std::uint64_t>> seen;
    for (const auto& snapshot : phase_snapshots) {
        if (snapshot.phase_index != phase_index) {
            throw ValidationError("evaluate_final: snapshots span multiple phases");
        }
        if (snapshot.conf_index < 0 || snapshot.conf_index >= plan.num_configs) {
            throw ValidationError("evaluate_final: configuration index " +
                                  std::to_string(snapshot.conf_index) + " outside the plan");
        }
        if (!plan_seeds.count(snapshot.seed)) {
            throw ValidationError("evaluate_final: seed " + std::to_string(snapshot.seed) +
                                  " is not a plan training seed");
        }
        if (!seen.insert({snapshot.conf_index, snapshot.seed}).second) {
            throw ValidationError("evaluate_final: duplicate snapshot for " +
                                  pair_label(phase_index, snapshot.conf_index, snapshot.seed));
        }
    }

    const std::vector<UnitVector> configs = plan_configurations(plan);
    const std::array<long long, 3> checkpoints = final_checkpoints(plan.t_final);
    const long long snapshot_step = plan.phase_steps[phase_index - 1];
    const int episodes = plan.eval_episodes;

    std::vector<std::vector<SampleRow>> rows(phase_snapshots.size());
    parallel_for(phase_snapshots.size(), [&](std::size_t idx) {
        const Snapshot& snapshot = phase_snapshots[idx];
        const int conf = snapshot.conf_index;
        const std::uint64_t seed = snapshot.seed;
        try {
            const UnitVector& unit = configs[static_cast<std::size_t>(conf)];
            const ConfigVector raw = plan.space.to_config(unit);
            OpaqueState state = snapshot.state;
            long long current_step = snapshot_step;
            for (int k = 0; k < 3; ++k) {
                // A checkpoint at or below the trained step evaluates as-is;
                // in the last phase t_ls(P) = t_final, so no further
                // training happens at all.
                if (checkpoints[static_cast<std::size_t>(k)] > current_step) {
                    state = trainable.train(state, raw, seed, current_step,
                                            checkpoints[static_cast<std::size_t>(k)]);
                    current_step = checkpoints[static_cast<std::size_t>(k)];
                }
                const std::uint64_t stream =
                    derive_eval_seed(plan.eval_seed, phase_index, conf, seed, k, EvalKind::Final);
                const std::vector<double> returns = trainable.evaluate(state, stream, episodes);
                if (returns.size() != static_cast<std::size_t>(episodes)) {
                    throw PipelineError("trainable returned " + std::to_string(returns.size()) +
                                        " episodes, expected " + std::to_string(episodes));
                }
                for (int e = 0; e < episodes; ++e) {
                    SampleRow row;
                    row.phase_index = phase_index;
                    row.checkpoint_step = checkpoints[static_cast<std::size_t>(k)];
                    row.conf_index = conf;
                    row.seed = seed;
                    // Episodes number 0..3E-1 across the three checkpoints.
                    row.episode = k * episodes + e;
                    row.eval_kind = EvalKind::Final;
                    row.unit = unit;
                    row.config = raw;
                    row.ret = returns[static_cast<std::size_t>(e)];
                    rows[idx].push_back(std::move(row));
                }
            }
        } catch (const std::exception& e) {
            throw PipelineError(pair_label(phase_index, conf, seed) + ": " + e.what());
        }
    });

    LandscapeDataset records(plan.space);
    for (auto& group : rows) {
        for (auto& row : group) {
            records.add_row(std::move(row));
        }
    }
    return records;
}

double final_fitness(const LandscapeDataset& final_records, int phase_index, int conf_index,
                     std::uint64_t seed) {
    std::vector<double> pooled;
    for (const auto& row : final_records.rows()) {
        if (row.phase_index == phase_index && row.eval_kind == EvalKind::Final &&
            row.conf_index == conf_index && row.seed == seed) {
            pooled.push_back(row.ret);
        }
    }
    if (pooled.empty()) {
        throw ValidationError("final_fitness: no final records for " +
                              pair_label(phase_index, conf_index, seed));
    }
    return mean(pooled);
}

Selection select_best(const PhasePlan& plan, const LandscapeDataset& final_records,
                      int phase_index) {
    validate(plan);
    const std::set<std::uint64_t> plan_seeds(plan.seeds.begin(), plan.seeds.end());
    std::map<std::pair<int, std::uint64_t>, std::vector<double>> by_pair;
    for (const auto& row : final_records.rows()) {
        if (row.phase_index != phase_index || row.eval_kind != EvalKind::Final) {
            continue;
        }
        if (row.conf_index < 0 || row.conf_index >= plan.num_configs ||
            !plan_seeds.count(row.seed)) {
            throw ValidationError("select_best: record for unknown " +
                                  pair_label(phase_index, row.conf_index, row.seed));
        }
        by_pair[{row.conf_index, row.seed}].push_back(row.ret);
    }
    if (by_pair.empty()) {
        throw ValidationError("select_best: no final records for phase " +
                              std::to_string(phase_index));
    }
    for (int conf = 0; conf < plan.num_configs; ++conf) {
        for (std::uint64_t seed : plan.seeds) {
            if (!by_pair.count({conf, seed})) {
                throw ValidationError("select_best: missing final records for " +
                                      pair_label(phase_index, conf, seed));
            }
        }
    }

    // Configuration set first: highest IQM of the returns pooled across all
    // seeds and episodes. Strict comparison keeps the lowest conf_index on
    // ties.
    int best_conf = 0;
    double best_conf_iqm = -std::numeric_limits<double>::infinity();
    for (int conf = 0; conf < plan.num_configs; ++conf) {
        std::vector<double> pooled;
        for (std::uint64_t seed : plan.seeds) {
            const auto& returns = by_pair.at({conf, seed});
            pooled.insert(pooled.end(), returns.begin(), returns.end());
        }
        const double value = iqm(pooled);
        if (value > best_conf_iqm) {
            best_conf_iqm = value;
            best_conf = conf;
        }
    }

    // Then the seed with the highest IQM inside the chosen configuration;
    // plan order keeps the earliest seed on ties.
    std::uint64_t best_seed = plan.seeds.front();
    double best_seed_iqm = -std::numeric_limits<double>::infinity();
    for (std::uint64_t seed : plan.seeds) {
        const double value = iqm(by_pair.at({best_conf, seed}));
        if (value > best_seed_iqm) {
            best_seed_iqm = value;
            best_seed = seed;
        }
    }
    return Selection{phase_index, best_conf, best_seed};
}

RunArchive run_pipeline(const PhasePlan& plan, Trainable& trainable) {
    validate(plan);
    RunArchive archive{LandscapeDataset(plan.space), LandscapeDataset(plan.space), {}, {}};
    OpaqueState incoming;  // empty = initial state
    for (int phase_index = 1; phase_index <= phase_count(plan); ++phase_index) {
        PhaseResult phase = run_phase(plan, phase_index, trainable, incoming);
        const LandscapeDataset finals = evaluate_final(plan, trainable, phase.snapshots);
        for (const auto& row : phase.landscape.rows()) {
            archive.landscape_records.add_row(row);
        }
        for (const auto& row : finals.rows()) {
            archive.final_records.add_row(row);
        }
        const Selection chosen = select_best(plan, finals, phase_index);
        archive.chosen.push_back(chosen);
        for (auto& snapshot : phase.snapshots) {
            archive.snapshots.put(std::move(snapshot));
        }
        incoming = archive.snapshots.get(phase_index, chosen.conf_index, chosen.seed).state;
    }
    return archive;
}

namespace {

using nlohmann::json;

[[noreturn]] void plan_error(const std::string& message) {
    throw ValidationError("plan: " + message);
}

const json& require_field(const json& object, const char* key, const char* context) {
    auto it = object.find(key);
    if (it == object.end()) {
        plan_error(std::string(context) + " is missing required key '" + key + "'");
    }
    return *it;
}

void check_known_keys(const json& object, std::initializer_list<const char*> keys,
                      const char* context) {
    for (const auto& [key, value] : object.items()) {
        if (std::find_if(keys.begin(), keys.end(),
                         [&](const char* k) { return key == k; }) == keys.end()) {
            plan_error(std::string("unknown key '") + key + "' in " + context);
        }
    }
}

UnitVector unit_from_json(const json& array, const char* context) {
    if (!array.is_array()) {
        plan_error(std::string(context) + " must be an array of numbers");
    }
    UnitVector u;
    for (const auto& value : array) {
        u.coords.push_back(value.get<double>());
    }
    return u;
}

SurrogateSpec surrogate_from_json(const json& object, const SearchSpace& space,
                                  const std::vector<long long>& phase_steps) {
    check_known_keys(object, {"phases", "noise_sigma", "seed_offset_scale", "bimodal_region"},
                     "surrogate");
    SurrogateSpec spec{space, phase_steps, {}, 0.0, 0.0, std::nullopt};
    const json& phases = require_field(object, "phases", "surrogate");
    if (!phases.is_array()) {
        plan_error("surrogate 'phases' must be an array");
    }
    for (const auto& phase_json : phases) {
        check_known_keys(phase_json, {"base", "bumps"}, "surrogate phase");
        SurrogatePhase phase;
        phase.base = phase_json.value("base", 0.0);
        for (const auto& bump_json : phase_json.value("bumps", json::array())) {
            check_known_keys(bump_json, {"center", "height", "width"}, "surrogate bump");
            GaussianBump bump;
            bump.center = unit_from_json(require_field(bump_json, "center", "surrogate bump"),
                                         "surrogate bump center");
            bump.height = require_field(bump_json, "height", "surrogate bump").get<double>();
            bump.width = require_field(bump_json, "width", "surrogate bump").get<double>();
            phase.bumps.push_back(std::move(bump));
        }
        spec.phases.push_back(std::move(phase));
    }
    spec.noise_sigma = object.value("noise_sigma", 0.0);
    spec.seed_offset_scale = object.value("seed_offset_scale", 0.0);
    if (object.contains("bimodal_region")) {
        const json& region = object.at("bimodal_region");
        check_known_keys(region, {"low", "high"}, "bimodal_region");
        spec.bimodal_region = BimodalRegion{
            unit_from_json(require_field(region, "low", "bimodal_region"), "bimodal_region low"),
            unit_from_json(require_field(region, "high", "bimodal_region"), "bimodal_region high")};
    }
    return spec;
}

}  // namespace

CollectionPlan plan_from_json_text(const std::string& text,
                                   const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        plan_error(std::string("invalid JSON: ") + e.what());
    }
    try {
        if (!j.is_object()) {
            plan_error("top level must be a JSON object");
        }
        check_known_keys(j,
                         {"space", "space_file", "num_configs", "seeds", "phase_steps", "t_final",
                          "eval_episodes", "sampler_seed", "eval_seed", "surrogate"},
                         "plan");
        if (j.contains("space") == j.contains("space_file")) {
            plan_error("exactly one of 'space' and 'space_file' is required");
        }
        SearchSpace space = j.contains("space")
                                ? space_from_json_text(j.at("space").dump())
                                : load_space_file(base_dir / j.at("space_file").get<std::string>());

        PhasePlan plan{std::move(space), 0, {}, {}, 0, 10, 0, 0};
        plan.num_configs = require_field(j, "num_configs", "plan").get<int>();
        for (const auto& seed : require_field(j, "seeds", "plan")) {
            plan.seeds.push_back(seed.get<std::uint64_t>());
        }
        for (const auto& step : require_field(j, "phase_steps", "plan")) {
            plan.phase_steps.push_back(step.get<long long>());
        }
        plan.t_final = j.contains("t_final") ? j.at("t_final").get<long long>()
                       : plan.phase_steps.empty() ? 0
                                                  : plan.phase_steps.back();
        plan.eval_episodes = j.value("eval_episodes", 10);
        plan.sampler_seed = require_field(j, "sampler_seed", "plan").get<std::uint64_t>();
        plan.eval_seed = require_field(j, "eval_seed", "plan").get<std::uint64_t>();
        validate(plan);

        SurrogateSpec surrogate =
            surrogate_from_json(require_field(j, "surrogate", "plan"), plan.space, plan.phase_steps);
        validate(surrogate);
        return CollectionPlan{std::move(plan), std::move(surrogate)};
    } catch (const json::exception& e) {
        plan_error(std::string("malformed value: ") + e.what());
    }
}

CollectionPlan load_plan_file(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw ValidationError("plan: cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return plan_from_json_text(buffer.str(), path.parent_path());
}

}  // namespace hpland
