#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "hpland/dataset.hpp"
#include "hpland/search_space.hpp"
#include "hpland/surrogate.hpp"
#include "hpland/trainable.hpp"

namespace hpland {

// Multi-phase greedy data-collection plan. Phases are numbered 1..P; phase i
// covers the training window [t_ls(i-1), t_ls(i)] with t_ls(0) = 0 and
// t_ls(P) = t_final.
struct PhasePlan {
    SearchSpace space;
    int num_configs = 0;
    std::vector<std::uint64_t> seeds;    // training seeds, order defines tie-breaks
    std::vector<long long> phase_steps;  // t_ls(1..P), strictly increasing
    long long t_final = 0;               // == phase_steps.back()
    int eval_episodes = 10;
    std::uint64_t sampler_seed = 0;
    std::uint64_t eval_seed = 0;
};

// Throws ValidationError when counts are non-positive, steps are not
// strictly increasing up to t_final, or seeds collide (training seeds must
// be pairwise distinct and disjoint from sampler/eval seeds).
void validate(const PhasePlan& plan);

int phase_count(const PhasePlan& plan);

// The scrambled low-discrepancy configuration sample shared by every phase.
std::vector<UnitVector> plan_configurations(const PhasePlan& plan);

// Final-evaluation checkpoints: floor(0.95 t), floor(0.975 t), t (exact
// integer arithmetic, no floating-point rounding).
std::array<long long, 3> final_checkpoints(long long t_final);

// Every evaluation context owns its RNG stream: the stream seed mixes the
// plan eval seed with (phase, configuration, training seed, checkpoint
// ordinal, record kind).
std::uint64_t derive_eval_seed(std::uint64_t eval_seed, int phase_index, int conf_index,
                               std::uint64_t seed, int checkpoint_ordinal, EvalKind kind);

// Learner state saved at a phase boundary, keyed by (phase, conf, seed).
struct Snapshot {
    int phase_index = 0;
    int conf_index = 0;
    std::uint64_t seed = 0;
    OpaqueState state;
};

// In-memory snapshot collection with directory persistence. Files are named
// p<phase>_c<conf>_s<seed>.snap and contain the raw state bytes.
class SnapshotStore {
public:
    using Key = std::tuple<int, int, std::uint64_t>;

    void put(Snapshot snapshot);  // throws on duplicate key
    bool contains(int phase_index, int conf_index, std::uint64_t seed) const;
    const Snapshot& get(int phase_index, int conf_index, std::uint64_t seed) const;
    std::size_t size() const { return entries_.size(); }
    const std::map<Key, Snapshot>& entries() const { return entries_; }

    void write_dir(const std::filesystem::path& dir) const;
    static SnapshotStore read_dir(const std::filesystem::path& dir);

private:
    std::map<Key, Snapshot> entries_;
};

struct Selection {
    int phase_index = 0;
    int conf_index = 0;
    std::uint64_t seed = 0;
};

struct PhaseResult {
    LandscapeDataset landscape;       // eval_kind = landscape, this phase only
    std::vector<Snapshot> snapshots;  // conf-major, seeds in plan order
};

// Trains every (configuration, seed) pair of phase `phase_index` from the
// shared incoming state (empty = initial state, phase 1 only), snapshots the
// results, and evaluates eval_episodes returns at the phase checkpoint.
// (conf, seed) runs execute in parallel; output is identical to sequential.
PhaseResult run_phase(const PhasePlan& plan, int phase_index, Trainable& trainable,
                      const OpaqueState& incoming);

// Trains each phase snapshot onward through the final checkpoints and
// records eval_episodes returns per checkpoint (episodes numbered 0..3E-1
// across the three checkpoints). Checkpoints at or below the snapshot's
// current step evaluate the state as-is.
LandscapeDataset evaluate_final(const PhasePlan& plan, Trainable& trainable,
                                const std::vector<Snapshot>& phase_snapshots);

// Mean of the pooled final returns of one (configuration, seed) pair — the
// scalar fitness the final evaluation aggregates to.
double final_fitness(const LandscapeDataset& final_records, int phase_index, int conf_index,
                     std::uint64_t seed);

// Greedy choice: the configuration with the highest pooled-return IQM, then
// within it the seed with the highest per-seed IQM. Ties go to the lowest
// conf_index, then the earliest seed in plan order.
Selection select_best(const PhasePlan& plan, const LandscapeDataset& final_records,
                      int phase_index);

struct RunArchive {
    LandscapeDataset landscape_records;
    LandscapeDataset final_records;
    std::vector<Selection> chosen;  // one per phase, in phase order
    SnapshotStore snapshots;
};

// Runs all phases in order; phase i+1 starts from the snapshot selected from
// phase i's final records.
RunArchive run_pipeline(const PhasePlan& plan, Trainable& trainable);

// Plan file (JSON): the protocol fields plus the surrogate definition and
// either an inline "space" object or a "space_file" path (resolved against
// the plan file's directory).
struct CollectionPlan {
    PhasePlan plan;
    SurrogateSpec surrogate;
};

CollectionPlan plan_from_json_text(const std::string& text, const std::filesystem::path& base_dir);
CollectionPlan load_plan_file(const std::filesystem::path& path);

}  // namespace hpland
