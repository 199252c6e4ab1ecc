#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hpland/search_space.hpp"
#include "hpland/stats.hpp"

namespace hpland {

enum class EvalKind { Landscape, Final };

std::string eval_kind_name(EvalKind kind);
EvalKind eval_kind_from_name(const std::string& name);

// One evaluation episode of one (configuration, seed) pair at a checkpoint.
struct SampleRow {
    int phase_index = 0;
    long long checkpoint_step = 0;
    int conf_index = 0;
    std::uint64_t seed = 0;
    int episode = 0;
    EvalKind eval_kind = EvalKind::Landscape;
    UnitVector unit;
    ConfigVector config;
    double ret = 0.0;
};

// Immutable-after-construction container tying sample rows to their space.
class LandscapeDataset {
public:
    explicit LandscapeDataset(SearchSpace space) : space_(std::move(space)) {}

    // Validates dimensions, coordinate range, and unit/raw consistency.
    void add_row(SampleRow row);

    const SearchSpace& space() const { return space_; }
    const std::vector<SampleRow>& rows() const { return rows_; }
    bool empty() const { return rows_.empty(); }

    // Orders rows by (phase, conf, seed, kind, episode, checkpoint).
    void sort_rows();

private:
    SearchSpace space_;
    std::vector<SampleRow> rows_;
};

// Aggregated return statistics of one configuration at one phase.
struct ConfigStats {
    int conf_index = 0;
    UnitVector unit;
    double iqm = 0.0;
    double q_lower = 0.0;  // 2.5% quantile
    double q_upper = 0.0;  // 97.5% quantile
    int sample_count = 0;
};

struct PerConfigStats {
    int phase_index = 0;
    EvalKind eval_kind = EvalKind::Landscape;
    std::vector<ConfigStats> configs;  // ascending conf_index, gap-free
};

// Pools returns across seeds and episodes per configuration; errors when the
// (phase, kind) slice is empty or a configuration index in [0, max] has no
// rows.
PerConfigStats aggregate(const LandscapeDataset& ds, EvalKind kind, int phase_index);

// Min-max rescaling of the {q_lower, iqm, q_upper} values to [0, 1]. With
// PooledAllPhases one shared affine covers every phase (surfaces stay
// comparable across phases); with PerPhase each phase spans [0, 1] on its
// own. `affines` is parallel to `phases` either way.
struct NormalizedStats {
    std::vector<PerConfigStats> phases;
    std::vector<Normalization> affines;
    NormalizationScope scope = NormalizationScope::PooledAllPhases;
};

NormalizedStats normalize(const std::vector<PerConfigStats>& stats, NormalizationScope scope);

// Same rescaling applied to raw returns of a dataset.
struct NormalizedDataset {
    LandscapeDataset dataset;
    std::vector<int> phase_order;  // distinct phase indices, ascending
    std::vector<Normalization> affines;  // parallel to phase_order
    NormalizationScope scope = NormalizationScope::PooledAllPhases;
};

NormalizedDataset normalize(const LandscapeDataset& ds, NormalizationScope scope);

// CSV persistence. Header: phase_index,checkpoint_step,conf_index,seed,
// episode,eval_kind,unit.<d1>,..,hp.<d1>,..,return. Numbers use shortest
// round-trip decimal text, so write/read cycles are lossless and reruns are
// byte-identical.
std::string to_csv(const LandscapeDataset& ds);
void write_csv(const LandscapeDataset& ds, const std::filesystem::path& path);
LandscapeDataset dataset_from_csv_text(const std::string& text, const SearchSpace& space);
LandscapeDataset read_csv(const std::filesystem::path& path, const SearchSpace& space);

}  // namespace hpland
