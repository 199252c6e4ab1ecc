#pragma once

#include <cstdint>
#include <vector>

#include "hpland/dataset.hpp"
#include "hpland/surface.hpp"

namespace hpland {

// Fold-aggregated fit quality of one phase: mean and sample standard
// deviation of MSE and MAE across the k folds, on normalized targets.
struct CvPhase {
    int phase_index = 0;
    double mse_mean = 0.0;
    double mse_std = 0.0;
    double mae_mean = 0.0;
    double mae_std = 0.0;
};

struct CvReport {
    ModelKind model_kind = ModelKind::ILM;
    int folds = 5;
    std::uint64_t shuffle_seed = 0;
    std::vector<CvPhase> phases;
};

// k-fold cross-validation of the mean surface (IQM targets) for one phase.
// Whole configurations are shuffled and assigned to folds, so a config's
// samples never straddle the train/test split. Deterministic given seed.
CvPhase cross_validate_phase(const PerConfigStats& stats, ModelKind kind,
                             const Normalization& affine, int folds, std::uint64_t seed,
                             const SurfaceFitOptions& options = {});

// One CvPhase per entry of `stats`; `affines` is parallel to `stats`.
CvReport cross_validate(const std::vector<PerConfigStats>& stats,
                        const std::vector<Normalization>& affines, ModelKind kind, int folds,
                        std::uint64_t seed, const SurfaceFitOptions& options = {});

}  // namespace hpland
