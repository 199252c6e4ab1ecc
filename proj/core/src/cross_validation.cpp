#include "hpland/cross_validation.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "hpland/errors.hpp"
#include "hpland/parallel.hpp"
#include "hpland/rng.hpp"
#include "hpland/stats.hpp"

namespace hpland {

namespace {

constexpr std::uint64_t kFoldShuffleTag = 0x63765f666f6c6473ULL;

struct FoldScore {
    double mse = 0.0;
    double mae = 0.0;
};

}  // namespace

CvPhase cross_validate_phase(const PerConfigStats& stats, ModelKind kind,
                             const Normalization& affine, int folds, std::uint64_t seed,
                             const SurfaceFitOptions& options) {
    if (folds < 2) {
        throw ValidationError("cross_validate: need at least two folds");
    }
    const std::size_t config_count = stats.configs.size();
    if (config_count < static_cast<std::size_t>(folds)) {
        throw ValidationError("cross_validate: " + std::to_string(config_count) +
                              " configurations cannot fill " + std::to_string(folds) + " folds");
    }

    // Shuffle whole configurations; position p of the shuffled order lands
    // in fold p mod k, giving near-equal fold sizes.
    std::vector<std::size_t> order(config_count);
    std::iota(order.begin(), order.end(), 0);
    RngStream stream(mix_seed({kFoldShuffleTag, seed, static_cast<std::uint64_t>(stats.phase_index)}));
    shuffle(order, stream);
    std::vector<int> fold_of(config_count);
    for (std::size_t p = 0; p < config_count; ++p) {
        fold_of[order[p]] = static_cast<int>(p % static_cast<std::size_t>(folds));
    }

    std::vector<FoldScore> scores(static_cast<std::size_t>(folds));
    parallel_for(static_cast<std::size_t>(folds), [&](std::size_t fold) {
        std::vector<std::pair<UnitVector, double>> train;
        std::vector<std::pair<UnitVector, double>> test;
        for (std::size_t c = 0; c < config_count; ++c) {
            const auto& entry = stats.configs[c];
            auto& bucket = fold_of[c] == static_cast<int>(fold) ? test : train;
            bucket.emplace_back(entry.unit, affine.normalize(entry.iqm));
        }
        Surface surface = kind == ModelKind::ILM ? Surface(fit_ilm(train))
                                                 : Surface(fit_igpr(train, options.igpr));
        double sq_total = 0.0;
        double abs_total = 0.0;
        for (const auto& [unit, target] : test) {
            const double diff = surface.predict(unit) - target;
            sq_total += diff * diff;
            abs_total += std::abs(diff);
        }
        scores[fold].mse = sq_total / static_cast<double>(test.size());
        scores[fold].mae = abs_total / static_cast<double>(test.size());
    });

    std::vector<double> mses;
    std::vector<double> maes;
    for (const auto& score : scores) {
        mses.push_back(score.mse);
        maes.push_back(score.mae);
    }
    CvPhase result;
    result.phase_index = stats.phase_index;
    result.mse_mean = mean(mses);
    result.mse_std = std::sqrt(sample_variance(mses));
    result.mae_mean = mean(maes);
    result.mae_std = std::sqrt(sample_variance(maes));
    return result;
}

CvReport cross_validate(const std::vector<PerConfigStats>& stats,
                        const std::vector<Normalization>& affines, ModelKind kind, int folds,
                        std::uint64_t seed, const SurfaceFitOptions& options) {
    if (stats.size() != affines.size()) {
        throw ValidationError("cross_validate: stats and affines differ in length");
    }
    CvReport report;
    report.model_kind = kind;
    report.folds = folds;
    report.shuffle_seed = seed;
    for (std::size_t i = 0; i < stats.size(); ++i) {
        report.phases.push_back(
            cross_validate_phase(stats[i], kind, affines[i], folds, seed, options));
    }
    return report;
}

}  // namespace hpland
