#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace hpland {

// Samples below this count are never classified; the test reports
// Uncategorized with p = 1.
inline constexpr int kMinFoldingSamples = 10;

struct FoldingStatistic {
    double phi = 0.0;    // 4 * Var(|X - pivot|) / Var(X)
    double pivot = 0.0;  // variance-minimizing folding point
};

// Folding statistic of unimodality. The pivot s* minimizes Var(|X - s|),
// located by a 1024-point grid over [min, max] refined by golden section
// around the best cell. The factor 4 calibrates the univariate statistic so
// a uniform distribution gives phi = 1; phi < 1 points to multimodality.
// Requires n >= 3 and nonzero variance.
FoldingStatistic folding_statistic(std::span<const double> samples);

enum class ModalityCategory { Unimodal, Multimodal, Uncategorized };

std::string modality_category_name(ModalityCategory category);
ModalityCategory modality_category_from_name(const std::string& name);

struct ModalityResult {
    int conf_index = -1;
    double phi = 0.0;
    double pivot = 0.0;
    double p_value = 1.0;
    ModalityCategory category = ModalityCategory::Uncategorized;
    int sample_count = 0;
};

// Classifies a sample: phi is compared against B seeded Monte Carlo draws
// from the uniform null, p = (1 + #{|phi_b - 1| >= |phi - 1|}) / (B + 1).
// Unimodal when p < alpha and phi >= 1, Multimodal when p < alpha and
// phi < 1, otherwise Uncategorized. Deterministic given seed.
ModalityResult folding_test(std::span<const double> samples, double alpha = 0.05,
                            int bootstrap = 1000, std::uint64_t seed = 0);

}  // namespace hpland
