#pragma once

#include <cstdint>
#include <vector>

#include "hpland/dataset.hpp"
#include "hpland/folding.hpp"

namespace hpland {

// Folding-test classification of every configuration in one phase, with the
// category shares over configurations.
struct PhaseModality {
    int phase_index = 0;
    std::vector<ModalityResult> configs;  // ascending conf_index, gap-free
    double percent_unimodal = 0.0;
    double percent_multimodal = 0.0;
    double percent_uncategorized = 0.0;
};

struct ModalitySummary {
    std::vector<PhaseModality> phases;  // ascending phase_index
};

// Classifies each configuration's pooled landscape returns (across seeds and
// episodes), phase by phase. Every configuration's test draws its null
// samples from an own stream derived from (seed, phase, config), so the
// parallel run matches a sequential one.
ModalitySummary modality_summary(const LandscapeDataset& ds, double alpha = 0.05,
                                 int bootstrap = 1000, std::uint64_t seed = 0);

}  // namespace hpland
