#include "hpland/modality.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hpland/errors.hpp"
#include "hpland/parallel.hpp"
#include "hpland/rng.hpp"

namespace hpland {

namespace {

constexpr std::uint64_t kConfigStreamTag = 0x6d6f64616c697479ULL;

}  // namespace

ModalitySummary modality_summary(const LandscapeDataset& ds, double alpha, int bootstrap,
                                 std::uint64_t seed) {
    // Pool landscape returns by (phase, configuration).
    std::map<int, std::map<int, std::vector<double>>> pooled;
    for (const auto& row : ds.rows()) {
        if (row.eval_kind == EvalKind::Landscape) {
            pooled[row.phase_index][row.conf_index].push_back(row.ret);
        }
    }
    if (pooled.empty()) {
        throw ValidationError("modality_summary: dataset has no landscape rows");
    }

    ModalitySummary summary;
    for (const auto& [phase_index, by_config] : pooled) {
        const int max_conf = by_config.rbegin()->first;
        for (int conf = 0; conf <= max_conf; ++conf) {
            if (!by_config.contains(conf)) {
                throw ValidationError("modality_summary: configuration " + std::to_string(conf) +
                                      " has no landscape rows for phase " +
                                      std::to_string(phase_index));
            }
        }

        PhaseModality phase;
        phase.phase_index = phase_index;
        phase.configs.resize(static_cast<std::size_t>(max_conf) + 1);
        parallel_for(phase.configs.size(), [&](std::size_t conf) {
            const std::uint64_t config_seed =
                mix_seed({kConfigStreamTag, seed, static_cast<std::uint64_t>(phase_index),
                          static_cast<std::uint64_t>(conf)});
            ModalityResult result =
                folding_test(by_config.at(static_cast<int>(conf)), alpha, bootstrap, config_seed);
            result.conf_index = static_cast<int>(conf);
            phase.configs[conf] = std::move(result);
        });

        int counts[3] = {0, 0, 0};
        for (const auto& result : phase.configs) {
            ++counts[static_cast<int>(result.category)];
        }
        const double total = static_cast<double>(phase.configs.size());
        phase.percent_unimodal = 100.0 * counts[static_cast<int>(ModalityCategory::Unimodal)] / total;
        phase.percent_multimodal =
            100.0 * counts[static_cast<int>(ModalityCategory::Multimodal)] / total;
        phase.percent_uncategorized =
            100.0 * counts[static_cast<int>(ModalityCategory::Uncategorized)] / total;
        summary.phases.push_back(std::move(phase));
    }
    return summary;
}

}  // namespace hpland
