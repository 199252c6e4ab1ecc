#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>

#include "hpland/stats.hpp"

namespace hpland {

// Everything one CLI invocation needs: file locations plus analysis knobs.
struct RunConfig {
    std::filesystem::path plan_path;
    std::filesystem::path output_dir;
    bool fit_ilm = true;   // --model restricts to one family
    bool fit_igpr = true;
    std::size_t grid_resolution = 51;
    std::size_t ice_resolution = 51;
    double alpha = 0.05;          // modality significance level
    int bootstrap = 1000;         // modality null draws
    std::uint64_t modality_seed = 0;
    int cv_folds = 5;
    std::uint64_t cv_seed = 0;
    std::uint64_t igpr_opt_seed = 0;
    NormalizationScope scope = NormalizationScope::PooledAllPhases;
    bool emit_svg = false;
    bool anchor_best = false;  // slice anchor: best-IQM config instead of 0.5
};

// Subcommand bodies. Each throws ValidationError or PipelineError; the CLI
// maps those to exit codes. Progress lines go to `out`; every file write is
// single-threaded and ordered, so reruns are byte-identical.

// Loads and validates the plan, printing a short summary.
void cmd_validate(const RunConfig& config, std::ostream& out);

// Runs the full collection pipeline against the plan's surrogate and
// persists the archive: landscape.csv, final.csv, selections.json, and the
// snapshot store.
void cmd_collect(const RunConfig& config, std::ostream& out);

// Reads a collected archive and emits the analysis bundle: per-config stats,
// per-phase model dumps, cross-validation tables, ICE curves, grid optima,
// modality classifications, summary.json (with a content hash per bundle
// file), and optional SVG figures.
void cmd_analyze(const RunConfig& config, std::ostream& out);

// collect followed by analyze: the whole bundle from one command.
void cmd_report(const RunConfig& config, std::ostream& out);

}  // namespace hpland
