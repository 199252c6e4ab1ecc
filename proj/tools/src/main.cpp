#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hpland/errors.hpp"
#include "hpland/report.hpp"
#include "hpland/stats.hpp"

namespace {

struct CliState {
    hpland::RunConfig config;
    std::string model = "both";
    std::string scope = "pooled_all_phases";
};

void add_plan_option(CLI::App* cmd, CliState& state) {
    cmd->add_option("--plan", state.config.plan_path, "Collection plan file (JSON)")->required();
}

void add_output_option(CLI::App* cmd, CliState& state) {
    cmd->add_option("--out", state.config.output_dir, "Output directory")->required();
}

void add_analysis_options(CLI::App* cmd, CliState& state) {
    cmd->add_option("--model", state.model, "Model families to fit")
        ->check(CLI::IsMember({"ilm", "igpr", "both"}))
        ->capture_default_str();
    cmd->add_option("--grid-resolution", state.config.grid_resolution,
                    "Nodes per axis of the 2-D maps")
        ->check(CLI::Range(std::size_t{3}, std::size_t{1024}))
        ->capture_default_str();
    cmd->add_option("--ice-resolution", state.config.ice_resolution, "Points per ICE curve")
        ->check(CLI::Range(std::size_t{2}, std::size_t{8192}))
        ->capture_default_str();
    cmd->add_option("--alpha", state.config.alpha, "Modality significance level")
        ->check(CLI::Range(1e-6, 0.999999))
        ->capture_default_str();
    cmd->add_option("--bootstrap", state.config.bootstrap, "Modality null draws")
        ->check(CLI::Range(100, 1000000))
        ->capture_default_str();
    cmd->add_option("--modality-seed", state.config.modality_seed, "Modality test seed")
        ->capture_default_str();
    cmd->add_option("--cv-folds", state.config.cv_folds, "Cross-validation folds")
        ->check(CLI::Range(2, 64))
        ->capture_default_str();
    cmd->add_option("--cv-seed", state.config.cv_seed, "Cross-validation shuffle seed")
        ->capture_default_str();
    cmd->add_option("--igpr-seed", state.config.igpr_opt_seed,
                    "Seed of the GP hyperparameter restarts")
        ->capture_default_str();
    cmd->add_option("--scope", state.scope, "Return normalization scope")
        ->check(CLI::IsMember({"pooled_all_phases", "per_phase"}))
        ->capture_default_str();
    cmd->add_flag("--svg", state.config.emit_svg, "Emit SVG figures");
    cmd->add_flag("--anchor-best", state.config.anchor_best,
                  "Anchor 2-D map slices at the best-IQM configuration instead of 0.5");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-varying hyperparameter landscape toolkit"};
    app.require_subcommand(1);

    CliState state;
    std::function<void(const hpland::RunConfig&, std::ostream&)> body;

    CLI::App* validate = app.add_subcommand("validate", "Check a collection plan file");
    add_plan_option(validate, state);
    validate->callback([&] { body = hpland::cmd_validate; });

    CLI::App* collect =
        app.add_subcommand("collect", "Run the data-collection pipeline on the plan's surrogate");
    add_plan_option(collect, state);
    add_output_option(collect, state);
    collect->callback([&] { body = hpland::cmd_collect; });

    CLI::App* analyze =
        app.add_subcommand("analyze", "Fit models and analyses over a collected archive");
    add_plan_option(analyze, state);
    add_output_option(analyze, state);
    add_analysis_options(analyze, state);
    analyze->callback([&] { body = hpland::cmd_analyze; });

    CLI::App* report = app.add_subcommand("report", "collect followed by analyze");
    add_plan_option(report, state);
    add_output_option(report, state);
    add_analysis_options(report, state);
    report->callback([&] { body = hpland::cmd_report; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        state.config.scope = hpland::normalization_scope_from_name(state.scope);
        state.config.fit_ilm = state.model != "igpr";
        state.config.fit_igpr = state.model != "ilm";
        body(state.config, std::cout);
    } catch (const hpland::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
