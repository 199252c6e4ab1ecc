#include "hpland/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hpland/collect.hpp"
#include "hpland/cross_validation.hpp"
#include "hpland/dataset.hpp"
#include "hpland/errors.hpp"
#include "hpland/ice.hpp"
#include "hpland/modality.hpp"
#include "hpland/optima.hpp"
#include "hpland/surface.hpp"
#include "hpland/svg.hpp"

namespace hpland {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string hash_tag(const std::string& data) {
    char buffer[32];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), fnv1a64(data), 16);
    std::string digits(buffer, end);
    return "fnv1a64:" + std::string(16 - digits.size(), '0') + digits;
}

std::string format_double(double value) {
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc()) {
        throw PipelineError("format_double: conversion failed");
    }
    return std::string(buffer, end);
}

std::string slurp(const fs::path& path, const char* context) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError(std::string(context) + ": cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Collects the bundle files and their content hashes as they are written,
// so summary.json can reference every one of them.
class BundleWriter {
public:
    explicit BundleWriter(fs::path root) : root_(std::move(root)) {}

    void write(const std::string& relative, const std::string& content) {
        const fs::path path = root_ / relative;
        fs::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw PipelineError("bundle: cannot open '" + path.string() + "' for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw PipelineError("bundle: failed writing '" + path.string() + "'");
        }
        hashes_[relative] = hash_tag(content);
    }

    // Registers an already-existing file (e.g. the dataset CSVs the analysis
    // consumes) under its current content.
    void note(const std::string& relative, const std::string& content) {
        hashes_[relative] = hash_tag(content);
    }

    json file_table() const {
        json table = json::object();
        for (const auto& [relative, hash] : hashes_) {
            table[relative] = hash;
        }
        return table;
    }

private:
    fs::path root_;
    std::map<std::string, std::string> hashes_;
};

std::string selections_json_text(const std::vector<Selection>& chosen) {
    json doc;
    doc["selections"] = json::array();
    for (const Selection& sel : chosen) {
        doc["selections"].push_back({{"phase_index", sel.phase_index},
                                     {"conf_index", sel.conf_index},
                                     {"seed", sel.seed}});
    }
    return doc.dump(2) + "\n";
}

std::vector<int> distinct_phases(const LandscapeDataset& ds) {
    std::set<int> phases;
    for (const auto& row : ds.rows()) {
        phases.insert(row.phase_index);
    }
    return {phases.begin(), phases.end()};
}

long long phase_checkpoint_step(const LandscapeDataset& ds, int phase_index) {
    for (const auto& row : ds.rows()) {
        if (row.phase_index == phase_index && row.eval_kind == EvalKind::Landscape) {
            return row.checkpoint_step;
        }
    }
    throw ValidationError("analyze: phase " + std::to_string(phase_index) +
                          " has no landscape rows");
}

std::string stats_csv_text(const SearchSpace& space, const std::vector<PerConfigStats>& blocks) {
    std::ostringstream out;
    out << "phase_index,eval_kind,conf_index";
    for (const auto& dim : space.dims()) {
        out << ",unit." << dim.name;
    }
    out << ",iqm,q_lower,q_upper,sample_count\n";
    for (const PerConfigStats& block : blocks) {
        for (const ConfigStats& entry : block.configs) {
            out << block.phase_index << ',' << eval_kind_name(block.eval_kind) << ','
                << entry.conf_index;
            for (double coord : entry.unit.coords) {
                out << ',' << format_double(coord);
            }
            out << ',' << format_double(entry.iqm) << ',' << format_double(entry.q_lower) << ','
                << format_double(entry.q_upper) << ',' << entry.sample_count << '\n';
        }
    }
    return out.str();
}

std::string cv_csv_text(const CvReport& report) {
    std::ostringstream out;
    out << "phase_index,mse_mean,mse_std,mae_mean,mae_std\n";
    for (const CvPhase& phase : report.phases) {
        out << phase.phase_index << ',' << format_double(phase.mse_mean) << ','
            << format_double(phase.mse_std) << ',' << format_double(phase.mae_mean) << ','
            << format_double(phase.mae_std) << '\n';
    }
    return out.str();
}

std::string ice_csv_text(const IceCurveSet& curves) {
    std::ostringstream out;
    out << "anchor_id,position,value\n";
    for (std::size_t a = 0; a < curves.curves.size(); ++a) {
        for (std::size_t i = 0; i < curves.positions.size(); ++i) {
            out << a << ',' << format_double(curves.positions[i]) << ','
                << format_double(curves.curves[a][i]) << '\n';
        }
    }
    return out.str();
}

std::string modality_csv_text(const ModalitySummary& summary) {
    std::ostringstream out;
    out << "phase_index,conf_index,phi,pivot,p_value,category,sample_count\n";
    for (const PhaseModality& phase : summary.phases) {
        for (const ModalityResult& result : phase.configs) {
            out << phase.phase_index << ',' << result.conf_index << ','
                << format_double(result.phi) << ',' << format_double(result.pivot) << ','
                << format_double(result.p_value) << ',' << modality_category_name(result.category)
                << ',' << result.sample_count << '\n';
        }
    }
    return out.str();
}

struct OptimaRow {
    std::string dim_x;
    std::string dim_y;
    GridNode node;
    bool is_max = false;
};

std::string optima_csv_text(const std::vector<OptimaRow>& rows) {
    std::ostringstream out;
    out << "dim_x,dim_y,ix,iy,x,y,value,kind\n";
    for (const OptimaRow& row : rows) {
        out << row.dim_x << ',' << row.dim_y << ',' << row.node.ix << ',' << row.node.iy << ','
            << format_double(row.node.x) << ',' << format_double(row.node.y) << ','
            << format_double(row.node.value) << ',' << (row.is_max ? "maximum" : "minimum")
            << '\n';
    }
    return out.str();
}

json normalization_json(const Normalization& affine) {
    return {{"offset", affine.offset}, {"scale", affine.scale}};
}

// The slice anchor for the 2-D maps: cube midpoint by default, the phase's
// best-IQM configuration when requested.
UnitVector slice_anchor(const RunConfig& config, const PerConfigStats& stats, std::size_t n) {
    if (!config.anchor_best) {
        UnitVector anchor;
        anchor.coords.assign(n, 0.5);
        return anchor;
    }
    const ConfigStats* best = &stats.configs.front();
    for (const ConfigStats& entry : stats.configs) {
        if (entry.iqm > best->iqm) {
            best = &entry;
        }
    }
    return best->unit;
}

}  // namespace

void cmd_validate(const RunConfig& config, std::ostream& out) {
    const CollectionPlan plan = load_plan_file(config.plan_path);
    const SearchSpace& space = plan.plan.space;
    out << "plan OK: " << space.dimension() << " hyperparameters, " << phase_count(plan.plan)
        << " phases, " << plan.plan.num_configs << " configurations, " << plan.plan.seeds.size()
        << " seeds, " << plan.plan.eval_episodes << " episodes, t_final " << plan.plan.t_final
        << "\n";
}

void cmd_collect(const RunConfig& config, std::ostream& out) {
    const CollectionPlan plan = load_plan_file(config.plan_path);
    const auto trainable = surrogate_trainable(plan.surrogate);
    const RunArchive archive = run_pipeline(plan.plan, *trainable);

    fs::create_directories(config.output_dir);
    BundleWriter bundle(config.output_dir);
    bundle.write("landscape.csv", to_csv(archive.landscape_records));
    bundle.write("final.csv", to_csv(archive.final_records));
    bundle.write("selections.json", selections_json_text(archive.chosen));
    archive.snapshots.write_dir(config.output_dir / "snapshots");

    out << "collected " << archive.landscape_records.rows().size() << " landscape rows, "
        << archive.final_records.rows().size() << " final rows, " << archive.snapshots.size()
        << " snapshots into " << config.output_dir.string() << "\n";
}

void cmd_analyze(const RunConfig& config, std::ostream& out) {
    const CollectionPlan plan = load_plan_file(config.plan_path);
    const SearchSpace& space = plan.plan.space;
    const std::size_t n = space.dimension();

    const std::string landscape_text = slurp(config.output_dir / "landscape.csv", "analyze");
    const std::string final_text = slurp(config.output_dir / "final.csv", "analyze");
    const LandscapeDataset landscape = dataset_from_csv_text(landscape_text, space);
    const LandscapeDataset final_records = dataset_from_csv_text(final_text, space);

    BundleWriter bundle(config.output_dir);
    bundle.note("landscape.csv", landscape_text);
    bundle.note("final.csv", final_text);
    {
        std::ifstream selections(config.output_dir / "selections.json", std::ios::binary);
        if (selections) {
            std::ostringstream buffer;
            buffer << selections.rdbuf();
            bundle.note("selections.json", buffer.str());
        }
    }

    const std::vector<int> phases = distinct_phases(landscape);

    // Per-config stats per phase for both record kinds; landscape stats feed
    // the models, final stats are reported alongside.
    std::vector<PerConfigStats> landscape_stats;
    std::vector<PerConfigStats> all_stats;
    for (int phase : phases) {
        landscape_stats.push_back(aggregate(landscape, EvalKind::Landscape, phase));
        all_stats.push_back(landscape_stats.back());
    }
    for (int phase : distinct_phases(final_records)) {
        all_stats.push_back(aggregate(final_records, EvalKind::Final, phase));
    }
    bundle.write("stats.csv", stats_csv_text(space, all_stats));

    const NormalizedStats normalized = normalize(landscape_stats, config.scope);

    std::vector<ModelKind> kinds;
    if (config.fit_ilm) {
        kinds.push_back(ModelKind::ILM);
    }
    if (config.fit_igpr) {
        kinds.push_back(ModelKind::IGPR);
    }
    if (kinds.empty()) {
        throw ValidationError("analyze: at least one model family must be enabled");
    }

    SurfaceFitOptions fit_options;
    fit_options.igpr.opt_seed = config.igpr_opt_seed;

    json summary;
    summary["plan"] = config.plan_path.filename().string();
    summary["normalization_scope"] = normalization_scope_name(config.scope);
    summary["alpha"] = config.alpha;
    summary["bootstrap"] = config.bootstrap;
    summary["cv_folds"] = config.cv_folds;
    summary["model_kinds"] = json::array();
    for (ModelKind kind : kinds) {
        summary["model_kinds"].push_back(model_kind_name(kind));
    }

    std::map<int, json> phase_summaries;
    for (std::size_t p = 0; p < phases.size(); ++p) {
        json entry;
        entry["phase_index"] = phases[p];
        entry["checkpoint_step"] = phase_checkpoint_step(landscape, phases[p]);
        entry["config_count"] = landscape_stats[p].configs.size();
        entry["normalization"] = normalization_json(normalized.affines[p]);
        phase_summaries[phases[p]] = std::move(entry);
    }

    // Model fits, cross-validation, ICE curves, and grid optima per family.
    for (ModelKind kind : kinds) {
        const std::string kind_name = model_kind_name(kind);
        std::vector<SurfaceTriple> triples;
        for (std::size_t p = 0; p < phases.size(); ++p) {
            try {
                triples.push_back(fit_surface_triple(landscape_stats[p], kind,
                                                     normalized.affines[p], fit_options));
            } catch (const std::exception& e) {
                throw PipelineError("phase " + std::to_string(phases[p]) + " " + kind_name +
                                    " surface fit failed: " + e.what());
            }
            const std::string model_file =
                "models/phase" + std::to_string(phases[p]) + "_" + kind_name + ".json";
            bundle.write(model_file, surface_triple_to_json_text(triples.back()));
        }

        CvReport cv;
        try {
            cv = cross_validate(landscape_stats, normalized.affines, kind, config.cv_folds,
                                config.cv_seed, fit_options);
        } catch (const std::exception& e) {
            throw PipelineError(kind_name + " cross-validation failed: " + std::string(e.what()));
        }
        bundle.write("cv_" + kind_name + ".csv", cv_csv_text(cv));
        for (const CvPhase& phase : cv.phases) {
            phase_summaries[phase.phase_index]["cv"][kind_name] = {{"mse_mean", phase.mse_mean},
                                                                   {"mse_std", phase.mse_std},
                                                                   {"mae_mean", phase.mae_mean},
                                                                   {"mae_std", phase.mae_std}};
        }

        for (std::size_t p = 0; p < phases.size(); ++p) {
            const std::string phase_tag = "phase" + std::to_string(phases[p]);
            const Surface& mean_surface = triples[p].mean;

            // ICE curves: anchored at the sampled configurations.
            std::vector<UnitVector> anchors;
            for (const ConfigStats& entry : landscape_stats[p].configs) {
                anchors.push_back(entry.unit);
            }
            for (std::size_t d = 0; d < n; ++d) {
                const IceCurveSet curves =
                    ice_curves(mean_surface, d, anchors, config.ice_resolution);
                const std::string stem = "ice_" + phase_tag + "_" + kind_name + "_" +
                                         space.dims()[d].name;
                bundle.write(stem + ".csv", ice_csv_text(curves));
                if (config.emit_svg) {
                    bundle.write("figures/" + stem + ".svg",
                                 ice_svg(curves,
                                         phase_tag + " " + kind_name + " ICE: " +
                                             space.dims()[d].name,
                                         space.dims()[d].name + " (unit)"));
                }
            }

            // 2-D slices: one map per hyperparameter pair.
            if (n >= 2 && config.grid_resolution >= 3) {
                const UnitVector anchor = slice_anchor(config, landscape_stats[p], n);
                std::vector<OptimaRow> optima_rows;
                for (std::size_t dx = 0; dx < n; ++dx) {
                    for (std::size_t dy = dx + 1; dy < n; ++dy) {
                        GridSpec spec;
                        spec.dim_x = dx;
                        spec.dim_y = dy;
                        spec.resolution_x = config.grid_resolution;
                        spec.resolution_y = config.grid_resolution;
                        spec.anchor = anchor;
                        const GridValues grid = grid_eval(mean_surface, spec);
                        const GridOptima optima = find_local_optima(grid);
                        for (const GridNode& node : optima.maxima) {
                            optima_rows.push_back(
                                {space.dims()[dx].name, space.dims()[dy].name, node, true});
                        }
                        for (const GridNode& node : optima.minima) {
                            optima_rows.push_back(
                                {space.dims()[dx].name, space.dims()[dy].name, node, false});
                        }
                        if (config.emit_svg) {
                            bundle.write("figures/map_" + phase_tag + "_" + kind_name + "_" +
                                             space.dims()[dx].name + "_" + space.dims()[dy].name +
                                             ".svg",
                                         heatmap_svg(grid, optima,
                                                     phase_tag + " " + kind_name + " mean surface",
                                                     space.dims()[dx].name + " (unit)",
                                                     space.dims()[dy].name + " (unit)"));
                        }
                    }
                }
                bundle.write("optima_" + phase_tag + "_" + kind_name + ".csv",
                             optima_csv_text(optima_rows));
            }
        }
        out << kind_name << ": fitted " << phases.size() << " phase triples\n";
    }

    // Per-configuration modality classification on the raw landscape returns.
    const ModalitySummary modality =
        modality_summary(landscape, config.alpha, config.bootstrap, config.modality_seed);
    bundle.write("modality.csv", modality_csv_text(modality));
    for (const PhaseModality& phase : modality.phases) {
        phase_summaries[phase.phase_index]["modality_percent"] = {
            {"unimodal", phase.percent_unimodal},
            {"multimodal", phase.percent_multimodal},
            {"uncategorized", phase.percent_uncategorized}};
        if (config.emit_svg) {
            bundle.write("figures/modality_phase" + std::to_string(phase.phase_index) + ".svg",
                         modality_svg(phase, "phase " + std::to_string(phase.phase_index) +
                                                 " per-configuration modality"));
        }
    }

    summary["phases"] = json::array();
    for (const auto& [phase_index, entry] : phase_summaries) {
        summary["phases"].push_back(entry);
    }
    summary["files"] = bundle.file_table();
    bundle.write("summary.json", summary.dump(2) + "\n");

    out << "analysis bundle written to " << config.output_dir.string() << "\n";
}

void cmd_report(const RunConfig& config, std::ostream& out) {
    cmd_collect(config, out);
    cmd_analyze(config, out);
}

}  // namespace hpland
