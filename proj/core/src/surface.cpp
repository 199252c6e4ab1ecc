#include "hpland/surface.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hpland/errors.hpp"

namespace hpland {

std::string model_kind_name(ModelKind kind) { return kind == ModelKind::ILM ? "ilm" : "igpr"; }

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "ilm") {
        return ModelKind::ILM;
    }
    if (name == "igpr") {
        return ModelKind::IGPR;
    }
    throw ValidationError("unknown model kind '" + name + "' (expected 'ilm' or 'igpr')");
}

std::size_t Surface::dimension() const {
    return std::visit([](const auto& model) { return model.dimension(); }, model_);
}

double Surface::predict(const UnitVector& u) const {
    if (u.coords.size() != dimension()) {
        throw ValidationError("surface: query dimension does not match the model");
    }
    for (double coord : u.coords) {
        if (!(coord >= 0.0 && coord <= 1.0)) {
            throw ValidationError("surface: query point outside the unit cube");
        }
    }
    return std::visit([&](const auto& model) { return model.predict(u); }, model_);
}

const IlmSurface& Surface::ilm() const {
    if (const auto* model = std::get_if<IlmSurface>(&model_)) {
        return *model;
    }
    throw ValidationError("surface: not an ILM model");
}

const IgprSurface& Surface::igpr() const {
    if (const auto* model = std::get_if<IgprSurface>(&model_)) {
        return *model;
    }
    throw ValidationError("surface: not an IGPR model");
}

namespace {

Surface fit_one(const std::vector<UnitVector>& units, const std::vector<double>& targets,
                ModelKind kind, const SurfaceFitOptions& options) {
    std::vector<std::pair<UnitVector, double>> points;
    points.reserve(units.size());
    for (std::size_t i = 0; i < units.size(); ++i) {
        points.emplace_back(units[i], targets[i]);
    }
    if (kind == ModelKind::ILM) {
        return Surface(fit_ilm(points));
    }
    return Surface(fit_igpr(points, options.igpr));
}

}  // namespace

SurfaceTriple fit_surface_triple(const PerConfigStats& stats, ModelKind kind,
                                 const Normalization& affine, const SurfaceFitOptions& options) {
    if (stats.configs.empty()) {
        throw ValidationError("fit_surface_triple: no per-config statistics");
    }
    std::vector<UnitVector> units;
    std::vector<double> upper;
    std::vector<double> mean;
    std::vector<double> lower;
    units.reserve(stats.configs.size());
    for (const auto& entry : stats.configs) {
        units.push_back(entry.unit);
        upper.push_back(affine.normalize(entry.q_upper));
        mean.push_back(affine.normalize(entry.iqm));
        lower.push_back(affine.normalize(entry.q_lower));
    }
    return SurfaceTriple{fit_one(units, upper, kind, options), fit_one(units, mean, kind, options),
                         fit_one(units, lower, kind, options), kind, affine};
}

GridValues grid_eval(const Surface& surface, const GridSpec& grid) {
    const std::size_t n = surface.dimension();
    if (grid.dim_x >= n || grid.dim_y >= n || grid.dim_x == grid.dim_y) {
        throw ValidationError("grid_eval: free dimensions must be two distinct axes of the model");
    }
    if (grid.resolution_x < 2 || grid.resolution_y < 2) {
        throw ValidationError("grid_eval: grid resolution must be at least 2");
    }
    if (grid.anchor.coords.size() != n) {
        throw ValidationError("grid_eval: anchor dimension does not match the model");
    }

    GridValues out;
    out.spec = grid;
    out.xs.resize(grid.resolution_x);
    out.ys.resize(grid.resolution_y);
    for (std::size_t i = 0; i < grid.resolution_x; ++i) {
        out.xs[i] = static_cast<double>(i) / static_cast<double>(grid.resolution_x - 1);
    }
    for (std::size_t i = 0; i < grid.resolution_y; ++i) {
        out.ys[i] = static_cast<double>(i) / static_cast<double>(grid.resolution_y - 1);
    }
    out.values.resize(grid.resolution_x * grid.resolution_y);
    UnitVector point = grid.anchor;
    for (std::size_t iy = 0; iy < grid.resolution_y; ++iy) {
        for (std::size_t ix = 0; ix < grid.resolution_x; ++ix) {
            point.coords[grid.dim_x] = out.xs[ix];
            point.coords[grid.dim_y] = out.ys[iy];
            out.values[iy * grid.resolution_x + ix] = surface.predict(point);
        }
    }
    return out;
}

namespace {

using nlohmann::json;

json unit_list_to_json(const std::vector<UnitVector>& units) {
    json out = json::array();
    for (const auto& u : units) {
        out.push_back(u.coords);
    }
    return out;
}

std::vector<UnitVector> unit_list_from_json(const json& array) {
    std::vector<UnitVector> units;
    for (const auto& entry : array) {
        UnitVector u;
        u.coords = entry.get<std::vector<double>>();
        units.push_back(std::move(u));
    }
    return units;
}

json surface_to_json(const Surface& surface) {
    json out;
    if (surface.kind() == ModelKind::ILM) {
        const IlmSurface& model = surface.ilm();
        out["centers"] = unit_list_to_json(model.centers());
        out["weights"] = model.weights();
        out["tail"] = model.tail();
    } else {
        const IgprSurface& model = surface.igpr();
        out["inputs"] = unit_list_to_json(model.inputs());
        out["targets"] = model.targets();
        out["signal_variance"] = model.params().signal_variance;
        out["length_scales"] = model.params().length_scales;
        out["noise_variance"] = model.params().noise_variance;
        out["alpha"] = model.alpha();
        out["lml"] = model.lml_value();
    }
    return out;
}

Surface surface_from_json(const json& object, ModelKind kind) {
    if (kind == ModelKind::ILM) {
        return Surface(IlmSurface(unit_list_from_json(object.at("centers")),
                                  object.at("weights").get<std::vector<double>>(),
                                  object.at("tail").get<std::vector<double>>()));
    }
    IgprParams params;
    params.signal_variance = object.at("signal_variance").get<double>();
    params.length_scales = object.at("length_scales").get<std::vector<double>>();
    params.noise_variance = object.at("noise_variance").get<double>();
    return Surface(IgprSurface(unit_list_from_json(object.at("inputs")),
                               object.at("targets").get<std::vector<double>>(), std::move(params),
                               object.at("alpha").get<std::vector<double>>(),
                               object.at("lml").get<double>()));
}

}  // namespace

std::string surface_triple_to_json_text(const SurfaceTriple& triple) {
    json out;
    out["kind"] = model_kind_name(triple.model_kind);
    out["normalization"] = {{"offset", triple.normalization.offset},
                            {"scale", triple.normalization.scale}};
    out["upper"] = surface_to_json(triple.upper);
    out["mean"] = surface_to_json(triple.mean);
    out["lower"] = surface_to_json(triple.lower);
    return out.dump(2) + "\n";
}

SurfaceTriple surface_triple_from_json_text(const std::string& text) {
    try {
        const json object = json::parse(text);
        const ModelKind kind = model_kind_from_name(object.at("kind").get<std::string>());
        Normalization affine{object.at("normalization").at("offset").get<double>(),
                             object.at("normalization").at("scale").get<double>()};
        return SurfaceTriple{surface_from_json(object.at("upper"), kind),
                             surface_from_json(object.at("mean"), kind),
                             surface_from_json(object.at("lower"), kind), kind, affine};
    } catch (const json::exception& e) {
        throw ValidationError(std::string("model dump: malformed JSON: ") + e.what());
    }
}

void save_surface_triple(const SurfaceTriple& triple, const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw PipelineError("save_surface_triple: cannot open '" + path.string() + "'");
    }
    file << surface_triple_to_json_text(triple);
    if (!file) {
        throw PipelineError("save_surface_triple: failed writing '" + path.string() + "'");
    }
}

SurfaceTriple load_surface_triple(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw ValidationError("load_surface_triple: cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return surface_triple_from_json_text(buffer.str());
}

}  // namespace hpland
