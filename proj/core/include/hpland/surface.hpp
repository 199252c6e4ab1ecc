#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "hpland/dataset.hpp"
#include "hpland/igpr.hpp"
#include "hpland/ilm.hpp"
#include "hpland/search_space.hpp"
#include "hpland/stats.hpp"

namespace hpland {

enum class ModelKind { ILM, IGPR };

std::string model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

// Value-semantic wrapper over the two model families with a common
// prediction interface. Immutable once constructed; safe to share across
// threads.
class Surface {
public:
    explicit Surface(IlmSurface ilm) : model_(std::move(ilm)) {}
    explicit Surface(IgprSurface igpr) : model_(std::move(igpr)) {}

    ModelKind kind() const {
        return std::holds_alternative<IlmSurface>(model_) ? ModelKind::ILM : ModelKind::IGPR;
    }
    std::size_t dimension() const;

    // Pointwise model value; the query must lie inside the unit cube.
    double predict(const UnitVector& u) const;

    const IlmSurface& ilm() const;    // throws unless kind() == ILM
    const IgprSurface& igpr() const;  // throws unless kind() == IGPR

private:
    std::variant<IlmSurface, IgprSurface> model_;
};

// Upper (97.5% quantile), mean (IQM), and lower (2.5% quantile) landscape
// surfaces fitted independently with one model family, plus the affine that
// maps model-scale values back to raw returns.
struct SurfaceTriple {
    Surface upper;
    Surface mean;
    Surface lower;
    ModelKind model_kind = ModelKind::ILM;
    Normalization normalization;
};

struct SurfaceFitOptions {
    IgprOptions igpr;
};

// `stats` carries raw-scale values; each surface's targets are normalized
// with `affine` before fitting, so predictions live on the normalized scale.
SurfaceTriple fit_surface_triple(const PerConfigStats& stats, ModelKind kind,
                                 const Normalization& affine,
                                 const SurfaceFitOptions& options = {});

// Tensor grid over two free dimensions; every other coordinate is fixed to
// the anchor's value.
struct GridSpec {
    std::size_t dim_x = 0;
    std::size_t dim_y = 1;
    std::size_t resolution_x = 51;
    std::size_t resolution_y = 51;
    UnitVector anchor;
};

struct GridValues {
    GridSpec spec;
    std::vector<double> xs;      // node positions of dim_x, size resolution_x
    std::vector<double> ys;      // node positions of dim_y, size resolution_y
    std::vector<double> values;  // row-major: values[iy * resolution_x + ix]

    double at(std::size_t ix, std::size_t iy) const {
        return values[iy * spec.resolution_x + ix];
    }
};

GridValues grid_eval(const Surface& surface, const GridSpec& grid);

// Model dump (JSON): kind, parameters, centers/weights, and the
// normalization affine — everything needed to reload and predict
// bit-identically.
std::string surface_triple_to_json_text(const SurfaceTriple& triple);
SurfaceTriple surface_triple_from_json_text(const std::string& text);
void save_surface_triple(const SurfaceTriple& triple, const std::filesystem::path& path);
SurfaceTriple load_surface_triple(const std::filesystem::path& path);

}  // namespace hpland
