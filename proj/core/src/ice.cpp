#include "hpland/ice.hpp"

#include <string>

#include "hpland/errors.hpp"

namespace hpland {

IceCurveSet ice_curves(const Surface& surface, std::size_t dim,
                       const std::vector<UnitVector>& anchors, std::size_t resolution) {
    const std::size_t n = surface.dimension();
    if (dim >= n) {
        throw ValidationError("ice_curves: dimension " + std::to_string(dim) +
                              " outside the model's " + std::to_string(n) + " axes");
    }
    if (resolution < 2) {
        throw ValidationError("ice_curves: resolution must be at least 2");
    }
    if (anchors.empty()) {
        throw ValidationError("ice_curves: no anchors given");
    }

    IceCurveSet set;
    set.dim = dim;
    set.anchors = anchors;
    set.positions.resize(resolution);
    for (std::size_t i = 0; i < resolution; ++i) {
        set.positions[i] = static_cast<double>(i) / static_cast<double>(resolution - 1);
    }
    set.curves.reserve(anchors.size());
    for (const auto& anchor : anchors) {
        if (anchor.coords.size() != n) {
            throw ValidationError("ice_curves: anchor dimension does not match the model");
        }
        UnitVector point = anchor;
        std::vector<double> curve(resolution);
        for (std::size_t i = 0; i < resolution; ++i) {
            point.coords[dim] = set.positions[i];
            curve[i] = surface.predict(point);
        }
        set.curves.push_back(std::move(curve));
    }
    return set;
}

}  // namespace hpland
