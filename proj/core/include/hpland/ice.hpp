#pragma once

#include <cstddef>
#include <vector>

#include "hpland/search_space.hpp"
#include "hpland/surface.hpp"

namespace hpland {

// One-dimensional slices through a landscape model: for each anchor, the
// surface is evaluated along one dimension while every other coordinate
// stays at the anchor's value.
struct IceCurveSet {
    std::size_t dim = 0;
    std::vector<double> positions;            // R equispaced unit positions
    std::vector<UnitVector> anchors;          // the fixed-coordinate choices
    std::vector<std::vector<double>> curves;  // one length-R curve per anchor
};

IceCurveSet ice_curves(const Surface& surface, std::size_t dim,
                       const std::vector<UnitVector>& anchors, std::size_t resolution);

}  // namespace hpland
