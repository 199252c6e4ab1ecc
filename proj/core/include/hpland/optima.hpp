#pragma once

#include <cstddef>
#include <vector>

#include "hpland/surface.hpp"

namespace hpland {

struct GridNode {
    std::size_t ix = 0;
    std::size_t iy = 0;
    double x = 0.0;  // unit position of dim_x
    double y = 0.0;  // unit position of dim_y
    double value = 0.0;
};

struct GridOptima {
    std::vector<GridNode> maxima;
    std::vector<GridNode> minima;
};

// Strict local optima over the 8-connected (Moore) neighborhood. Boundary
// nodes compare against their available neighbors; any tie disqualifies a
// node (plateaus produce no optima). Grid must be at least 3x3.
GridOptima find_local_optima(const GridValues& grid);

}  // namespace hpland
