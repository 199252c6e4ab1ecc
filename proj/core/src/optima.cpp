#include "hpland/optima.hpp"

#include "hpland/errors.hpp"

namespace hpland {

GridOptima find_local_optima(const GridValues& grid) {
    const std::size_t nx = grid.spec.resolution_x;
    const std::size_t ny = grid.spec.resolution_y;
    if (nx < 3 || ny < 3) {
        throw ValidationError("find_local_optima: grid must be at least 3x3");
    }
    if (grid.values.size() != nx * ny || grid.xs.size() != nx || grid.ys.size() != ny) {
        throw ValidationError("find_local_optima: grid buffers are inconsistent");
    }

    GridOptima optima;
    for (std::size_t iy = 0; iy < ny; ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double value = grid.at(ix, iy);
            bool is_max = true;
            bool is_min = true;
            for (int dy = -1; dy <= 1 && (is_max || is_min); ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) {
                        continue;
                    }
                    const long long jx = static_cast<long long>(ix) + dx;
                    const long long jy = static_cast<long long>(iy) + dy;
                    if (jx < 0 || jy < 0 || jx >= static_cast<long long>(nx) ||
                        jy >= static_cast<long long>(ny)) {
                        continue;
                    }
                    const double neighbor =
                        grid.at(static_cast<std::size_t>(jx), static_cast<std::size_t>(jy));
                    // Strict comparisons: an equal neighbor disqualifies
                    // both directions, so plateaus are never optima.
                    if (value <= neighbor) {
                        is_max = false;
                    }
                    if (value >= neighbor) {
                        is_min = false;
                    }
                }
            }
            if (is_max) {
                optima.maxima.push_back(GridNode{ix, iy, grid.xs[ix], grid.ys[iy], value});
            } else if (is_min) {
                optima.minima.push_back(GridNode{ix, iy, grid.xs[ix], grid.ys[iy], value});
            }
        }
    }
    return optima;
}

}  // namespace hpland
