#pragma once

#include <string>

#include "hpland/ice.hpp"
#include "hpland/modality.hpp"
#include "hpland/optima.hpp"
#include "hpland/surface.hpp"

namespace hpland {

// Native SVG figure emission: the toolkit renders its own plots instead of
// depending on an external plotting stack. Output is deterministic text, so
// reruns produce byte-identical figures.

// Heatmap of a two-dimensional grid slice with the local optima overlaid as
// upward (maxima) and downward (minima) triangles.
std::string heatmap_svg(const GridValues& grid, const GridOptima& optima,
                        const std::string& title, const std::string& x_label,
                        const std::string& y_label);

// One polyline per anchor over the varied dimension's unit positions.
std::string ice_svg(const IceCurveSet& curves, const std::string& title,
                    const std::string& x_label);

// Per-configuration folding statistics, colored by category, with the
// unimodal/multimodal boundary at phi = 1 drawn as a dashed line.
std::string modality_svg(const PhaseModality& phase, const std::string& title);

}  // namespace hpland
