#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hpland/search_space.hpp"

namespace hpland {

// Exact scattered-data interpolant over the unit cube: radial basis
// phi(r) = -r plus a degree-1 polynomial tail, fitted with the usual moment
// side conditions so the augmented system is uniquely solvable. The fitted
// surface passes through every training point (within 1e-9).
class IlmSurface {
public:
    // tail[0] is the constant term, tail[1..n] the per-dimension slopes.
    IlmSurface(std::vector<UnitVector> centers, std::vector<double> weights,
               std::vector<double> tail);

    double predict(const UnitVector& u) const;

    std::size_t dimension() const { return tail_.size() - 1; }
    const std::vector<UnitVector>& centers() const { return centers_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& tail() const { return tail_; }

private:
    std::vector<UnitVector> centers_;
    std::vector<double> weights_;
    std::vector<double> tail_;
};

// Requires at least n + 1 points and pairwise-distinct centers. On solve
// failure a diagonal jitter escalates from 1e-10 by factors of 10 up to
// 1e-6 before giving up.
IlmSurface fit_ilm(const std::vector<std::pair<UnitVector, double>>& points);

}  // namespace hpland
