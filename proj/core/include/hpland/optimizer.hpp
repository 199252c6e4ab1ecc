#pragma once

#include <functional>
#include <vector>

namespace hpland {

struct BoxBounds {
    std::vector<double> lower;
    std::vector<double> upper;
};

// Objective callback: fills `gradient` (resized by the caller to x.size())
// and returns the value. A non-finite return rejects the queried point.
using GradientObjective =
    std::function<double(const std::vector<double>& x, std::vector<double>& gradient)>;

struct MinimizeOptions {
    int max_iterations = 200;
    double gradient_tolerance = 1e-6;  // infinity norm of the projected gradient
    std::size_t history = 8;           // quasi-Newton memory
};

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Box-bounded quasi-Newton minimizer: limited-memory BFGS directions with
// bound handling by projection (iterates are clipped to the box, and bound
// components pointing outward are zeroed in the convergence test).
// Deterministic: no randomness, result depends only on the inputs.
MinimizeResult minimize_bounded(const GradientObjective& objective, std::vector<double> x0,
                                const BoxBounds& bounds, const MinimizeOptions& options = {});

}  // namespace hpland
