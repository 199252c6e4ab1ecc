#include "hpland/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "hpland/errors.hpp"

namespace hpland {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        total += a[i] * b[i];
    }
    return total;
}

std::vector<double> clip_to_box(std::vector<double> x, const BoxBounds& bounds) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::clamp(x[i], bounds.lower[i], bounds.upper[i]);
    }
    return x;
}

// Gradient components that push an active bound further outward do not count
// toward convergence (the box blocks that direction).
double projected_gradient_norm(const std::vector<double>& x, const std::vector<double>& gradient,
                               const BoxBounds& bounds) {
    double norm = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double g = gradient[i];
        if ((x[i] <= bounds.lower[i] && g > 0.0) || (x[i] >= bounds.upper[i] && g < 0.0)) {
            g = 0.0;
        }
        norm = std::max(norm, std::abs(g));
    }
    return norm;
}

}  // namespace

MinimizeResult minimize_bounded(const GradientObjective& objective, std::vector<double> x0,
                                const BoxBounds& bounds, const MinimizeOptions& options) {
    const std::size_t n = x0.size();
    if (n == 0) {
        throw ValidationError("minimize_bounded: empty parameter vector");
    }
    if (bounds.lower.size() != n || bounds.upper.size() != n) {
        throw ValidationError("minimize_bounded: bounds dimension mismatch");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(bounds.lower[i] <= bounds.upper[i])) {
            throw ValidationError("minimize_bounded: lower bound exceeds upper bound");
        }
    }

    MinimizeResult result;
    result.x = clip_to_box(std::move(x0), bounds);
    std::vector<double> gradient(n, 0.0);
    result.value = objective(result.x, gradient);
    if (!std::isfinite(result.value)) {
        // The start point is outside the objective's domain; nothing to do.
        return result;
    }

    std::deque<std::pair<std::vector<double>, std::vector<double>>> memory;  // (s, y)
    std::vector<double> direction(n);
    std::vector<double> candidate_gradient(n);

    for (int iteration = 0; iteration < options.max_iterations; ++iteration) {
        result.iterations = iteration;
        if (projected_gradient_norm(result.x, gradient, bounds) < options.gradient_tolerance) {
            result.converged = true;
            return result;
        }

        // Two-loop recursion for d = -H g on the stored curvature pairs.
        direction = gradient;
        std::vector<double> alphas(memory.size());
        for (std::size_t k = memory.size(); k-- > 0;) {
            const auto& [s, y] = memory[k];
            const double rho = 1.0 / dot(y, s);
            alphas[k] = rho * dot(s, direction);
            for (std::size_t i = 0; i < n; ++i) {
                direction[i] -= alphas[k] * y[i];
            }
        }
        if (!memory.empty()) {
            const auto& [s, y] = memory.back();
            const double gamma = dot(s, y) / dot(y, y);
            for (double& d : direction) {
                d *= gamma;
            }
        }
        for (std::size_t k = 0; k < memory.size(); ++k) {
            const auto& [s, y] = memory[k];
            const double rho = 1.0 / dot(y, s);
            const double beta = rho * dot(y, direction);
            for (std::size_t i = 0; i < n; ++i) {
                direction[i] += s[i] * (alphas[k] - beta);
            }
        }
        for (double& d : direction) {
            d = -d;
        }
        if (dot(gradient, direction) >= 0.0) {
            // Quasi-Newton model failed to give descent; fall back to
            // steepest descent and drop the stale curvature pairs.
            memory.clear();
            for (std::size_t i = 0; i < n; ++i) {
                direction[i] = -gradient[i];
            }
        }

        // Backtracking Armijo search over projected trial points.
        constexpr double kArmijo = 1e-4;
        double step = 1.0;
        bool accepted = false;
        std::vector<double> candidate;
        double candidate_value = 0.0;
        for (int attempt = 0; attempt < 60; ++attempt) {
            candidate = result.x;
            for (std::size_t i = 0; i < n; ++i) {
                candidate[i] += step * direction[i];
            }
            candidate = clip_to_box(std::move(candidate), bounds);
            std::vector<double> displacement(n);
            for (std::size_t i = 0; i < n; ++i) {
                displacement[i] = candidate[i] - result.x[i];
            }
            const double forecast = dot(gradient, displacement);
            if (forecast >= 0.0) {
                // Projection removed all descent at this step size.
                step *= 0.5;
                continue;
            }
            candidate_value = objective(candidate, candidate_gradient);
            if (std::isfinite(candidate_value) &&
                candidate_value <= result.value + kArmijo * forecast) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // No productive step remains at this point.
            return result;
        }

        std::vector<double> s(n);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = candidate[i] - result.x[i];
            y[i] = candidate_gradient[i] - gradient[i];
        }
        const double curvature = dot(s, y);
        if (curvature > 1e-12 * std::sqrt(dot(s, s)) * std::sqrt(dot(y, y))) {
            memory.emplace_back(std::move(s), std::move(y));
            if (memory.size() > options.history) {
                memory.pop_front();
            }
        }
        result.x = std::move(candidate);
        result.value = candidate_value;
        gradient = candidate_gradient;
    }
    result.iterations = options.max_iterations;
    result.converged =
        projected_gradient_norm(result.x, gradient, bounds) < options.gradient_tolerance;
    return result;
}

}  // namespace hpland
