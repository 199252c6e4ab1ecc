#include "hpland/ilm.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "hpland/errors.hpp"

namespace hpland {

IlmSurface::IlmSurface(std::vector<UnitVector> centers, std::vector<double> weights,
                       std::vector<double> tail)
    : centers_(std::move(centers)), weights_(std::move(weights)), tail_(std::move(tail)) {
    if (tail_.size() < 2) {
        throw ValidationError("ilm: tail must hold a constant plus one slope per dimension");
    }
    const std::size_t n = tail_.size() - 1;
    if (centers_.size() != weights_.size()) {
        throw ValidationError("ilm: center and weight counts differ");
    }
    for (const auto& center : centers_) {
        if (center.coords.size() != n) {
            throw ValidationError("ilm: center dimension does not match the tail");
        }
    }
}

double IlmSurface::predict(const UnitVector& u) const {
    if (u.coords.size() != dimension()) {
        throw ValidationError("ilm: query dimension does not match the surface");
    }
    double value = tail_[0];
    for (std::size_t d = 0; d < u.coords.size(); ++d) {
        value += tail_[d + 1] * u.coords[d];
    }
    for (std::size_t j = 0; j < centers_.size(); ++j) {
        value += weights_[j] * (-unit_distance(u, centers_[j]));
    }
    return value;
}

IlmSurface fit_ilm(const std::vector<std::pair<UnitVector, double>>& points) {
    if (points.empty()) {
        throw ValidationError("fit_ilm: no points");
    }
    const std::size_t m = points.size();
    const std::size_t n = points.front().first.coords.size();
    // n + 1 points are the unisolvency minimum for the degree-1 tail.
    if (m < n + 1) {
        throw ValidationError("fit_ilm: need at least " + std::to_string(n + 1) + " points for " +
                              std::to_string(n) + " dimensions, got " + std::to_string(m));
    }
    for (const auto& [center, target] : points) {
        if (center.coords.size() != n) {
            throw ValidationError("fit_ilm: inconsistent point dimensions");
        }
        if (!std::isfinite(target)) {
            throw ValidationError("fit_ilm: non-finite target");
        }
        for (double coord : center.coords) {
            if (!std::isfinite(coord)) {
                throw ValidationError("fit_ilm: non-finite center coordinate");
            }
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            if (points[i].first.coords == points[j].first.coords) {
                throw ValidationError("fit_ilm: duplicate centers at indices " + std::to_string(i) +
                                      " and " + std::to_string(j));
            }
        }
    }

    // Augmented symmetric system [[A, P], [P^T, 0]] [w; c] = [y; 0] with
    // A_ij = -|x_i - x_j| and P rows (1, x_i).
    const std::size_t size = m + n + 1;
    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(size),
                                                   static_cast<Eigen::Index>(size));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            system(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                -unit_distance(points[i].first, points[j].first);
        }
        system(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) = 1.0;
        system(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(i)) = 1.0;
        for (std::size_t d = 0; d < n; ++d) {
            const double coord = points[i].first.coords[d];
            system(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m + 1 + d)) = coord;
            system(static_cast<Eigen::Index>(m + 1 + d), static_cast<Eigen::Index>(i)) = coord;
        }
        rhs(static_cast<Eigen::Index>(i)) = points[i].second;
    }

    // Jitter-free solve first; escalate only when the interpolation
    // conditions fail to hold at the centers.
    double jitter = 0.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
        Eigen::MatrixXd attempt_system = system;
        for (std::size_t i = 0; i < m; ++i) {
            attempt_system(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += jitter;
        }
        const Eigen::VectorXd solution =
            attempt_system.colPivHouseholderQr().solve(rhs);
        if (solution.allFinite()) {
            std::vector<UnitVector> centers;
            centers.reserve(m);
            std::vector<double> weights(m);
            std::vector<double> tail(n + 1);
            for (std::size_t i = 0; i < m; ++i) {
                centers.push_back(points[i].first);
                weights[i] = solution(static_cast<Eigen::Index>(i));
            }
            for (std::size_t d = 0; d <= n; ++d) {
                tail[d] = solution(static_cast<Eigen::Index>(m + d));
            }
            IlmSurface surface(std::move(centers), std::move(weights), std::move(tail));
            double worst = 0.0;
            for (const auto& [center, target] : points) {
                worst = std::max(worst, std::abs(surface.predict(center) - target));
            }
            if (worst <= 1e-9) {
                return surface;
            }
        }
        jitter = jitter == 0.0 ? 1e-10 : jitter * 10.0;
    }
    throw PipelineError("fit_ilm: system remained singular after jitter escalation");
}

}  // namespace hpland
