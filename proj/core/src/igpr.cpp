#include "hpland/igpr.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "hpland/errors.hpp"
#include "hpland/optimizer.hpp"
#include "hpland/rng.hpp"

namespace hpland {

namespace {

constexpr std::uint64_t kRestartStreamTag = 0x696770725f6f7074ULL;

void check_training_data(const std::vector<UnitVector>& inputs,
                         const std::vector<double>& targets) {
    if (inputs.empty()) {
        throw ValidationError("igpr: no training inputs");
    }
    if (inputs.size() != targets.size()) {
        throw ValidationError("igpr: input and target counts differ");
    }
    const std::size_t n = inputs.front().coords.size();
    for (const auto& input : inputs) {
        if (input.coords.size() != n) {
            throw ValidationError("igpr: inconsistent input dimensions");
        }
        for (double coord : input.coords) {
            if (!std::isfinite(coord)) {
                throw ValidationError("igpr: non-finite input coordinate");
            }
        }
    }
    for (double target : targets) {
        if (!std::isfinite(target)) {
            throw ValidationError("igpr: non-finite target");
        }
    }
}

void check_params(const IgprParams& params, std::size_t dimension) {
    if (params.length_scales.size() != dimension) {
        throw ValidationError("igpr: length scale count does not match the input dimension");
    }
    if (!(params.signal_variance > 0.0) || !std::isfinite(params.signal_variance)) {
        throw ValidationError("igpr: signal variance must be positive");
    }
    if (!(params.noise_variance > 0.0) || !std::isfinite(params.noise_variance)) {
        throw ValidationError("igpr: noise variance must be positive");
    }
    for (double scale : params.length_scales) {
        if (!(scale > 0.0) || !std::isfinite(scale)) {
            throw ValidationError("igpr: length scales must be positive");
        }
    }
}

// Noise-free kernel block: K_s(i,j) = sigma_f^2 exp(-1/2 sum_d d_ij^2/l_d^2).
Eigen::MatrixXd signal_kernel(const IgprParams& params, const std::vector<UnitVector>& inputs) {
    const Eigen::Index m = static_cast<Eigen::Index>(inputs.size());
    Eigen::MatrixXd kernel(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i; j < m; ++j) {
            double quad = 0.0;
            const auto& a = inputs[static_cast<std::size_t>(i)].coords;
            const auto& b = inputs[static_cast<std::size_t>(j)].coords;
            for (std::size_t d = 0; d < a.size(); ++d) {
                const double diff = (a[d] - b[d]) / params.length_scales[d];
                quad += diff * diff;
            }
            const double value = params.signal_variance * std::exp(-0.5 * quad);
            kernel(i, j) = value;
            kernel(j, i) = value;
        }
    }
    return kernel;
}

}  // namespace

LmlResult lml(const IgprParams& params, const std::vector<UnitVector>& inputs,
              const std::vector<double>& targets) {
    check_training_data(inputs, targets);
    const std::size_t n = inputs.front().coords.size();
    check_params(params, n);
    const Eigen::Index m = static_cast<Eigen::Index>(inputs.size());

    const Eigen::MatrixXd signal = signal_kernel(params, inputs);
    Eigen::MatrixXd kernel = signal;
    kernel.diagonal().array() += params.noise_variance;

    const Eigen::LLT<Eigen::MatrixXd> llt(kernel);
    if (llt.info() != Eigen::Success) {
        throw PipelineError("lml: kernel matrix is not positive definite");
    }
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        y(i) = targets[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd alpha = llt.solve(y);

    LmlResult result;
    result.value = -0.5 * y.dot(alpha) -
                   llt.matrixL().toDenseMatrix().diagonal().array().log().sum() -
                   0.5 * static_cast<double>(m) * std::log(2.0 * std::numbers::pi);

    // Gradient via M = alpha alpha^T - K^-1: d(lml)/d(theta) =
    // 1/2 tr(M dK/d(theta)), with dK taken per log-parameter.
    const Eigen::MatrixXd kernel_inverse =
        llt.solve(Eigen::MatrixXd::Identity(m, m));
    const Eigen::MatrixXd trace_core = alpha * alpha.transpose() - kernel_inverse;

    result.gradient.assign(n + 2, 0.0);
    result.gradient[0] = 0.5 * trace_core.cwiseProduct(signal).sum();
    for (std::size_t d = 0; d < n; ++d) {
        double total = 0.0;
        const double inv_sq = 1.0 / (params.length_scales[d] * params.length_scales[d]);
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) {
                const double diff = inputs[static_cast<std::size_t>(i)].coords[d] -
                                    inputs[static_cast<std::size_t>(j)].coords[d];
                total += trace_core(i, j) * signal(i, j) * diff * diff * inv_sq;
            }
        }
        result.gradient[d + 1] = 0.5 * total;
    }
    result.gradient[n + 1] = 0.5 * params.noise_variance * trace_core.trace();
    return result;
}

IgprSurface::IgprSurface(std::vector<UnitVector> inputs, std::vector<double> targets,
                         IgprParams params)
    : inputs_(std::move(inputs)), targets_(std::move(targets)), params_(std::move(params)) {
    check_training_data(inputs_, targets_);
    check_params(params_, inputs_.front().coords.size());
    const Eigen::Index m = static_cast<Eigen::Index>(inputs_.size());
    Eigen::MatrixXd kernel = signal_kernel(params_, inputs_);
    kernel.diagonal().array() += params_.noise_variance;
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        y(i) = targets_[static_cast<std::size_t>(i)];
    }

    double jitter = 0.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
        Eigen::MatrixXd attempt_kernel = kernel;
        attempt_kernel.diagonal().array() += jitter;
        const Eigen::LLT<Eigen::MatrixXd> llt(attempt_kernel);
        if (llt.info() == Eigen::Success) {
            const Eigen::VectorXd alpha = llt.solve(y);
            alpha_.resize(inputs_.size());
            for (Eigen::Index i = 0; i < m; ++i) {
                alpha_[static_cast<std::size_t>(i)] = alpha(i);
            }
            lml_value_ = -0.5 * y.dot(alpha) -
                         llt.matrixL().toDenseMatrix().diagonal().array().log().sum() -
                         0.5 * static_cast<double>(m) * std::log(2.0 * std::numbers::pi);
            return;
        }
        jitter = jitter == 0.0 ? 1e-10 : jitter * 10.0;
    }
    throw PipelineError("igpr: kernel factorization failed after jitter escalation");
}

IgprSurface::IgprSurface(std::vector<UnitVector> inputs, std::vector<double> targets,
                         IgprParams params, std::vector<double> alpha, double lml_value)
    : inputs_(std::move(inputs)),
      targets_(std::move(targets)),
      params_(std::move(params)),
      alpha_(std::move(alpha)),
      lml_value_(lml_value) {
    check_training_data(inputs_, targets_);
    check_params(params_, inputs_.front().coords.size());
    if (alpha_.size() != inputs_.size()) {
        throw ValidationError("igpr: alpha size does not match the training inputs");
    }
}

double IgprSurface::predict(const UnitVector& u) const {
    if (u.coords.size() != dimension()) {
        throw ValidationError("igpr: query dimension does not match the surface");
    }
    double value = 0.0;
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
        double quad = 0.0;
        for (std::size_t d = 0; d < u.coords.size(); ++d) {
            const double diff = (u.coords[d] - inputs_[i].coords[d]) / params_.length_scales[d];
            quad += diff * diff;
        }
        value += alpha_[i] * params_.signal_variance * std::exp(-0.5 * quad);
    }
    return value;
}

IgprSurface fit_igpr(const std::vector<std::pair<UnitVector, double>>& points,
                     const IgprOptions& options) {
    if (points.size() < 2) {
        throw ValidationError("fit_igpr: need at least two points");
    }
    if (options.restarts < 1) {
        throw ValidationError("fit_igpr: restarts must be positive");
    }
    std::vector<UnitVector> inputs;
    std::vector<double> targets;
    inputs.reserve(points.size());
    targets.reserve(points.size());
    for (const auto& [input, target] : points) {
        inputs.push_back(input);
        targets.push_back(target);
    }
    check_training_data(inputs, targets);
    const std::size_t n = inputs.front().coords.size();

    // Optimize over theta = log [sigma_f^2, l_1..l_n, sigma_n^2].
    BoxBounds bounds;
    bounds.lower.push_back(std::log(options.signal_variance_min));
    bounds.upper.push_back(std::log(options.signal_variance_max));
    for (std::size_t d = 0; d < n; ++d) {
        bounds.lower.push_back(std::log(options.length_scale_min));
        bounds.upper.push_back(std::log(options.length_scale_max));
    }
    bounds.lower.push_back(std::log(options.noise_variance_min));
    bounds.upper.push_back(std::log(options.noise_variance_max));

    const auto params_from_theta = [n](const std::vector<double>& theta) {
        IgprParams params;
        params.signal_variance = std::exp(theta[0]);
        params.length_scales.resize(n);
        for (std::size_t d = 0; d < n; ++d) {
            params.length_scales[d] = std::exp(theta[d + 1]);
        }
        params.noise_variance = std::exp(theta[n + 1]);
        return params;
    };

    const GradientObjective objective = [&](const std::vector<double>& theta,
                                            std::vector<double>& gradient) {
        gradient.assign(theta.size(), 0.0);
        try {
            const LmlResult result = lml(params_from_theta(theta), inputs, targets);
            for (std::size_t i = 0; i < gradient.size(); ++i) {
                gradient[i] = -result.gradient[i];
            }
            return -result.value;
        } catch (const PipelineError&) {
            // Non-positive-definite corner of the box: reject the point.
            return std::numeric_limits<double>::infinity();
        }
    };

    MinimizeOptions minimize_options;
    minimize_options.max_iterations = options.max_iterations;
    minimize_options.gradient_tolerance = options.gradient_tolerance;

    RngStream restart_stream(mix_seed({kRestartStreamTag, options.opt_seed}));
    bool found = false;
    double best_objective = std::numeric_limits<double>::infinity();
    std::vector<double> best_theta;
    for (int restart = 0; restart < options.restarts; ++restart) {
        std::vector<double> theta(n + 2);
        for (std::size_t i = 0; i < theta.size(); ++i) {
            theta[i] = restart_stream.uniform(bounds.lower[i], bounds.upper[i]);
        }
        const MinimizeResult result = minimize_bounded(objective, std::move(theta), bounds,
                                                       minimize_options);
        if (std::isfinite(result.value) && result.value < best_objective) {
            best_objective = result.value;
            best_theta = result.x;
            found = true;
        }
    }
    if (!found) {
        throw PipelineError("fit_igpr: every restart failed to produce a usable fit");
    }
    return IgprSurface(std::move(inputs), std::move(targets), params_from_theta(best_theta));
}

}  // namespace hpland
