#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "hpland/search_space.hpp"

namespace hpland {

// ARD RBF kernel parameters of one Gaussian-process regressor:
// k(x, x') = signal_variance * exp(-1/2 sum_d (x_d - x'_d)^2 / l_d^2),
// plus noise_variance on the diagonal.
struct IgprParams {
    double signal_variance = 1.0;
    std::vector<double> length_scales;
    double noise_variance = 1e-2;
};

struct LmlResult {
    double value = 0.0;
    // Derivatives with respect to the log-parameters, ordered
    // [log signal_variance, log l_1 .. log l_n, log noise_variance].
    std::vector<double> gradient;
};

// Log marginal likelihood of the zero-mean GP and its analytic gradient.
// Throws PipelineError when the kernel matrix is not positive definite.
LmlResult lml(const IgprParams& params, const std::vector<UnitVector>& inputs,
              const std::vector<double>& targets);

struct IgprOptions {
    int restarts = 8;
    std::uint64_t opt_seed = 0;
    double length_scale_min = 1e-3;
    double length_scale_max = 1e3;
    double signal_variance_min = 1e-6;
    double signal_variance_max = 1e3;
    double noise_variance_min = 1e-8;
    double noise_variance_max = 1e1;
    int max_iterations = 200;
    double gradient_tolerance = 1e-6;
};

// Fitted GP regressor. Prediction is the posterior mean k_*^T alpha with
// alpha = K^-1 y cached at construction, so predicting never re-solves.
class IgprSurface {
public:
    // Factorizes the kernel matrix; on failure a diagonal jitter escalates
    // from 1e-10 by factors of 10 up to 1e-6 before giving up.
    IgprSurface(std::vector<UnitVector> inputs, std::vector<double> targets, IgprParams params);

    // Reload path: adopts a previously computed alpha without refactorizing,
    // so dumped models predict bit-identically.
    IgprSurface(std::vector<UnitVector> inputs, std::vector<double> targets, IgprParams params,
                std::vector<double> alpha, double lml_value);

    double predict(const UnitVector& u) const;

    std::size_t dimension() const { return params_.length_scales.size(); }
    const std::vector<UnitVector>& inputs() const { return inputs_; }
    const std::vector<double>& targets() const { return targets_; }
    const IgprParams& params() const { return params_; }
    const std::vector<double>& alpha() const { return alpha_; }
    double lml_value() const { return lml_value_; }

private:
    std::vector<UnitVector> inputs_;
    std::vector<double> targets_;
    IgprParams params_;
    std::vector<double> alpha_;
    double lml_value_ = 0.0;
};

// Maximizes the log marginal likelihood over log-parameters inside the
// option bounds, with `restarts` log-uniform multi-starts drawn from one
// seeded stream (so the best value is monotone in the restart count).
// Deterministic given opt_seed.
IgprSurface fit_igpr(const std::vector<std::pair<UnitVector, double>>& points,
                     const IgprOptions& options = {});

}  // namespace hpland
