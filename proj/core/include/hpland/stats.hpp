#pragma once

#include <span>
#include <string>
#include <vector>

namespace hpland {

// Interquartile mean with fractional weights: sorted order statistic j
// (1-based) carries rank mass ((j-1)/n, j/n]; its weight is the overlap of
// that mass with (0.25, 0.75]. Smooth for sample counts not divisible by 4.
double iqm(std::span<const double> samples);

// Linear interpolation between closest ranks at position q*(n-1) on the
// sorted samples (the common "type 7" estimator).
double quantile(std::span<const double> samples, double q);

double mean(std::span<const double> samples);

// Unbiased (n-1) sample variance.
double sample_variance(std::span<const double> samples);

// Min-max affine record: normalize(x) = (x - offset) / scale maps the fitted
// range onto [0, 1].
struct Normalization {
    double offset = 0.0;
    double scale = 1.0;

    double normalize(double x) const { return (x - offset) / scale; }
    double denormalize(double x) const { return offset + scale * x; }
};

// Throws on fewer than two distinct values.
Normalization fit_normalization(std::span<const double> values);

enum class NormalizationScope { PooledAllPhases, PerPhase };

std::string normalization_scope_name(NormalizationScope scope);
NormalizationScope normalization_scope_from_name(const std::string& name);

}  // namespace hpland
