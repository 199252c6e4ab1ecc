#include "hpland/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hpland/errors.hpp"

namespace hpland {

namespace {

std::vector<double> sorted_copy(std::span<const double> samples) {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

void require_finite(std::span<const double> samples, const char* what) {
    for (double value : samples) {
        if (!std::isfinite(value)) {
            throw ValidationError(std::string(what) + ": non-finite sample");
        }
    }
}

}  // namespace

double iqm(std::span<const double> samples) {
    if (samples.empty()) {
        throw ValidationError("iqm: empty sample set");
    }
    require_finite(samples, "iqm");
    const std::vector<double> sorted = sorted_copy(samples);
    const double n = static_cast<double>(sorted.size());

    // Order statistic j covers rank mass ((j-1)/n, j/n]; weight it by the
    // length of the overlap with the central band (0.25, 0.75].
    double weight_sum = 0.0;
    double weighted_total = 0.0;
    for (std::size_t j = 1; j <= sorted.size(); ++j) {
        const double lo = (static_cast<double>(j) - 1.0) / n;
        const double hi = static_cast<double>(j) / n;
        const double overlap = std::max(0.0, std::min(hi, 0.75) - std::max(lo, 0.25));
        if (overlap > 0.0) {
            weight_sum += overlap;
            weighted_total += overlap * sorted[j - 1];
        }
    }
    return weighted_total / weight_sum;
}

double quantile(std::span<const double> samples, double q) {
    if (samples.empty()) {
        throw ValidationError("quantile: empty sample set");
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw ValidationError("quantile: q must lie in [0, 1]");
    }
    require_finite(samples, "quantile");
    const std::vector<double> sorted = sorted_copy(samples);
    if (sorted.size() == 1) {
        return sorted.front();
    }
    const double position = q * static_cast<double>(sorted.size() - 1);
    const double lower_index = std::floor(position);
    const std::size_t lo = static_cast<std::size_t>(lower_index);
    const double frac = position - lower_index;
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double mean(std::span<const double> samples) {
    if (samples.empty()) {
        throw ValidationError("mean: empty sample set");
    }
    double total = 0.0;
    for (double value : samples) {
        total += value;
    }
    return total / static_cast<double>(samples.size());
}

double sample_variance(std::span<const double> samples) {
    if (samples.size() < 2) {
        throw ValidationError("sample_variance: need at least two samples");
    }
    const double m = mean(samples);
    double total = 0.0;
    for (double value : samples) {
        const double d = value - m;
        total += d * d;
    }
    return total / static_cast<double>(samples.size() - 1);
}

Normalization fit_normalization(std::span<const double> values) {
    if (values.empty()) {
        throw ValidationError("fit_normalization: empty value set");
    }
    require_finite(values, "fit_normalization");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double value : values) {
        lo = std::min(lo, value);
        hi = std::max(hi, value);
    }
    if (!(hi > lo)) {
        throw ValidationError("fit_normalization: values span a single point");
    }
    return Normalization{lo, hi - lo};
}

std::string normalization_scope_name(NormalizationScope scope) {
    switch (scope) {
        case NormalizationScope::PooledAllPhases:
            return "pooled_all_phases";
        case NormalizationScope::PerPhase:
            return "per_phase";
    }
    throw ValidationError("normalization_scope_name: unknown scope");
}

NormalizationScope normalization_scope_from_name(const std::string& name) {
    if (name == "pooled_all_phases") {
        return NormalizationScope::PooledAllPhases;
    }
    if (name == "per_phase") {
        return NormalizationScope::PerPhase;
    }
    throw ValidationError("unknown normalization scope '" + name + "'");
}

}  // namespace hpland
