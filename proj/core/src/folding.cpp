#include "hpland/folding.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hpland/errors.hpp"
#include "hpland/rng.hpp"

namespace hpland {

namespace {

constexpr std::uint64_t kNullStreamTag = 0x666f6c645f6e756cULL;

// Evaluates Var(|X - s|) in O(log n) from the sorted samples and their
// prefix sums: E[(X-s)^2] comes from the first two moments and E|X-s| from
// the split at s, since |X-s|^2 = (X-s)^2.
class FoldedVariance {
public:
    explicit FoldedVariance(std::span<const double> samples)
        : sorted_(samples.begin(), samples.end()) {
        std::sort(sorted_.begin(), sorted_.end());
        prefix_.resize(sorted_.size() + 1, 0.0);
        double squares = 0.0;
        for (std::size_t i = 0; i < sorted_.size(); ++i) {
            prefix_[i + 1] = prefix_[i] + sorted_[i];
            squares += sorted_[i] * sorted_[i];
        }
        count_ = static_cast<double>(sorted_.size());
        total_ = prefix_.back();
        total_squares_ = squares;
    }

    double operator()(double s) const {
        const double mean_square = (total_squares_ - 2.0 * s * total_ + count_ * s * s) / count_;
        const std::size_t below =
            static_cast<std::size_t>(std::upper_bound(sorted_.begin(), sorted_.end(), s) -
                                     sorted_.begin());
        const double mean_abs =
            (total_ - 2.0 * prefix_[below] + s * (2.0 * static_cast<double>(below) - count_)) /
            count_;
        return mean_square - mean_abs * mean_abs;
    }

    double min() const { return sorted_.front(); }
    double max() const { return sorted_.back(); }
    double variance() const {
        const double mean = total_ / count_;
        return total_squares_ / count_ - mean * mean;
    }

private:
    std::vector<double> sorted_;
    std::vector<double> prefix_;
    double count_ = 0.0;
    double total_ = 0.0;
    double total_squares_ = 0.0;
};

FoldingStatistic statistic_impl(std::span<const double> samples) {
    const FoldedVariance folded(samples);
    const double lo = folded.min();
    const double hi = folded.max();

    // Coarse pass: 1024 equispaced pivots across the sample range.
    constexpr std::size_t kGridPoints = 1024;
    double best_pivot = lo;
    double best_value = folded(lo);
    std::size_t best_index = 0;
    for (std::size_t i = 1; i < kGridPoints; ++i) {
        const double s = lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(kGridPoints - 1);
        const double value = folded(s);
        if (value < best_value) {
            best_value = value;
            best_pivot = s;
            best_index = i;
        }
    }

    // Golden-section refinement inside the bracket around the best cell.
    const double cell = (hi - lo) / static_cast<double>(kGridPoints - 1);
    double a = std::max(lo, best_pivot - cell);
    double b = std::min(hi, best_pivot + cell);
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = folded(x1);
    double f2 = folded(x2);
    const double tolerance = 1e-10 * std::max(hi - lo, 1.0);
    while (b - a > tolerance) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = folded(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = folded(x2);
        }
        if (std::min(f1, f2) < best_value) {
            best_value = std::min(f1, f2);
            best_pivot = f1 <= f2 ? x1 : x2;
        }
    }
    (void)best_index;

    FoldingStatistic result;
    result.pivot = best_pivot;
    result.phi = 4.0 * best_value / folded.variance();
    return result;
}

}  // namespace

FoldingStatistic folding_statistic(std::span<const double> samples) {
    if (samples.size() < 3) {
        throw ValidationError("folding_statistic: need at least three samples");
    }
    for (double value : samples) {
        if (!std::isfinite(value)) {
            throw ValidationError("folding_statistic: non-finite sample");
        }
    }
    const FoldedVariance folded(samples);
    if (!(folded.variance() > 0.0)) {
        throw ValidationError("folding_statistic: samples have zero variance");
    }
    return statistic_impl(samples);
}

std::string modality_category_name(ModalityCategory category) {
    switch (category) {
        case ModalityCategory::Unimodal:
            return "unimodal";
        case ModalityCategory::Multimodal:
            return "multimodal";
        case ModalityCategory::Uncategorized:
            return "uncategorized";
    }
    throw ValidationError("modality_category_name: unknown category");
}

ModalityCategory modality_category_from_name(const std::string& name) {
    if (name == "unimodal") {
        return ModalityCategory::Unimodal;
    }
    if (name == "multimodal") {
        return ModalityCategory::Multimodal;
    }
    if (name == "uncategorized") {
        return ModalityCategory::Uncategorized;
    }
    throw ValidationError("unknown modality category '" + name + "'");
}

ModalityResult folding_test(std::span<const double> samples, double alpha, int bootstrap,
                            std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("folding_test: alpha must lie in (0, 1)");
    }
    if (bootstrap < 100) {
        throw ValidationError("folding_test: need at least 100 null draws");
    }

    ModalityResult result;
    result.sample_count = static_cast<int>(samples.size());
    const FoldingStatistic observed = folding_statistic(samples);
    result.phi = observed.phi;
    result.pivot = observed.pivot;

    if (samples.size() < static_cast<std::size_t>(kMinFoldingSamples)) {
        result.p_value = 1.0;
        result.category = ModalityCategory::Uncategorized;
        return result;
    }

    // Monte Carlo p-value under the uniform null (the phi = 1 boundary).
    RngStream stream(mix_seed({kNullStreamTag, seed}));
    const double observed_distance = std::abs(observed.phi - 1.0);
    std::vector<double> draw(samples.size());
    int at_least_as_extreme = 0;
    for (int b = 0; b < bootstrap; ++b) {
        for (double& value : draw) {
            value = stream.uniform();
        }
        const FoldingStatistic null_stat = statistic_impl(draw);
        if (std::abs(null_stat.phi - 1.0) >= observed_distance) {
            ++at_least_as_extreme;
        }
    }
    result.p_value = (1.0 + at_least_as_extreme) / (static_cast<double>(bootstrap) + 1.0);

    if (result.p_value < alpha) {
        result.category =
            observed.phi >= 1.0 ? ModalityCategory::Unimodal : ModalityCategory::Multimodal;
    } else {
        result.category = ModalityCategory::Uncategorized;
    }
    return result;
}

}  // namespace hpland
