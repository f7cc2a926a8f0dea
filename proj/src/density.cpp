#include "accustripes/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace accustripes {

double quantile(std::span<const double> sortedValues, double q) {
    if (sortedValues.empty()) {
        throw Error(ErrorCode::EmptyInput, "quantile of empty data");
    }
    const double pos = q * static_cast<double>(sortedValues.size() - 1);
    const auto below = static_cast<std::size_t>(std::floor(pos));
    if (below + 1 >= sortedValues.size()) {
        return sortedValues.back();
    }
    const double frac = pos - static_cast<double>(below);
    return sortedValues[below] + frac * (sortedValues[below + 1] - sortedValues[below]);
}

double sampleStdDev(std::span<const double> values) {
    if (values.size() < 2) {
        return 0.0;
    }
    const double shift = values.front();
    double sum = 0.0;
    for (double x : values) {
        sum += x - shift;
    }
    const double mean = shift + sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double x : values) {
        ss += (x - mean) * (x - mean);
    }
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double silvermanBandwidth(const Distribution& d) {
    const double sigma = sampleStdDev(d.values());
    if (!(sigma > 0.0)) {
        throw Error(ErrorCode::DegenerateRange, "bandwidth undefined for zero spread");
    }
    const double iqr = quantile(d.values(), 0.75) - quantile(d.values(), 0.25);
    const double spread = iqr > 0.0 ? std::min(sigma, iqr / 1.34) : sigma;
    return 0.9 * spread * std::pow(static_cast<double>(d.size()), -0.2);
}

DensityEstimate kde(const Distribution& d, double bandwidth, std::size_t sampleCount) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw Error(ErrorCode::InvalidArgument, "bandwidth must be positive");
    }
    if (sampleCount < 16) {
        throw Error(ErrorCode::InvalidArgument, "KDE needs at least 16 samples");
    }
    const auto values = d.values();
    const double lo = d.min() - 3.0 * bandwidth;
    const double hi = d.max() + 3.0 * bandwidth;
    const double step = (hi - lo) / static_cast<double>(sampleCount - 1);
    const double norm = 1.0 / (static_cast<double>(values.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
    constexpr double kCutoff = 10.0;

    DensityEstimate estimate;
    estimate.bandwidth = bandwidth;
    estimate.xs.resize(sampleCount);
    estimate.ys.resize(sampleCount);
    for (std::size_t j = 0; j < sampleCount; ++j) {
        const double x = j + 1 == sampleCount ? hi : lo + step * static_cast<double>(j);
        auto first = std::lower_bound(values.begin(), values.end(), x - kCutoff * bandwidth);
        auto last = std::upper_bound(first, values.end(), x + kCutoff * bandwidth);
        double sum = 0.0;
        for (auto it = first; it != last; ++it) {
            const double z = (x - *it) / bandwidth;
            sum += std::exp(-0.5 * z * z);
        }
        estimate.xs[j] = x;
        estimate.ys[j] = sum * norm;
    }
    return estimate;
}

double trapezoid(const DensityEstimate& estimate) {
    double area = 0.0;
    for (std::size_t j = 1; j < estimate.xs.size(); ++j) {
        area += 0.5 * (estimate.ys[j] + estimate.ys[j - 1]) * (estimate.xs[j] - estimate.xs[j - 1]);
    }
    return area;
}

} // namespace accustripes
