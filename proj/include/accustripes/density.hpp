#pragma once

#include "accustripes/model.hpp"

#include <cstddef>

namespace accustripes {

inline constexpr std::size_t kDefaultKdeSamples = 512;

//! Linear-interpolation quantile (type 7) of sorted values, q in [0, 1].
double quantile(std::span<const double> sortedValues, double q);

//! Sample standard deviation (n - 1 denominator).
double sampleStdDev(std::span<const double> values);

//! 0.9 * min(sigma, IQR / 1.34) * n^(-1/5), sigma-only when the IQR is zero.
//! Throws DegenerateRange when sigma is zero.
double silvermanBandwidth(const Distribution& d);

//! Gaussian KDE on sampleCount equally spaced points over
//! [min - 3h, max + 3h]. Needs h > 0 and sampleCount >= 16.
DensityEstimate kde(const Distribution& d, double bandwidth, std::size_t sampleCount = kDefaultKdeSamples);

//! Trapezoidal integral of ys over xs.
double trapezoid(const DensityEstimate& estimate);

} // namespace accustripes
