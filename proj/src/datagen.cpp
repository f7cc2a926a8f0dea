#include "accustripes/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace accustripes {

double Rng::normal(double mean, double stddev) {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = m_Engine();
    } while (x >= limit);
    return x % bound;
}

std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Distribution genGaussian(std::size_t n, std::uint64_t seed) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidSize, "generated distributions need at least 2 points");
    }
    if (n > kMaxPoints) {
        throw Error(ErrorCode::InvalidSize, "generated base size exceeds " + std::to_string(kMaxPoints));
    }
    Rng rng(seed);
    const double mean = rng.uniform(kMeanLo, kMeanHi);
    const double sigma = rng.uniform(kSigmaLo, kSigmaHi);
    std::vector<double> values;
    values.reserve(n);
    while (values.size() < n) {
        const double x = rng.normal(mean, sigma);
        if (x >= 0.0 && x <= 1.0) {
            values.push_back(x);
        }
    }
    return makeGenerated(std::move(values), "gauss_n" + std::to_string(n) + "_s" + std::to_string(seed), seed);
}

const char* toString(FlawKind kind) noexcept {
    switch (kind) {
    case FlawKind::None: return "none";
    case FlawKind::Gap: return "gap";
    case FlawKind::Outlier: return "outlier";
    case FlawKind::Spike: return "spike";
    case FlawKind::Noise: return "noise";
    }
    return "unknown";
}

std::optional<FlawKind> parseFlawKind(std::string_view text) noexcept {
    if (text == "none") return FlawKind::None;
    if (text == "gap") return FlawKind::Gap;
    if (text == "outlier") return FlawKind::Outlier;
    if (text == "spike") return FlawKind::Spike;
    if (text == "noise") return FlawKind::Noise;
    return std::nullopt;
}

namespace {

std::string flawSuffix(const FlawSpec& flaw) {
    const auto percent = static_cast<long>(std::lround(flaw.severity * 100.0));
    return std::string("_") + toString(flaw.kind) + (percent < 10 ? "0" : "") + std::to_string(percent);
}

} // namespace

Distribution applyFlaw(const Distribution& d, const FlawSpec& flaw) {
    if (!(flaw.severity >= 0.0 && flaw.severity <= kMaxSeverity)) {
        throw Error(ErrorCode::InvalidArgument, "flaw severity must lie in [0, 0.25]");
    }
    const bool needsLocation = flaw.kind == FlawKind::Gap || flaw.kind == FlawKind::Spike;
    if (needsLocation && !(flaw.location && *flaw.location > 0.0 && *flaw.location < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, std::string(toString(flaw.kind)) + " flaw needs a location in (0, 1)");
    }
    const auto count = static_cast<std::size_t>(std::llround(flaw.severity * static_cast<double>(d.size())));
    if (flaw.kind == FlawKind::None || count == 0) {
        return d;
    }

    const auto source = d.values();
    const std::uint64_t seed = d.sourceSeed().value_or(flaw.seed);
    std::vector<double> values;
    Rng rng(flaw.seed);

    switch (flaw.kind) {
    case FlawKind::Gap: {
        if (source.size() - count < 2) {
            throw Error(ErrorCode::GapTooLarge, "gap would leave fewer than 2 points");
        }
        // The points nearest a location form a contiguous window of the sorted data.
        const double centre = *flaw.location;
        auto split = static_cast<std::size_t>(std::lower_bound(source.begin(), source.end(), centre) - source.begin());
        std::size_t left = split;
        std::size_t right = split;
        while (right - left < count) {
            if (left == 0) {
                ++right;
            } else if (right == source.size()) {
                --left;
            } else if (centre - source[left - 1] <= source[right] - centre) {
                --left;
            } else {
                ++right;
            }
        }
        values.reserve(source.size() - count);
        values.insert(values.end(), source.begin(), source.begin() + static_cast<std::ptrdiff_t>(left));
        values.insert(values.end(), source.begin() + static_cast<std::ptrdiff_t>(right), source.end());
        break;
    }
    case FlawKind::Outlier:
    case FlawKind::Spike:
    case FlawKind::Noise: {
        values.assign(source.begin(), source.end());
        values.reserve(source.size() + count);
        for (std::size_t i = 0; i < count; ++i) {
            if (flaw.kind == FlawKind::Outlier) {
                values.push_back(rng.uniform(0.95, 1.0));
            } else if (flaw.kind == FlawKind::Spike) {
                values.push_back(*flaw.location + rng.uniform(-kSpikeJitter, kSpikeJitter));
            } else {
                values.push_back(rng.uniform());
            }
        }
        break;
    }
    case FlawKind::None: break;
    }
    return makeGenerated(std::move(values), d.name() + flawSuffix(flaw), seed);
}

std::array<Distribution, 4> flawSweep(std::size_t n, FlawKind kind, std::uint64_t seed, std::optional<double> location) {
    if (kind == FlawKind::None) {
        throw Error(ErrorCode::InvalidArgument, "a flaw sweep needs a flaw kind");
    }
    const Distribution base = genGaussian(n, seed);
    auto variant = [&](double severity) {
        FlawSpec flaw;
        flaw.kind = kind;
        flaw.severity = severity;
        flaw.location = location.value_or(0.5);
        flaw.seed = seed + 1;
        return applyFlaw(base, flaw);
    };
    return {base, variant(kSweepSeverities[0]), variant(kSweepSeverities[1]), variant(kSweepSeverities[2])};
}

} // namespace accustripes
