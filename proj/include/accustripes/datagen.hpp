#pragma once

#include "accustripes/model.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

namespace accustripes {

//! Reproducible random source: std::mt19937_64 (constants fixed by the C++
//! standard) with explicit transforms, so identical seeds give identical bits
//! on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : m_Engine(seed) {}

    //! Top 53 bits scaled into [0, 1).
    double uniform() { return static_cast<double>(m_Engine() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    //! Box-Muller, cosine branch only: one normal per two uniforms.
    double normal(double mean, double stddev);
    //! Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 m_Engine;
};

//! SplitMix64 finalizer, used to derive independent child seeds.
std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t stream) noexcept;

//! Parameters drawn for a generated Gaussian base.
inline constexpr double kMeanLo = 0.35;
inline constexpr double kMeanHi = 0.65;
inline constexpr double kSigmaLo = 0.08;
inline constexpr double kSigmaHi = 0.15;

//! n points from Normal(mu, sigma), mu ~ U[0.35, 0.65], sigma ~ U[0.08, 0.15],
//! rejection-sampled into [0, 1]. Throws InvalidSize for n < 2.
Distribution genGaussian(std::size_t n, std::uint64_t seed);

enum class FlawKind { None, Gap, Outlier, Spike, Noise };

const char* toString(FlawKind kind) noexcept;
std::optional<FlawKind> parseFlawKind(std::string_view text) noexcept;

inline constexpr double kMaxSeverity = 0.25;
inline constexpr double kSpikeJitter = 1e-6;

struct FlawSpec {
    FlawKind kind = FlawKind::None;
    //! Fraction of the input point count, in [0, 0.25].
    double severity = 0.0;
    //! Gap centre or spike value in the unit workspace; required for both.
    std::optional<double> location;
    std::uint64_t seed = 0;
};

//! Injects one flaw and re-sorts. Gap removes the round(severity * n) points
//! nearest the location; Outlier adds them uniform in [0.95, 1]; Spike adds
//! them at the location with +-1e-6 jitter; Noise adds them uniform in [0, 1].
Distribution applyFlaw(const Distribution& d, const FlawSpec& flaw);

inline constexpr std::array<double, 3> kSweepSeverities = {0.05, 0.15, 0.25};

//! Base Gaussian followed by the same base with 5%, 15% and 25% flaws.
std::array<Distribution, 4> flawSweep(std::size_t n, FlawKind kind, std::uint64_t seed,
                                      std::optional<double> location = std::nullopt);

} // namespace accustripes
