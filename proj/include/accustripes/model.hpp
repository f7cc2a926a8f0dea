#pragma once

#include "accustripes/error.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace accustripes {

//! Largest distribution accepted from outside (files, raw vectors).
inline constexpr std::size_t kMaxPoints = 100000;
//! Generated data may exceed kMaxPoints by the largest additive flaw (25%).
inline constexpr std::size_t kMaxGeneratedPoints = kMaxPoints + kMaxPoints / 4;

//! A named, sorted vector of finite values. Immutable once built.
class Distribution {
public:
    const std::string& name() const noexcept { return m_Name; }
    std::span<const double> values() const noexcept { return m_Values; }
    std::size_t size() const noexcept { return m_Values.size(); }
    double min() const noexcept { return m_Values.front(); }
    double max() const noexcept { return m_Values.back(); }
    std::optional<std::uint64_t> sourceSeed() const noexcept { return m_SourceSeed; }

    Distribution withName(std::string name) const;

    friend Distribution ingest(std::span<const double> raw, std::string name);
    friend Distribution makeGenerated(std::vector<double> values, std::string name, std::uint64_t seed);

    friend bool operator==(const Distribution&, const Distribution&) = default;

private:
    Distribution(std::string name, std::vector<double> values, std::optional<std::uint64_t> seed)
        : m_Name(std::move(name)), m_Values(std::move(values)), m_SourceSeed(seed) {}

    std::string m_Name;
    std::vector<double> m_Values;
    std::optional<std::uint64_t> m_SourceSeed;
};

//! Validates and sorts external data.
//! Throws EmptyInput, TooFewValues, NonFiniteValue (with index) or TooLarge.
Distribution ingest(std::span<const double> raw, std::string name);

//! Builds a distribution from generator output. Same checks as ingest but
//! with the kMaxGeneratedPoints cap.
Distribution makeGenerated(std::vector<double> values, std::string name, std::uint64_t seed);

enum class BinMethod { Uniform, BayesianBlocks, NaturalBreaks };

const char* toString(BinMethod method) noexcept;
//! Accepts "uniform", "bb", "nb".
std::optional<BinMethod> parseBinMethod(std::string_view text) noexcept;

struct UniformInfo {
    std::size_t binCount = 0;
    friend bool operator==(const UniformInfo&, const UniformInfo&) = default;
};

struct BayesianBlocksInfo {
    double p0 = 0.05;
    double ncpPrior = 0.0;
    //! Cells the DP ran over (distinct values, or micro-cells when quantized).
    std::size_t cellCount = 0;
    bool quantized = false;
    friend bool operator==(const BayesianBlocksInfo&, const BayesianBlocksInfo&) = default;
};

struct NaturalBreaksInfo {
    double gvfThreshold = 0.9;
    std::size_t kMax = 50;
    std::size_t kChosen = 0;
    double gvfAchieved = 0.0;
    friend bool operator==(const NaturalBreaksInfo&, const NaturalBreaksInfo&) = default;
};

using BinParams = std::variant<UniformInfo, BayesianBlocksInfo, NaturalBreaksInfo>;

//! Strictly increasing edges e_0 < ... < e_B with one count per bin.
//! Bin i is [e_i, e_{i+1}); the last bin is closed on the right.
struct BinPartition {
    BinMethod method = BinMethod::Uniform;
    std::vector<double> edges;
    std::vector<std::size_t> counts;
    BinParams params;

    std::size_t binCount() const noexcept { return counts.size(); }

    friend bool operator==(const BinPartition&, const BinPartition&) = default;
};

//! Index of the bin holding x. Throws OutOfRange outside [e_0, e_B].
std::size_t assignBin(const BinPartition& partition, double x);
std::size_t assignBin(std::span<const double> edges, double x);

//! Counts every value of the distribution with the assignBin rule.
std::vector<std::size_t> countMembers(std::span<const double> edges, std::span<const double> sortedValues);

//! Common value range of a compared set.
class NormalizedRange {
public:
    //! Throws DegenerateRange unless lo < hi.
    NormalizedRange(double lo, double hi);

    //! Min and max over all distributions of the set.
    static NormalizedRange common(std::span<const Distribution> set);

    double lo() const noexcept { return m_Lo; }
    double hi() const noexcept { return m_Hi; }

    //! (x - lo) / (hi - lo); throws OutOfRange outside [lo, hi].
    double toUnit(double x) const;
    //! Same mapping without the range check.
    double toUnitUnchecked(double x) const noexcept;
    double fromUnit(double u) const noexcept;

    friend bool operator==(const NormalizedRange&, const NormalizedRange&) = default;

private:
    double m_Lo;
    double m_Hi;
};

struct DensityEstimate {
    std::vector<double> xs;
    std::vector<double> ys;
    double bandwidth = 0.0;
};

} // namespace accustripes
