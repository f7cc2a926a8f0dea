#include "accustripes/model.hpp"

#include <algorithm>
#include <cmath>

namespace accustripes {

const char* toString(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::TooFewValues: return "TooFewValues";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::SingleBin: return "SingleBin";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::GapTooLarge: return "GapTooLarge";
    case ErrorCode::InvalidSize: return "InvalidSize";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MismatchedInputs: return "MismatchedInputs";
    case ErrorCode::MissingDensity: return "MissingDensity";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Network: return "Network";
    }
    return "Unknown";
}

namespace {

std::vector<double> validated(std::span<const double> raw, std::size_t cap) {
    if (raw.empty()) {
        throw Error(ErrorCode::EmptyInput, "distribution has no values");
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!std::isfinite(raw[i])) {
            throw Error(ErrorCode::NonFiniteValue, "non-finite value at index " + std::to_string(i), i);
        }
    }
    if (raw.size() > cap) {
        throw Error(ErrorCode::TooLarge, "distribution has " + std::to_string(raw.size()) +
                                             " values, maximum is " + std::to_string(cap));
    }
    if (raw.size() < 2) {
        throw Error(ErrorCode::TooFewValues, "distribution needs at least 2 values");
    }
    std::vector<double> values(raw.begin(), raw.end());
    std::sort(values.begin(), values.end());
    return values;
}

} // namespace

Distribution ingest(std::span<const double> raw, std::string name) {
    return Distribution(std::move(name), validated(raw, kMaxPoints), std::nullopt);
}

Distribution makeGenerated(std::vector<double> values, std::string name, std::uint64_t seed) {
    return Distribution(std::move(name), validated(values, kMaxGeneratedPoints), seed);
}

Distribution Distribution::withName(std::string name) const {
    Distribution copy = *this;
    copy.m_Name = std::move(name);
    return copy;
}

const char* toString(BinMethod method) noexcept {
    switch (method) {
    case BinMethod::Uniform: return "uniform";
    case BinMethod::BayesianBlocks: return "bb";
    case BinMethod::NaturalBreaks: return "nb";
    }
    return "unknown";
}

std::optional<BinMethod> parseBinMethod(std::string_view text) noexcept {
    if (text == "uniform") return BinMethod::Uniform;
    if (text == "bb") return BinMethod::BayesianBlocks;
    if (text == "nb") return BinMethod::NaturalBreaks;
    return std::nullopt;
}

std::size_t assignBin(std::span<const double> edges, double x) {
    if (edges.size() < 2 || !(x >= edges.front() && x <= edges.back())) {
        throw Error(ErrorCode::OutOfRange, "value outside the partition range");
    }
    auto bins = edges.size() - 1;
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    auto index = static_cast<std::size_t>(it - edges.begin());
    // index is in [1, B+1]; x == e_B lands in B+1 and belongs to the last bin.
    return std::min(index - 1, bins - 1);
}

std::size_t assignBin(const BinPartition& partition, double x) {
    return assignBin(partition.edges, x);
}

std::vector<std::size_t> countMembers(std::span<const double> edges, std::span<const double> sortedValues) {
    std::vector<std::size_t> counts(edges.size() - 1, 0);
    // Sorted input: walk edges and values together.
    std::size_t bin = 0;
    for (double x : sortedValues) {
        if (x < edges.front() || x > edges.back()) {
            throw Error(ErrorCode::OutOfRange, "value outside the partition range");
        }
        while (bin + 1 < counts.size() && x >= edges[bin + 1]) {
            ++bin;
        }
        ++counts[bin];
    }
    return counts;
}

NormalizedRange::NormalizedRange(double lo, double hi) : m_Lo(lo), m_Hi(hi) {
    if (!(lo < hi)) {
        throw Error(ErrorCode::DegenerateRange, "normalized range needs lo < hi");
    }
}

NormalizedRange NormalizedRange::common(std::span<const Distribution> set) {
    if (set.empty()) {
        throw Error(ErrorCode::EmptyInput, "compared set is empty");
    }
    double lo = set.front().min();
    double hi = set.front().max();
    for (const auto& d : set) {
        lo = std::min(lo, d.min());
        hi = std::max(hi, d.max());
    }
    return NormalizedRange(lo, hi);
}

double NormalizedRange::toUnit(double x) const {
    if (!(x >= m_Lo && x <= m_Hi)) {
        throw Error(ErrorCode::OutOfRange, "value outside the normalized range");
    }
    return toUnitUnchecked(x);
}

double NormalizedRange::toUnitUnchecked(double x) const noexcept {
    if (x == m_Hi) {
        return 1.0;
    }
    return (x - m_Lo) / (m_Hi - m_Lo);
}

double NormalizedRange::fromUnit(double u) const noexcept {
    return m_Lo + u * (m_Hi - m_Lo);
}

} // namespace accustripes
