#pragma once

#include "accustripes/binning.hpp"
#include "accustripes/model.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace accustripes {

//! Mean silhouette of the points when each non-empty bin is a cluster.
//! Singleton bins contribute 0. Throws SingleBin with fewer than two
//! non-empty bins.
double silhouette(const Distribution& d, const BinPartition& p);
//! Same, for any sorted sample lying inside the partition range.
double silhouette(std::span<const double> sortedValues, std::span<const double> edges);

struct AnovaResult {
    double fStatistic = 0.0;
    double pValue = 1.0;
    //! Set when the within-group sum of squares is zero.
    bool degenerate = false;
};

//! Regularized incomplete beta I_x(a, b).
double regularizedIncompleteBeta(double a, double b, double x);

//! P(F > f) for F(d1, d2).
double fSurvival(double f, double d1, double d2);

//! Classic one-way ANOVA. Throws InsufficientData with fewer than two groups,
//! a group under two values, or no within-group degrees of freedom.
AnovaResult oneWayAnova(std::span<const std::vector<double>> groups);

struct MethodSummary {
    double meanSilhouette = 0.0;
    double variance = 0.0;
    std::vector<double> perDistribution;
};

inline constexpr std::size_t kSilhouetteSubsample = 10000;

struct EvalProtocol {
    std::vector<std::size_t> sizes = {1000, 10000, 100000};
    std::size_t perSize = 24;
    std::uint64_t seed = 1;
    //! Samples above this size are scored on a seeded subsample of this many points.
    std::size_t silhouetteSubsample = kSilhouetteSubsample;
};

//! Description of one generated evaluation distribution.
struct EvalCase {
    std::size_t size = 0;
    std::string flaw;
    double severity = 0.0;
    std::uint64_t seed = 0;
    std::size_t points = 0;
};

struct EvalReport {
    std::map<BinMethod, MethodSummary> perMethod;
    AnovaResult anova;
    EvalProtocol protocol;
    std::vector<EvalCase> cases;
};

//! Builds the flawed Gaussian for case index i of a size category.
Distribution evalDistribution(std::size_t size, std::size_t index, std::uint64_t seed, EvalCase* description = nullptr);

//! Seeded uniform subsample without replacement, returned sorted.
std::vector<double> subsample(std::span<const double> sortedValues, std::size_t count, std::uint64_t seed);

EvalReport runEvaluation(const EvalProtocol& protocol);

//! Aligned plain-text summary table.
std::string formatReportTable(const EvalReport& report);

} // namespace accustripes
