#include "accustripes/evalmetrics.hpp"

#include "accustripes/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace accustripes {

double silhouette(std::span<const double> sortedValues, std::span<const double> edges) {
    const std::vector<std::size_t> counts = countMembers(edges, sortedValues);

    struct Block {
        std::size_t begin, end;
        double mean;
    };
    const std::size_t n = sortedValues.size();
    const double origin = n > 0 ? sortedValues.front() : 0.0;
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + (sortedValues[i] - origin);
    }

    std::vector<Block> blocks;
    std::size_t begin = 0;
    for (std::size_t count : counts) {
        if (count > 0) {
            const double mean = origin + (prefix[begin + count] - prefix[begin]) / static_cast<double>(count);
            blocks.push_back({begin, begin + count, mean});
        }
        begin += count;
    }
    if (blocks.size() < 2) {
        throw Error(ErrorCode::SingleBin, "silhouette needs at least two non-empty bins");
    }

    double total = 0.0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const Block& own = blocks[b];
        const std::size_t size = own.end - own.begin;
        if (size == 1) {
            continue;
        }
        for (std::size_t i = own.begin; i < own.end; ++i) {
            const double x = sortedValues[i] - origin;
            const double below = static_cast<double>(i - own.begin) * x - (prefix[i] - prefix[own.begin]);
            const double above = (prefix[own.end] - prefix[i + 1]) - static_cast<double>(own.end - i - 1) * x;
            const double a = (below + above) / static_cast<double>(size - 1);
            // nearest other bin is adjacent
            double nearest = std::numeric_limits<double>::infinity();
            if (b > 0) {
                nearest = std::min(nearest, std::fabs(sortedValues[i] - blocks[b - 1].mean));
            }
            if (b + 1 < blocks.size()) {
                nearest = std::min(nearest, std::fabs(sortedValues[i] - blocks[b + 1].mean));
            }
            const double scale = std::max(a, nearest);
            if (scale > 0.0) {
                total += (nearest - a) / scale;
            }
        }
    }
    return total / static_cast<double>(n);
}

double silhouette(const Distribution& d, const BinPartition& p) {
    return silhouette(d.values(), p.edges);
}

//////// ANOVA ////////

namespace {

//! Continued fraction for the incomplete beta (modified Lentz).
double betaContinuedFraction(double a, double b, double x) {
    constexpr int kMaxIterations = 10000;
    constexpr double kTolerance = 1e-10;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kTolerance) {
            break;
        }
    }
    return h;
}

} // namespace

double regularizedIncompleteBeta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "incomplete beta needs a, b > 0");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double logFront =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(logFront);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betaContinuedFraction(a, b, x) / a;
    }
    return 1.0 - front * betaContinuedFraction(b, a, 1.0 - x) / b;
}

double fSurvival(double f, double d1, double d2) {
    if (!(f > 0.0)) return 1.0;
    if (std::isinf(f)) return 0.0;
    return regularizedIncompleteBeta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * f));
}

AnovaResult oneWayAnova(std::span<const std::vector<double>> groups) {
    if (groups.size() < 2) {
        throw Error(ErrorCode::InsufficientData, "ANOVA needs at least two groups");
    }
    std::size_t total = 0;
    double grandSum = 0.0;
    for (const auto& g : groups) {
        if (g.size() < 2) {
            throw Error(ErrorCode::InsufficientData, "every ANOVA group needs at least two values");
        }
        total += g.size();
        for (double v : g) grandSum += v;
    }
    const double groupCount = static_cast<double>(groups.size());
    if (total <= groups.size()) {
        throw Error(ErrorCode::InsufficientData, "no within-group degrees of freedom");
    }
    const double grandMean = grandSum / static_cast<double>(total);

    double between = 0.0;
    double within = 0.0;
    for (const auto& g : groups) {
        double sum = 0.0;
        for (double v : g) sum += v;
        const double mean = sum / static_cast<double>(g.size());
        between += static_cast<double>(g.size()) * (mean - grandMean) * (mean - grandMean);
        for (double v : g) within += (v - mean) * (v - mean);
    }
    const double d1 = groupCount - 1.0;
    const double d2 = static_cast<double>(total) - groupCount;

    AnovaResult result;
    if (within <= 0.0) {
        result.degenerate = true;
        if (between > 0.0) {
            result.fStatistic = std::numeric_limits<double>::infinity();
            result.pValue = 0.0;
        }
        return result;
    }
    result.fStatistic = (between / d1) / (within / d2);
    result.pValue = fSurvival(result.fStatistic, d1, d2);
    return result;
}

//////// Evaluation protocol ////////

namespace {

constexpr std::array<FlawKind, 4> kCaseKinds = {FlawKind::None, FlawKind::Gap, FlawKind::Outlier, FlawKind::Spike};

double meanOf(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double sampleVariance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double mean = meanOf(v);
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

} // namespace

Distribution evalDistribution(std::size_t size, std::size_t index, std::uint64_t seed, EvalCase* description) {
    const std::uint64_t caseSeed = mixSeed(seed, static_cast<std::uint64_t>(size) * 1000003ULL + index);
    const Distribution base = genGaussian(size, caseSeed);

    FlawSpec flaw;
    flaw.kind = kCaseKinds[index % kCaseKinds.size()];
    flaw.severity = flaw.kind == FlawKind::None ? 0.0 : kSweepSeverities[(index / kCaseKinds.size()) % kSweepSeverities.size()];
    Rng locationRng(mixSeed(caseSeed, 7));
    flaw.location = locationRng.uniform(kMeanLo, kMeanHi);
    flaw.seed = mixSeed(caseSeed, 1);
    Distribution result = applyFlaw(base, flaw);

    if (description) {
        *description = EvalCase{size, toString(flaw.kind), flaw.severity, caseSeed, result.size()};
    }
    return result;
}

std::vector<double> subsample(std::span<const double> sortedValues, std::size_t count, std::uint64_t seed) {
    if (count >= sortedValues.size()) {
        return {sortedValues.begin(), sortedValues.end()};
    }
    // Partial Fisher-Yates over indices.
    std::vector<std::size_t> index(sortedValues.size());
    for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(index.size() - i));
        std::swap(index[i], index[j]);
    }
    index.resize(count);
    std::sort(index.begin(), index.end());
    std::vector<double> result;
    result.reserve(count);
    for (std::size_t i : index) result.push_back(sortedValues[i]);
    return result;
}

EvalReport runEvaluation(const EvalProtocol& protocol) {
    if (protocol.sizes.empty() || protocol.perSize == 0) {
        throw Error(ErrorCode::InvalidArgument, "evaluation needs at least one size and one distribution per size");
    }
    constexpr std::array<BinMethod, 3> kMethods = {BinMethod::Uniform, BinMethod::BayesianBlocks, BinMethod::NaturalBreaks};

    EvalReport report;
    report.protocol = protocol;
    for (BinMethod method : kMethods) {
        report.perMethod[method] = {};
    }
    for (std::size_t size : protocol.sizes) {
        for (std::size_t index = 0; index < protocol.perSize; ++index) {
            EvalCase description;
            const Distribution d = evalDistribution(size, index, protocol.seed, &description);
            report.cases.push_back(description);

            std::vector<double> scored;
            if (size > protocol.silhouetteSubsample) {
                scored = subsample(d.values(), protocol.silhouetteSubsample, mixSeed(description.seed, 11));
            } else {
                scored.assign(d.values().begin(), d.values().end());
            }
            for (BinMethod method : kMethods) {
                const BinPartition partition = binDistribution(d, method);
                report.perMethod[method].perDistribution.push_back(silhouette(scored, partition.edges));
            }
        }
    }

    std::vector<std::vector<double>> groups;
    for (BinMethod method : kMethods) {
        auto& summary = report.perMethod[method];
        summary.meanSilhouette = meanOf(summary.perDistribution);
        summary.variance = sampleVariance(summary.perDistribution);
        groups.push_back(summary.perDistribution);
    }
    report.anova = oneWayAnova(groups);
    return report;
}

std::string formatReportTable(const EvalReport& report) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %12s %12s %8s\n", "method", "silhouette", "variance", "count");
    out << line;
    for (const auto& [method, summary] : report.perMethod) {
        std::snprintf(line, sizeof line, "%-10s %12.4f %12.4f %8zu\n", toString(method), summary.meanSilhouette,
                      summary.variance, summary.perDistribution.size());
        out << line;
    }
    std::snprintf(line, sizeof line, "ANOVA: F = %.4f, p = %.4g%s\n", report.anova.fStatistic, report.anova.pValue,
                  report.anova.degenerate ? " (degenerate)" : "");
    out << line;
    return out.str();
}

} // namespace accustripes
