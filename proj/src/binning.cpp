#include "accustripes/binning.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace accustripes {

std::size_t sturgesBinCount(std::size_t n) {
    if (n == 0) {
        throw Error(ErrorCode::InvalidSize, "Sturges rule needs n >= 1");
    }
    // ceil(log2(n)) == bit_width(n - 1)
    return static_cast<std::size_t>(std::bit_width(n - 1)) + 1;
}

namespace {

void requireSpread(const Distribution& d) {
    if (!(d.min() < d.max())) {
        throw Error(ErrorCode::DegenerateRange, "all values of '" + d.name() + "' are identical");
    }
}

void requireIncreasing(const std::vector<double>& edges) {
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (!(edges[i - 1] < edges[i])) {
            throw Error(ErrorCode::DegenerateRange, "value range too narrow to separate bin edges");
        }
    }
}

} // namespace

BinPartition uniformBinning(const Distribution& d) {
    requireSpread(d);
    const std::size_t bins = sturgesBinCount(d.size());
    const double lo = d.min();
    const double hi = d.max();
    std::vector<double> edges(bins + 1);
    for (std::size_t i = 0; i < bins; ++i) {
        edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    }
    edges[bins] = hi;
    requireIncreasing(edges);

    BinPartition result;
    result.method = BinMethod::Uniform;
    result.counts = countMembers(edges, d.values());
    result.edges = std::move(edges);
    result.params = UniformInfo{bins};
    return result;
}

//////// Bayesian Blocks ////////

double ncpPrior(double p0, std::size_t cellCount) {
    return 4.0 - std::log(73.53 * p0 * std::pow(static_cast<double>(cellCount), -0.478));
}

BlockCells buildBlockCells(std::span<const double> sortedValues, std::size_t maxCells) {
    BlockCells cells;
    if (sortedValues.empty()) {
        return cells;
    }
    std::vector<double> reps;
    std::vector<double> weights;
    for (std::size_t i = 0; i < sortedValues.size();) {
        std::size_t j = i;
        while (j < sortedValues.size() && sortedValues[j] == sortedValues[i]) {
            ++j;
        }
        reps.push_back(sortedValues[i]);
        weights.push_back(static_cast<double>(j - i));
        i = j;
    }

    if (reps.size() > maxCells && maxCells >= 2) {
        const double lo = sortedValues.front();
        const double hi = sortedValues.back();
        std::vector<double> sums(maxCells, 0.0);
        std::vector<double> counts(maxCells, 0.0);
        const double scale = static_cast<double>(maxCells) / (hi - lo);
        for (double x : sortedValues) {
            auto cell = static_cast<std::size_t>((x - lo) * scale);
            cell = std::min(cell, maxCells - 1);
            sums[cell] += x;
            counts[cell] += 1.0;
        }
        reps.clear();
        weights.clear();
        for (std::size_t c = 0; c < maxCells; ++c) {
            if (counts[c] > 0.0) {
                reps.push_back(sums[c] / counts[c]);
                weights.push_back(counts[c]);
            }
        }
        cells.quantized = true;
    }

    cells.edges.reserve(reps.size() + 1);
    cells.edges.push_back(sortedValues.front());
    for (std::size_t j = 1; j < reps.size(); ++j) {
        cells.edges.push_back(0.5 * (reps[j - 1] + reps[j]));
    }
    cells.edges.push_back(sortedValues.back());
    cells.weights = std::move(weights);
    return cells;
}

double blockFitness(double count, double width) {
    return count * (std::log(count) - std::log(width));
}

double partitionFitness(const BlockCells& cells, std::span<const std::size_t> starts, double prior) {
    double total = 0.0;
    for (std::size_t b = 0; b < starts.size(); ++b) {
        const std::size_t first = starts[b];
        const std::size_t end = b + 1 < starts.size() ? starts[b + 1] : cells.size();
        double count = 0.0;
        for (std::size_t j = first; j < end; ++j) {
            count += cells.weights[j];
        }
        total += blockFitness(count, cells.edges[end] - cells.edges[first]) - prior;
    }
    return total;
}

BlockSolution optimalBlocks(const BlockCells& cells, double prior, bool prune) {
    const std::size_t n = cells.size();
    BlockSolution solution;
    if (n == 0) {
        return solution;
    }

    std::vector<double> cumWeight(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        cumWeight[j + 1] = cumWeight[j] + cells.weights[j];
    }

    // best[r]: optimal fitness of cells [0, r]; last[r]: first cell of its final block.
    std::vector<double> best(n);
    std::vector<std::size_t> last(n);
    std::vector<std::size_t> candidates;
    std::vector<double> scores;
    candidates.reserve(n);
    scores.reserve(n);

    for (std::size_t r = 0; r < n; ++r) {
        candidates.push_back(r);
        const double right = cells.edges[r + 1];
        const double totalRight = cumWeight[r + 1];
        scores.resize(candidates.size());

        double bestScore = -std::numeric_limits<double>::infinity();
        std::size_t bestStart = 0;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const std::size_t i = candidates[c];
            const double before = i > 0 ? best[i - 1] : 0.0;
            const double score = before + blockFitness(totalRight - cumWeight[i], right - cells.edges[i]);
            scores[c] = score;
            if (score - prior > bestScore) {
                bestScore = score - prior;
                bestStart = i;
            }
        }
        best[r] = bestScore;
        last[r] = bestStart;

        if (prune) {
            // prune
            const double margin = 1e-9 * (1.0 + std::fabs(bestScore));
            std::size_t kept = 0;
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                if (scores[c] >= bestScore - margin) {
                    candidates[kept++] = candidates[c];
                }
            }
            candidates.resize(kept);
        }
    }

    for (std::size_t end = n; end > 0;) {
        const std::size_t start = last[end - 1];
        solution.starts.push_back(start);
        end = start;
    }
    std::reverse(solution.starts.begin(), solution.starts.end());
    solution.fitness = best[n - 1];
    return solution;
}

BinPartition bayesianBlocks(const Distribution& d, const BBParams& params) {
    if (!(params.p0 > 0.0 && params.p0 < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "p0 must lie in (0, 1)");
    }
    requireSpread(d);

    const BlockCells cells = buildBlockCells(d.values());
    const double prior = ncpPrior(params.p0, cells.size());
    const BlockSolution solution = optimalBlocks(cells, prior);

    std::vector<double> edges;
    edges.reserve(solution.starts.size() + 1);
    for (std::size_t start : solution.starts) {
        edges.push_back(cells.edges[start]);
    }
    edges.push_back(cells.edges.back());
    requireIncreasing(edges);

    BinPartition result;
    result.method = BinMethod::BayesianBlocks;
    result.counts = countMembers(edges, d.values());
    result.edges = std::move(edges);
    result.params = BayesianBlocksInfo{params.p0, prior, cells.size(), cells.quantized};
    return result;
}

//////// Jenks natural breaks ////////

WeightedValues WeightedValues::fromSorted(std::span<const double> sortedValues) {
    WeightedValues result;
    for (std::size_t i = 0; i < sortedValues.size();) {
        std::size_t j = i;
        while (j < sortedValues.size() && sortedValues[j] == sortedValues[i]) {
            ++j;
        }
        result.values.push_back(sortedValues[i]);
        result.weights.push_back(static_cast<double>(j - i));
        i = j;
    }
    return result;
}

SsdTable::SsdTable(const WeightedValues& data)
    : m_W(data.size() + 1, 0.0), m_S1(data.size() + 1, 0.0), m_S2(data.size() + 1, 0.0) {
    const double shift = data.size() > 0 ? data.values.front() : 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double w = data.weights[i];
        const double x = data.values[i] - shift;
        m_W[i + 1] = m_W[i] + w;
        m_S1[i + 1] = m_S1[i] + w * x;
        m_S2[i + 1] = m_S2[i] + w * x * x;
    }
}

double SsdTable::ssd(std::size_t begin, std::size_t end) const noexcept {
    const double w = m_W[end] - m_W[begin];
    if (end - begin <= 1 || w <= 0.0) {
        return 0.0;
    }
    const double s1 = m_S1[end] - m_S1[begin];
    const double s2 = m_S2[end] - m_S2[begin];
    return std::max(0.0, s2 - s1 * s1 / w);
}

JenksDp::JenksDp(const WeightedValues& data, JenksSolver solver) : m_Table(data), m_Solver(solver) {}

void JenksDp::addRow() {
    const std::size_t n = m_Table.size();
    const std::size_t c = m_Cost.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> cost(n, inf);
    std::vector<std::size_t> split(n, 0);

    if (c == 0) {
        for (std::size_t j = 0; j < n; ++j) {
            cost[j] = m_Table.ssd(0, j + 1);
        }
    } else {
        const auto& prev = m_Cost.back();
        auto evaluate = [&](std::size_t j, std::size_t lo, std::size_t hi) {
            // Last class starts at i in [lo, hi]; items [0, i) hold c classes.
            double bestCost = inf;
            std::size_t bestStart = lo;
            for (std::size_t i = lo; i <= hi; ++i) {
                const double value = prev[i - 1] + m_Table.ssd(i, j + 1);
                if (value < bestCost) {
                    bestCost = value;
                    bestStart = i;
                }
            }
            cost[j] = bestCost;
            split[j] = bestStart;
        };

        if (m_Solver == JenksSolver::Quadratic) {
            for (std::size_t j = c; j < n; ++j) {
                evaluate(j, c, j);
            }
        } else {
            struct Task {
                std::size_t jLo, jHi, iLo, iHi;
            };
            std::vector<Task> stack;
            if (c < n) {
                stack.push_back({c, n - 1, c, n - 1});
            }
            while (!stack.empty()) {
                const Task task = stack.back();
                stack.pop_back();
                const std::size_t j = task.jLo + (task.jHi - task.jLo) / 2;
                evaluate(j, task.iLo, std::min(j, task.iHi));
                const std::size_t opt = split[j];
                if (j > task.jLo) {
                    stack.push_back({task.jLo, j - 1, task.iLo, opt});
                }
                if (j < task.jHi) {
                    stack.push_back({j + 1, task.jHi, opt, task.iHi});
                }
            }
        }
    }
    m_Cost.push_back(std::move(cost));
    m_Split.push_back(std::move(split));
}

ClassSolution JenksDp::solve(std::size_t k) {
    const std::size_t n = m_Table.size();
    if (k == 0 || k > n) {
        throw Error(ErrorCode::InvalidArgument, "class count must lie in [1, distinct values]");
    }
    while (m_Cost.size() < k) {
        addRow();
    }
    ClassSolution solution;
    solution.ssd = m_Cost[k - 1][n - 1];
    std::size_t j = n - 1;
    for (std::size_t c = k - 1; c > 0; --c) {
        const std::size_t start = m_Split[c][j];
        solution.breaks.push_back(start);
        j = start - 1;
    }
    std::reverse(solution.breaks.begin(), solution.breaks.end());
    return solution;
}

namespace {

//! Two-pass squared deviations, shifted by the first value.
double twoPassSsd(std::span<const double> values) {
    if (values.size() <= 1) {
        return 0.0;
    }
    const double shift = values.front();
    double sum = 0.0;
    for (double x : values) {
        sum += x - shift;
    }
    const double mean = shift + sum / static_cast<double>(values.size());
    double ssd = 0.0;
    for (double x : values) {
        const double dev = x - mean;
        ssd += dev * dev;
    }
    return ssd;
}

} // namespace

double gvf(std::span<const double> sortedValues, std::span<const std::size_t> classStarts) {
    const double sdam = twoPassSsd(sortedValues);
    if (!(sdam > 0.0)) {
        throw Error(ErrorCode::DegenerateRange, "GVF undefined when all values are equal");
    }
    double sdcm = 0.0;
    std::size_t begin = 0;
    for (std::size_t b = 0; b <= classStarts.size(); ++b) {
        const std::size_t end = b < classStarts.size() ? classStarts[b] : sortedValues.size();
        if (end <= begin || end > sortedValues.size()) {
            throw Error(ErrorCode::InvalidArgument, "class starts must be strictly increasing inside the data");
        }
        sdcm += twoPassSsd(sortedValues.subspan(begin, end - begin));
        begin = end;
    }
    return (sdam - sdcm) / sdam;
}

double gvf(const Distribution& d, std::span<const std::size_t> classStarts) {
    return gvf(d.values(), classStarts);
}

BinPartition jenksNaturalBreaks(const Distribution& d, const NBParams& params) {
    if (!(params.gvfThreshold > 0.0 && params.gvfThreshold <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "GVF threshold must lie in (0, 1]");
    }
    if (params.kMax < 2) {
        throw Error(ErrorCode::InvalidArgument, "k-max must be at least 2");
    }
    requireSpread(d);

    const WeightedValues items = WeightedValues::fromSorted(d.values());
    std::vector<std::size_t> itemStart(items.size() + 1, 0);
    for (std::size_t i = 0; i < items.size(); ++i) {
        itemStart[i + 1] = itemStart[i] + static_cast<std::size_t>(items.weights[i]);
    }

    JenksDp dp(items);
    const std::size_t kLimit = std::min(params.kMax, items.size());
    ClassSolution chosen;
    std::size_t kChosen = 0;
    double achieved = 0.0;
    for (std::size_t k = 2; k <= kLimit; ++k) {
        chosen = dp.solve(k);
        std::vector<std::size_t> starts;
        starts.reserve(chosen.breaks.size());
        for (std::size_t b : chosen.breaks) {
            starts.push_back(itemStart[b]);
        }
        achieved = gvf(d, starts);
        kChosen = k;
        if (achieved >= params.gvfThreshold) {
            break;
        }
    }

    std::vector<double> edges;
    edges.reserve(chosen.breaks.size() + 2);
    edges.push_back(d.min());
    for (std::size_t b : chosen.breaks) {
        edges.push_back(0.5 * (items.values[b - 1] + items.values[b]));
    }
    edges.push_back(d.max());
    requireIncreasing(edges);

    BinPartition result;
    result.method = BinMethod::NaturalBreaks;
    result.counts = countMembers(edges, d.values());
    result.edges = std::move(edges);
    result.params = NaturalBreaksInfo{params.gvfThreshold, params.kMax, kChosen, achieved};
    return result;
}

BinPartition binDistribution(const Distribution& d, BinMethod method, const BinningOptions& options) {
    switch (method) {
    case BinMethod::Uniform: return uniformBinning(d);
    case BinMethod::BayesianBlocks: return bayesianBlocks(d, options.bb);
    case BinMethod::NaturalBreaks: return jenksNaturalBreaks(d, options.nb);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown binning method");
}

} // namespace accustripes
