#pragma once

#include "accustripes/model.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace accustripes {

//! ceil(log2(n)) + 1.
std::size_t sturgesBinCount(std::size_t n);

//! Sturges-count equal-width bins over [min, max].
BinPartition uniformBinning(const Distribution& d);

//! Above this many distinct values Bayesian Blocks runs on uniform micro-cells.
inline constexpr std::size_t kMaxBayesianBlocksCells = 20000;

struct BBParams {
    double p0 = 0.05;
};

//! Block-count prior for the given number of cells.
double ncpPrior(double p0, std::size_t cellCount);

//! Weighted cells the Bayesian Blocks DP works on. Cell j spans
//! [edges[j], edges[j+1]] and holds weights[j] points.
struct BlockCells {
    std::vector<double> edges;
    std::vector<double> weights;
    bool quantized = false;

    std::size_t size() const noexcept { return weights.size(); }
};

//! Distinct values become cells bounded by the midpoints between neighbours;
//! duplicates add weight. Above maxCells distinct values the range is cut into
//! maxCells uniform micro-cells, each represented by the mean of its points.
BlockCells buildBlockCells(std::span<const double> sortedValues, std::size_t maxCells = kMaxBayesianBlocksCells);

//! N (ln N - ln T) for a block of N points and width T.
double blockFitness(double count, double width);

//! Sum of block fitnesses minus blocks * prior for blocks starting at the
//! given cell indices (starts[0] must be 0).
double partitionFitness(const BlockCells& cells, std::span<const std::size_t> starts, double prior);

struct BlockSolution {
    //! First cell of each block, ascending, starting with 0.
    std::vector<std::size_t> starts;
    double fitness = 0.0;
};

//! Globally optimal block partition. With prune set, candidates that can no
//! longer start the last block are dropped; the optimum is unchanged.
BlockSolution optimalBlocks(const BlockCells& cells, double prior, bool prune = true);

BinPartition bayesianBlocks(const Distribution& d, const BBParams& params = {});

struct NBParams {
    double gvfThreshold = 0.9;
    std::size_t kMax = 50;
};

//! Distinct values with multiplicities, the unit the Jenks DP partitions.
struct WeightedValues {
    std::vector<double> values;
    std::vector<double> weights;

    static WeightedValues fromSorted(std::span<const double> sortedValues);
    std::size_t size() const noexcept { return values.size(); }
};

//! Prefix sums for O(1) within-class squared deviations. Values are shifted by
//! the first value to limit cancellation.
class SsdTable {
public:
    explicit SsdTable(const WeightedValues& data);

    //! Weighted sum of squared deviations from the mean over items [begin, end).
    double ssd(std::size_t begin, std::size_t end) const noexcept;
    std::size_t size() const noexcept { return m_W.size() - 1; }

private:
    std::vector<double> m_W;
    std::vector<double> m_S1;
    std::vector<double> m_S2;
};

enum class JenksSolver { Quadratic, DivideAndConquer };

struct ClassSolution {
    //! Start index (into the weighted items) of classes 2..k, ascending.
    std::vector<std::size_t> breaks;
    double ssd = 0.0;
};

//! Incremental DP: solve(k) returns the minimum-SSD k-class split, reusing rows
//! computed for smaller k.
class JenksDp {
public:
    JenksDp(const WeightedValues& data, JenksSolver solver = JenksSolver::DivideAndConquer);

    ClassSolution solve(std::size_t k);
    const SsdTable& table() const noexcept { return m_Table; }

private:
    void addRow();

    SsdTable m_Table;
    JenksSolver m_Solver;
    // m_Cost[c][j]: minimum SSD of items [0, j] in c+1 classes.
    std::vector<std::vector<double>> m_Cost;
    std::vector<std::vector<std::size_t>> m_Split;
};

//! Goodness of variance fit for a contiguous class split of sorted values.
//! classStarts holds the index of the first value of classes 2..k.
//! Throws DegenerateRange when all values are equal.
double gvf(const Distribution& d, std::span<const std::size_t> classStarts);
double gvf(std::span<const double> sortedValues, std::span<const std::size_t> classStarts);

BinPartition jenksNaturalBreaks(const Distribution& d, const NBParams& params = {});

struct BinningOptions {
    BBParams bb;
    NBParams nb;
};

BinPartition binDistribution(const Distribution& d, BinMethod method, const BinningOptions& options = {});

} // namespace accustripes
