#include "accustripes/binning.hpp"
#include "accustripes/datagen.hpp"

#include "doctest.h"
#include "oracles/oracles.hpp"

#include <cmath>
#include <random>

using namespace accustripes;

namespace {

std::vector<double> randomValues(std::mt19937_64& rng, std::size_t n, bool withDuplicates) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> xs(n);
    for (auto& x : xs) {
        x = u(rng);
        if (withDuplicates) x = std::round(x * 6.0) / 6.0;
    }
    return xs;
}

bool strictlyIncreasing(const std::vector<double>& edges) {
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (!(edges[i - 1] < edges[i])) return false;
    }
    return true;
}

std::size_t total(const std::vector<std::size_t>& counts) {
    std::size_t s = 0;
    for (auto c : counts) s += c;
    return s;
}

} // namespace

TEST_SUITE("binning") {

TEST_CASE("sturges bin count") {
    CHECK(sturgesBinCount(2) == 2);
    CHECK(sturgesBinCount(3) == 3);
    CHECK(sturgesBinCount(4) == 3);
    CHECK(sturgesBinCount(5) == 4);
    CHECK(sturgesBinCount(1000) == 11);
    CHECK(sturgesBinCount(1024) == 11);
    CHECK(sturgesBinCount(1025) == 12);
    CHECK(sturgesBinCount(1000000) == 21);
}

TEST_CASE("uniform binning") {
    const auto d = ingest(std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0, 10.0}, "u");
    const auto p = uniformBinning(d);
    CHECK(p.method == BinMethod::Uniform);
    REQUIRE(p.binCount() == 4);
    CHECK(p.edges.front() == 0.0);
    CHECK(p.edges.back() == 10.0);
    CHECK(p.edges[1] == doctest::Approx(2.5));
    CHECK(p.counts == std::vector<std::size_t>{3, 2, 0, 1});
    CHECK(std::get<UniformInfo>(p.params).binCount == 4);
}

TEST_CASE("uniform binning rejects a single repeated value") {
    const auto d = ingest(std::vector<double>{2.0, 2.0, 2.0}, "flat");
    CHECK_THROWS_AS(uniformBinning(d), Error);
    try {
        uniformBinning(d);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateRange);
    }
}

TEST_CASE("ncp prior") {
    CHECK(ncpPrior(0.05, 1000) == doctest::Approx(4.0 - std::log(73.53 * 0.05 * std::pow(1000.0, -0.478))));
    CHECK(ncpPrior(0.05, 100) < ncpPrior(0.05, 10000));
    CHECK(ncpPrior(0.01, 100) > ncpPrior(0.1, 100));
}

TEST_CASE("block cells from distinct values") {
    const std::vector<double> xs = {0.0, 1.0, 1.0, 3.0};
    const auto cells = buildBlockCells(xs);
    CHECK_FALSE(cells.quantized);
    REQUIRE(cells.size() == 3);
    CHECK(cells.edges == std::vector<double>{0.0, 0.5, 2.0, 3.0});
    CHECK(cells.weights == std::vector<double>{1.0, 2.0, 1.0});
}

TEST_CASE("block cells quantize above the cell cap") {
    std::vector<double> xs;
    for (int i = 0; i < 1000; ++i) xs.push_back(i / 999.0);
    const auto cells = buildBlockCells(xs, 100);
    CHECK(cells.quantized);
    CHECK(cells.size() <= 100);
    double w = 0.0;
    for (double v : cells.weights) w += v;
    CHECK(w == 1000.0);
    CHECK(strictlyIncreasing(cells.edges));
    CHECK(cells.edges.front() == 0.0);
    CHECK(cells.edges.back() == 1.0);
}

TEST_CASE("optimal blocks match brute force") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + trial % 11;
        auto xs = randomValues(rng, n, trial % 3 == 0);
        std::sort(xs.begin(), xs.end());
        if (xs.front() == xs.back()) continue;
        const auto cells = buildBlockCells(xs);
        const double prior = ncpPrior(0.05, cells.size());
        const auto ref = oracle::makeCells(xs);
        const double brute = oracle::bruteForceBlocks(ref, oracle::prior(0.05, ref.count.size()));
        const auto best = optimalBlocks(cells, prior);
        CHECK(best.fitness == doctest::Approx(brute).epsilon(1e-12));
        CHECK(partitionFitness(cells, best.starts, prior) == doctest::Approx(best.fitness).epsilon(1e-12));
    }
}

TEST_CASE("pruning does not change the optimum") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto d = genGaussian(3000, seed);
        const auto cells = buildBlockCells(d.values());
        const double prior = ncpPrior(0.05, cells.size());
        const auto pruned = optimalBlocks(cells, prior, true);
        const auto full = optimalBlocks(cells, prior, false);
        CHECK(pruned.starts == full.starts);
        CHECK(pruned.fitness == doctest::Approx(full.fitness).epsilon(1e-12));
    }
}

TEST_CASE("bayesian blocks partition") {
    const auto d = genGaussian(2000, 5);
    const auto p = bayesianBlocks(d);
    CHECK(p.method == BinMethod::BayesianBlocks);
    CHECK(strictlyIncreasing(p.edges));
    CHECK(p.edges.front() == d.min());
    CHECK(p.edges.back() == d.max());
    CHECK(total(p.counts) == d.size());
    for (auto c : p.counts) CHECK(c > 0);
    const auto& info = std::get<BayesianBlocksInfo>(p.params);
    CHECK(info.p0 == 0.05);
    CHECK_FALSE(info.quantized);
    CHECK(p.binCount() >= 3);
}

TEST_CASE("bayesian blocks on large input quantizes") {
    const auto d = genGaussian(60000, 2);
    const auto p = bayesianBlocks(d);
    const auto& info = std::get<BayesianBlocksInfo>(p.params);
    CHECK(info.quantized);
    CHECK(info.cellCount <= kMaxBayesianBlocksCells);
    CHECK(total(p.counts) == d.size());
    CHECK(strictlyIncreasing(p.edges));
}

TEST_CASE("bayesian blocks p0 must lie in (0, 1)") {
    const auto d = genGaussian(100, 1);
    CHECK_THROWS_AS(bayesianBlocks(d, {0.0}), Error);
    CHECK_THROWS_AS(bayesianBlocks(d, {1.0}), Error);
}

TEST_CASE("prefix ssd equals naive") {
    std::mt19937_64 rng(3);
    auto xs = randomValues(rng, 40, true);
    std::sort(xs.begin(), xs.end());
    const auto data = WeightedValues::fromSorted(xs);
    const SsdTable table(data);
    std::vector<double> expanded;
    std::vector<std::size_t> offset{0};
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (int r = 0; r < static_cast<int>(data.weights[i]); ++r) expanded.push_back(data.values[i]);
        offset.push_back(expanded.size());
    }
    for (std::size_t b = 0; b < data.size(); ++b) {
        for (std::size_t e = b + 1; e <= data.size(); ++e) {
            CHECK(table.ssd(b, e) == doctest::Approx(oracle::naiveSsd(expanded, offset[b], offset[e])).epsilon(1e-9));
        }
    }
}

TEST_CASE("jenks matches exhaustive enumeration") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 3 + trial % 13;
        auto xs = randomValues(rng, n, false);
        std::sort(xs.begin(), xs.end());
        const auto data = WeightedValues::fromSorted(xs);
        JenksDp quad(data, JenksSolver::Quadratic);
        JenksDp dc(data, JenksSolver::DivideAndConquer);
        for (std::size_t k = 1; k <= std::min<std::size_t>(4, n); ++k) {
            const double brute = oracle::bruteForceJenks(xs, k);
            CHECK(std::fabs(quad.solve(k).ssd - brute) < 1e-9);
            CHECK(std::fabs(dc.solve(k).ssd - brute) < 1e-9);
        }
    }
}

TEST_CASE("jenks solvers agree on larger data") {
    const auto d = genGaussian(3000, 9);
    const auto data = WeightedValues::fromSorted(d.values());
    JenksDp quad(data, JenksSolver::Quadratic);
    JenksDp dc(data, JenksSolver::DivideAndConquer);
    for (std::size_t k = 2; k <= 8; ++k) {
        CHECK(quad.solve(k).ssd == doctest::Approx(dc.solve(k).ssd).epsilon(1e-12));
    }
}

TEST_CASE("gvf properties") {
    const auto d = genGaussian(200, 4);
    CHECK(gvf(d, {}) == 0.0);
    std::vector<std::size_t> all;
    for (std::size_t i = 1; i < d.size(); ++i) all.push_back(i);
    CHECK(gvf(d, all) == 1.0);
    const auto flat = ingest(std::vector<double>{1.0, 1.0}, "flat");
    CHECK_THROWS_AS(gvf(flat, {}), Error);
}

TEST_CASE("natural breaks stops at the gvf threshold") {
    const auto d = genGaussian(5000, 6);
    const auto p = jenksNaturalBreaks(d);
    const auto& info = std::get<NaturalBreaksInfo>(p.params);
    CHECK(info.kChosen == p.binCount());
    CHECK(info.gvfAchieved >= 0.9);
    CHECK(info.kChosen >= 2);
    CHECK(strictlyIncreasing(p.edges));
    CHECK(total(p.counts) == d.size());
    // one class fewer stays below the threshold
    const auto data = WeightedValues::fromSorted(d.values());
    JenksDp dp(data);
    if (info.kChosen > 2) {
        const auto prev = dp.solve(info.kChosen - 1);
        std::vector<std::size_t> starts;
        std::size_t acc = 0, item = 0;
        for (std::size_t b : prev.breaks) {
            while (item < b) acc += static_cast<std::size_t>(data.weights[item++]);
            starts.push_back(acc);
        }
        CHECK(gvf(d, starts) < 0.9);
    }
}

TEST_CASE("natural breaks respects kMax and few distinct values") {
    const auto d = ingest(std::vector<double>{0, 0, 0, 1, 1, 5, 5, 5}, "few");
    const auto p = jenksNaturalBreaks(d, {0.999999, 50});
    CHECK(p.binCount() <= 3);
    CHECK(total(p.counts) == 8);
    const auto g = genGaussian(500, 2);
    const auto capped = jenksNaturalBreaks(g, {0.99999, 4});
    CHECK(capped.binCount() == 4);
}

TEST_CASE("binDistribution dispatches") {
    const auto d = genGaussian(500, 3);
    CHECK(binDistribution(d, BinMethod::Uniform).method == BinMethod::Uniform);
    CHECK(binDistribution(d, BinMethod::BayesianBlocks).method == BinMethod::BayesianBlocks);
    CHECK(binDistribution(d, BinMethod::NaturalBreaks).method == BinMethod::NaturalBreaks);
}

TEST_CASE("affine invariance") {
    const auto d = genGaussian(1500, 8);
    const double a = 3.5, b = -2.0;
    std::vector<double> moved;
    for (double x : d.values()) moved.push_back(a * x + b);
    const auto t = ingest(moved, "t");
    for (auto m : {BinMethod::Uniform, BinMethod::BayesianBlocks, BinMethod::NaturalBreaks}) {
        const auto p = binDistribution(d, m);
        const auto q = binDistribution(t, m);
        REQUIRE(p.binCount() == q.binCount());
        CHECK(p.counts == q.counts);
        for (std::size_t i = 0; i < p.edges.size(); ++i) {
            CHECK(q.edges[i] == doctest::Approx(a * p.edges[i] + b).epsilon(1e-9));
        }
    }
}

}
