// The OpenMP kernels must agree exactly with their serial references.

#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "sweat/association.hpp"
#include "sweat/kernels.hpp"

using namespace sweat;
using namespace sweat::kernels;
using namespace sweat::testing;

namespace {

RowsView view(const EmbeddingSpace& s) { return {s.data(), s.norms(), s.dimension()}; }

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

} // namespace

TEST(Binomial, KnownValuesAndSaturation) {
    EXPECT_EQ(binomial(12, 6), 924u);
    EXPECT_EQ(binomial(24, 12), 2'704'156u);
    EXPECT_EQ(binomial(5, 7), 0u);
    EXPECT_EQ(binomial(0, 0), 1u);
    EXPECT_EQ(binomial(200, 100), std::numeric_limits<std::uint64_t>::max());
}

TEST(NearestRow, ParallelMatchesSerial) {
    auto s = random_space("r", 2000, 16, 9);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 50; ++t) {
        auto q = gaussian_vector(rng, 16);
        const auto ref = nearest_row_serial(view(s), s.words(), q);
        for (int threads : {1, 2, 3, 8}) EXPECT_EQ(nearest_row_parallel(view(s), s.words(), q, threads), ref);
    }
}

TEST(NearestRow, TieBreakIndependentOfThreadSplit) {
    // many identical rows spread across thread chunks; "a" sorts first but sits last
    std::vector<Row> rows;
    for (int i = 0; i < 97; ++i) rows.push_back({"z" + std::to_string(i), {1.0, 0.0}});
    rows.push_back({"a", {3.0, 0.0}});
    auto s = make_space("t", rows);
    const std::vector<double> q{1.0, 0.0};
    EXPECT_EQ(s.word(nearest_row_serial(view(s), s.words(), q)), "a");
    for (int threads : {1, 2, 5, 16}) EXPECT_EQ(s.word(nearest_row_parallel(view(s), s.words(), q, threads)), "a");
}

TEST(CountExact, ParallelMatchesSerial) {
    std::mt19937_64 rng(2);
    for (std::size_t n : {1u, 2u, 3u, 5u, 7u, 9u}) {
        auto pooled = random_values(rng, 2 * n);
        double obs = 0;
        for (std::size_t i = 0; i < n; ++i) obs += pooled[i] - pooled[n + i];
        PartitionProblem p{pooled, n, obs, 1e-12};
        const auto ref = count_exact_serial(p);
        EXPECT_EQ(ref.total, binomial(2 * n, n));
        for (int threads : {1, 2, 4, 7}) EXPECT_EQ(count_exact_parallel(p, threads), ref) << "n=" << n;
    }
}

TEST(CountExact, MatchesBitmaskOracle) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + trial % 7;
        auto x = random_values(rng, n);
        auto y = random_values(rng, n);
        std::vector<double> pooled = x;
        pooled.insert(pooled.end(), y.begin(), y.end());
        double obs = 0;
        for (std::size_t i = 0; i < n; ++i) obs += x[i] - y[i];
        const auto counts = count_exact_parallel({pooled, n, obs, 1e-12});
        const auto oracle = oracle_exact_p(x, y);
        EXPECT_EQ(counts.total, oracle.partitions);
        EXPECT_DOUBLE_EQ(static_cast<double>(counts.greater_equal) / counts.total, static_cast<double>(oracle.greater));
        EXPECT_DOUBLE_EQ(static_cast<double>(counts.less_equal) / counts.total, static_cast<double>(oracle.less));
        EXPECT_DOUBLE_EQ(static_cast<double>(counts.abs_greater_equal) / counts.total,
                         static_cast<double>(oracle.two_sided));
    }
}

TEST(CountSampled, ParallelMatchesSerialForAnyThreadCount) {
    std::mt19937_64 rng(5);
    auto pooled = random_values(rng, 24);
    const auto draws = draw_partitions(24, 12, 5000, 77);
    PartitionProblem p{pooled, 12, 0.3, 1e-12};
    const auto ref = count_sampled_serial(p, draws);
    EXPECT_EQ(ref.total, 5000u);
    for (int threads : {1, 2, 3, 8}) EXPECT_EQ(count_sampled_parallel(p, draws, threads), ref);
}

TEST(CosineBlock, ParallelMatchesSerialBitwise) {
    auto s = random_space("r", 100, 9, 8);
    std::vector<std::size_t> q{0, 5, 17, 42, 99};
    std::vector<std::size_t> t{1, 2, 3, 50, 60, 70, 80};
    const auto ref = cosine_block_serial(view(s), q, view(s), t);
    for (int threads : {1, 2, 4}) EXPECT_EQ(cosine_block_parallel(view(s), q, view(s), t, threads), ref);
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j)
            EXPECT_NEAR(ref[i * t.size() + j], static_cast<double>(oracle_cosine(to_vec(s.row(q[i])), to_vec(s.row(t[j])))),
                        1e-13);
}
