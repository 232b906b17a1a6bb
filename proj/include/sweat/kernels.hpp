#ifndef SWEAT_KERNELS_HPP
#define SWEAT_KERNELS_HPP

// Hot loops of the toolkit. Every kernel has a plain serial version, kept as
// the reference the tests compare against, and an OpenMP version used by the
// library. Both must return identical results for identical inputs.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sweat::kernels {

/// Row-major matrix view with precomputed row norms.
struct RowsView {
    std::span<const double> data;
    std::span<const double> norms;
    std::size_t dimension = 0;

    std::size_t rows() const noexcept { return norms.size(); }
};

/// Index of the row with maximal cosine to `query`; ties resolved to the
/// row whose word compares smallest.
std::size_t nearest_row_serial(const RowsView& rows, const std::vector<std::string>& words,
                               std::span<const double> query);
std::size_t nearest_row_parallel(const RowsView& rows, const std::vector<std::string>& words,
                                 std::span<const double> query, int threads = 0);

/// Tallies of permuted statistics relative to the observed one.
struct TailCounts {
    std::uint64_t greater_equal = 0; // S_perm >= S_obs
    std::uint64_t less_equal = 0;    // S_perm <= S_obs
    std::uint64_t abs_greater_equal = 0;
    std::uint64_t total = 0;

    friend bool operator==(const TailCounts&, const TailCounts&) = default;
};

/// Problem description shared by the permutation kernels. `pooled` holds 2n
/// values; a partition puts n of them in group one, S = sum(g1) - sum(g2).
struct PartitionProblem {
    std::span<const double> pooled;
    std::size_t group_size = 0;
    double observed = 0.0;
    double tolerance = 0.0;
};

/// Every n-subset of the 2n pooled values, C(2n, n) partitions.
TailCounts count_exact_serial(const PartitionProblem& problem);
TailCounts count_exact_parallel(const PartitionProblem& problem, int threads = 0);

/// `draws` holds samples * n indices into `pooled`, one group-one subset per sample.
TailCounts count_sampled_serial(const PartitionProblem& problem, std::span<const std::uint32_t> draws);
TailCounts count_sampled_parallel(const PartitionProblem& problem, std::span<const std::uint32_t> draws,
                                  int threads = 0);

/// Cosines of each query row against each target row: out[q * targets + t].
std::vector<double> cosine_block_serial(const RowsView& queries, std::span<const std::size_t> query_rows,
                                        const RowsView& targets, std::span<const std::size_t> target_rows);
std::vector<double> cosine_block_parallel(const RowsView& queries, std::span<const std::size_t> query_rows,
                                          const RowsView& targets, std::span<const std::size_t> target_rows,
                                          int threads = 0);

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

} // namespace sweat::kernels

#endif
