#include "sweat/kernels.hpp"

#include <cmath>
#include <limits>

#include <omp.h>

#include "sweat/embeddings.hpp"

namespace sweat::kernels {

namespace {

int thread_count(int requested) { return requested > 0 ? requested : omp_get_max_threads(); }

struct Best {
    double cos = -std::numeric_limits<double>::infinity();
    std::size_t row = std::numeric_limits<std::size_t>::max();
};

// Strict total order: higher cosine first, then smaller word.
bool better(const Best& cand, const Best& best, const std::vector<std::string>& words) {
    if (best.row == std::numeric_limits<std::size_t>::max()) return true;
    if (cand.cos != best.cos) return cand.cos > best.cos;
    return words[cand.row] < words[best.row];
}

double row_cosine(const RowsView& rows, std::size_t i, std::span<const double> query, double query_norm) {
    return cosine(rows.data.subspan(i * rows.dimension, rows.dimension), rows.norms[i], query, query_norm);
}

void tally(TailCounts& counts, double stat, const PartitionProblem& p) {
    counts.greater_equal += stat >= p.observed - p.tolerance;
    counts.less_equal += stat <= p.observed + p.tolerance;
    counts.abs_greater_equal += std::abs(stat) >= std::abs(p.observed) - p.tolerance;
    ++counts.total;
}

double pooled_total(std::span<const double> pooled) {
    double t = 0.0;
    for (double v : pooled) t += v;
    return t;
}

void merge(TailCounts& into, const TailCounts& from) {
    into.greater_equal += from.greater_equal;
    into.less_equal += from.less_equal;
    into.abs_greater_equal += from.abs_greater_equal;
    into.total += from.total;
}

void enumerate_subsets(const PartitionProblem& p, double total, std::size_t next, std::size_t chosen,
                       double group_sum, TailCounts& counts) {
    const std::size_t m = p.pooled.size();
    if (chosen == p.group_size) {
        tally(counts, 2.0 * group_sum - total, p);
        return;
    }
    if (m - next < p.group_size - chosen) return;
    enumerate_subsets(p, total, next + 1, chosen + 1, group_sum + p.pooled[next], counts);
    enumerate_subsets(p, total, next + 1, chosen, group_sum, counts);
}

// Lexicographic unranking of a k-subset of {0..m-1}.
void unrank(std::uint64_t rank, std::size_t m, std::size_t k, std::vector<std::size_t>& out) {
    out.resize(k);
    std::size_t v = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (;; ++v) {
            const std::uint64_t with_v = binomial(m - 1 - v, k - 1 - i);
            if (rank < with_v) break;
            rank -= with_v;
        }
        out[i] = v++;
    }
}

bool next_subset(std::vector<std::size_t>& c, std::size_t m) {
    const std::size_t k = c.size();
    std::size_t i = k;
    while (i > 0 && c[i - 1] == m - k + (i - 1)) --i;
    if (i == 0) return false;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
    return true;
}

} // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(r);
}

std::size_t nearest_row_serial(const RowsView& rows, const std::vector<std::string>& words,
                               std::span<const double> query) {
    const double qn = norm(query);
    Best best;
    for (std::size_t i = 0; i < rows.rows(); ++i) {
        Best cand{row_cosine(rows, i, query, qn), i};
        if (better(cand, best, words)) best = cand;
    }
    return best.row;
}

std::size_t nearest_row_parallel(const RowsView& rows, const std::vector<std::string>& words,
                                 std::span<const double> query, int threads) {
    const double qn = norm(query);
    const int nt = thread_count(threads);
    std::vector<Best> partial(static_cast<std::size_t>(nt));
    const auto n = static_cast<std::int64_t>(rows.rows());
#pragma omp parallel num_threads(nt)
    {
        Best local;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            Best cand{row_cosine(rows, static_cast<std::size_t>(i), query, qn), static_cast<std::size_t>(i)};
            if (better(cand, local, words)) local = cand;
        }
        partial[static_cast<std::size_t>(omp_get_thread_num())] = local;
    }
    Best best;
    for (const Best& b : partial)
        if (b.row != std::numeric_limits<std::size_t>::max() && better(b, best, words)) best = b;
    return best.row;
}

TailCounts count_exact_serial(const PartitionProblem& problem) {
    TailCounts counts;
    enumerate_subsets(problem, pooled_total(problem.pooled), 0, 0, 0.0, counts);
    return counts;
}

TailCounts count_exact_parallel(const PartitionProblem& problem, int threads) {
    const std::size_t m = problem.pooled.size();
    const std::size_t k = problem.group_size;
    const double total = pooled_total(problem.pooled);
    const std::uint64_t n_subsets = binomial(m, k);
    const int nt = thread_count(threads);
    const std::uint64_t n_chunks = std::min<std::uint64_t>(n_subsets, static_cast<std::uint64_t>(nt) * 64);
    std::vector<TailCounts> partial(static_cast<std::size_t>(nt));

#pragma omp parallel num_threads(nt)
    {
        TailCounts local;
        std::vector<std::size_t> subset;
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t chunk = 0; chunk < static_cast<std::int64_t>(n_chunks); ++chunk) {
            const auto c = static_cast<std::uint64_t>(chunk);
            const std::uint64_t lo = n_subsets / n_chunks * c + std::min(c, n_subsets % n_chunks);
            const std::uint64_t hi = lo + n_subsets / n_chunks + (c < n_subsets % n_chunks ? 1 : 0);
            unrank(lo, m, k, subset);
            for (std::uint64_t r = lo; r < hi; ++r) {
                double s = 0.0;
                for (std::size_t idx : subset) s += problem.pooled[idx];
                tally(local, 2.0 * s - total, problem);
                next_subset(subset, m);
            }
        }
        partial[static_cast<std::size_t>(omp_get_thread_num())] = local;
    }
    TailCounts counts;
    for (const auto& p : partial) merge(counts, p);
    return counts;
}

TailCounts count_sampled_serial(const PartitionProblem& problem, std::span<const std::uint32_t> draws) {
    const std::size_t k = problem.group_size;
    const double total = pooled_total(problem.pooled);
    TailCounts counts;
    for (std::size_t j = 0; j + k <= draws.size(); j += k) {
        double s = 0.0;
        for (std::size_t t = 0; t < k; ++t) s += problem.pooled[draws[j + t]];
        tally(counts, 2.0 * s - total, problem);
    }
    return counts;
}

TailCounts count_sampled_parallel(const PartitionProblem& problem, std::span<const std::uint32_t> draws,
                                  int threads) {
    const std::size_t k = problem.group_size;
    const double total = pooled_total(problem.pooled);
    const auto samples = static_cast<std::int64_t>(draws.size() / k);
    const int nt = thread_count(threads);
    std::uint64_t ge = 0, le = 0, abs_ge = 0;
#pragma omp parallel for num_threads(nt) schedule(static) reduction(+ : ge, le, abs_ge)
    for (std::int64_t j = 0; j < samples; ++j) {
        const std::size_t base = static_cast<std::size_t>(j) * k;
        double s = 0.0;
        for (std::size_t t = 0; t < k; ++t) s += problem.pooled[draws[base + t]];
        TailCounts one;
        tally(one, 2.0 * s - total, problem);
        ge += one.greater_equal;
        le += one.less_equal;
        abs_ge += one.abs_greater_equal;
    }
    return {ge, le, abs_ge, static_cast<std::uint64_t>(samples)};
}

std::vector<double> cosine_block_serial(const RowsView& queries, std::span<const std::size_t> query_rows,
                                        const RowsView& targets, std::span<const std::size_t> target_rows) {
    std::vector<double> out(query_rows.size() * target_rows.size());
    for (std::size_t q = 0; q < query_rows.size(); ++q) {
        const std::size_t qi = query_rows[q];
        auto qv = queries.data.subspan(qi * queries.dimension, queries.dimension);
        for (std::size_t t = 0; t < target_rows.size(); ++t)
            out[q * target_rows.size() + t] = row_cosine(targets, target_rows[t], qv, queries.norms[qi]);
    }
    return out;
}

std::vector<double> cosine_block_parallel(const RowsView& queries, std::span<const std::size_t> query_rows,
                                          const RowsView& targets, std::span<const std::size_t> target_rows,
                                          int threads) {
    std::vector<double> out(query_rows.size() * target_rows.size());
    const auto cells = static_cast<std::int64_t>(out.size());
    const std::size_t width = target_rows.size();
#pragma omp parallel for num_threads(thread_count(threads)) schedule(static)
    for (std::int64_t cell = 0; cell < cells; ++cell) {
        const std::size_t q = static_cast<std::size_t>(cell) / width;
        const std::size_t t = static_cast<std::size_t>(cell) % width;
        const std::size_t qi = query_rows[q];
        auto qv = queries.data.subspan(qi * queries.dimension, queries.dimension);
        out[static_cast<std::size_t>(cell)] = row_cosine(targets, target_rows[t], qv, queries.norms[qi]);
    }
    return out;
}

} // namespace sweat::kernels
