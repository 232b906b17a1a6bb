#ifndef SWEAT_TESTS_SUPPORT_HPP
#define SWEAT_TESTS_SUPPORT_HPP

// Fixtures and independent oracles shared by the test binaries. Nothing in
// here calls into the library's numerical code paths.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sweat/embeddings.hpp"

namespace sweat::testing {

using Row = std::pair<std::string, std::vector<double>>;

inline EmbeddingSpace make_space(const std::string& label, std::initializer_list<Row> rows) {
    std::vector<std::string> words;
    std::vector<double> data;
    std::size_t dim = 0;
    for (const auto& [w, v] : rows) {
        dim = v.size();
        words.push_back(w);
        data.insert(data.end(), v.begin(), v.end());
    }
    return EmbeddingSpace(label, dim, std::move(words), std::move(data));
}

inline EmbeddingSpace make_space(const std::string& label, const std::vector<Row>& rows) {
    std::vector<std::string> words;
    std::vector<double> data;
    std::size_t dim = rows.empty() ? 1 : rows.front().second.size();
    for (const auto& [w, v] : rows) {
        words.push_back(w);
        data.insert(data.end(), v.begin(), v.end());
    }
    return EmbeddingSpace(label, dim, std::move(words), std::move(data));
}

inline std::vector<double> gaussian_vector(std::mt19937_64& rng, std::size_t dim, double sigma = 1.0) {
    std::normal_distribution<double> n(0.0, sigma);
    std::vector<double> v(dim);
    for (auto& x : v) x = n(rng);
    return v;
}

inline std::vector<double> normalized(std::vector<double> v) {
    long double s = 0;
    for (double x : v) s += static_cast<long double>(x) * x;
    const double n = static_cast<double>(std::sqrt(s));
    for (auto& x : v) x /= n;
    return v;
}

/// Unit vector near basis vector `axis`: e_axis + N(0, sigma^2) noise, renormalised.
inline std::vector<double> near_axis(std::mt19937_64& rng, std::size_t dim, std::size_t axis, double sigma) {
    auto v = gaussian_vector(rng, dim, sigma);
    v[axis] += 1.0;
    return normalized(std::move(v));
}

inline EmbeddingSpace random_space(const std::string& label, std::size_t vocab, std::size_t dim, std::uint64_t seed,
                                   const std::string& prefix = "w") {
    std::mt19937_64 rng(seed);
    std::vector<Row> rows;
    for (std::size_t i = 0; i < vocab; ++i) rows.push_back({prefix + std::to_string(i), gaussian_vector(rng, dim)});
    return make_space(label, rows);
}

/// Random orthogonal matrix (row-major) by Gram-Schmidt on a Gaussian matrix.
inline std::vector<double> random_orthogonal(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<long double>> q;
    while (q.size() < dim) {
        auto g = gaussian_vector(rng, dim);
        std::vector<long double> v(g.begin(), g.end());
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : q) {
                long double d = 0;
                for (std::size_t k = 0; k < dim; ++k) d += v[k] * b[k];
                for (std::size_t k = 0; k < dim; ++k) v[k] -= d * b[k];
            }
        long double n = 0;
        for (auto x : v) n += x * x;
        n = std::sqrt(n);
        if (n < 1e-6L) continue;
        for (auto& x : v) x /= n;
        q.push_back(v);
    }
    std::vector<double> out(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) out[i * dim + k] = static_cast<double>(q[i][k]);
    return out;
}

/// Every row multiplied on the right by `rotation`.
inline EmbeddingSpace rotate(const EmbeddingSpace& space, const std::vector<double>& rotation, const std::string& label) {
    const std::size_t d = space.dimension();
    std::vector<double> data(space.size() * d);
    for (std::size_t i = 0; i < space.size(); ++i)
        for (std::size_t k = 0; k < d; ++k) {
            long double s = 0;
            for (std::size_t j = 0; j < d; ++j) s += static_cast<long double>(space.row(i)[j]) * rotation[j * d + k];
            data[i * d + k] = static_cast<double>(s);
        }
    return EmbeddingSpace(label, d, space.words(), std::move(data));
}

// ---------------------------------------------------------------- oracles

inline long double oracle_cosine(const std::vector<double>& u, const std::vector<double>& v) {
    long double d = 0, nu = 0, nv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        d += static_cast<long double>(u[i]) * v[i];
        nu += static_cast<long double>(u[i]) * u[i];
        nv += static_cast<long double>(v[i]) * v[i];
    }
    return d / std::sqrt(nu * nv);
}

inline std::vector<double> to_vec(Vector v) { return {v.begin(), v.end()}; }

/// mean cos to A minus mean cos to B, long double, straight from the definition.
inline long double oracle_association(const EmbeddingSpace& s, const std::string& w, const std::vector<std::string>& a,
                                      const std::vector<std::string>& b) {
    const auto wv = to_vec(s.vector(w));
    long double ma = 0, mb = 0;
    for (const auto& x : a) ma += oracle_cosine(wv, to_vec(s.vector(x)));
    for (const auto& x : b) mb += oracle_cosine(wv, to_vec(s.vector(x)));
    return ma / a.size() - mb / b.size();
}

/// Naive Cohen-style d with population std over both lists.
inline long double oracle_effect_size(const std::vector<double>& x, const std::vector<double>& y) {
    long double sx = 0, sy = 0;
    for (double v : x) sx += v;
    for (double v : y) sy += v;
    const long double mx = sx / x.size(), my = sy / y.size();
    const long double m = (sx + sy) / (x.size() + y.size());
    long double ss = 0;
    for (double v : x) ss += (v - m) * (v - m);
    for (double v : y) ss += (v - m) * (v - m);
    return (mx - my) / std::sqrt(ss / (x.size() + y.size()));
}

struct OracleP {
    long double greater;   // P[S_perm >= S_obs]
    long double less;      // P[S_perm <= S_obs]
    long double two_sided; // P[|S_perm| >= |S_obs|]
    std::uint64_t partitions;
};

/// Brute force over all bitmasks of 2n items with popcount n.
inline OracleP oracle_exact_p(const std::vector<double>& x, const std::vector<double>& y, long double tol = 1e-9L) {
    std::vector<double> pooled = x;
    pooled.insert(pooled.end(), y.begin(), y.end());
    const std::size_t m = pooled.size();
    const std::size_t n = x.size();
    long double obs = 0;
    for (double v : x) obs += v;
    for (double v : y) obs -= v;
    std::uint64_t ge = 0, le = 0, two = 0, count = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) != n) continue;
        long double s = 0;
        for (std::size_t i = 0; i < m; ++i) s += (mask >> i & 1) ? pooled[i] : -pooled[i];
        ++count;
        ge += s >= obs - tol;
        le += s <= obs + tol;
        two += std::abs(s) >= std::abs(obs) - tol;
    }
    return {static_cast<long double>(ge) / count, static_cast<long double>(le) / count,
            static_cast<long double>(two) / count, count};
}

// ---------------------------------------------------------------- files

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("sweat-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

    std::filesystem::path write(const std::string& name, const std::string& content) const {
        auto p = path_ / name;
        std::ofstream(p, std::ios::binary) << content;
        return p;
    }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace sweat::testing

#endif
