#include "sweat/association.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include <fmt/format.h>

#include "sweat/error.hpp"
#include "sweat/kernels.hpp"

namespace sweat {

namespace {

void check_unique(const std::vector<std::string>& words, std::string_view what) {
    std::unordered_set<std::string_view> seen;
    for (const auto& w : words)
        if (!seen.insert(w).second) throw ValidationError(fmt::format("{}: duplicate word '{}'", what, w));
}

double sum(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

double mean(std::span<const double> v) { return mean_of(v); }

std::vector<std::size_t> resolve(std::span<const std::string> words, const EmbeddingSpace& space) {
    std::vector<std::size_t> rows;
    rows.reserve(words.size());
    for (const auto& w : words) rows.push_back(space.index(w));
    return rows;
}

} // namespace

double mean_of(std::span<const double> values) { return sum(values) / static_cast<double>(values.size()); }

void validate(const PoleWordsets& poles) {
    if (poles.words_a.empty() || poles.words_b.empty())
        throw ValidationError("pole wordsets must both be nonempty");
    check_unique(poles.words_a, fmt::format("pole '{}'", poles.label_a));
    check_unique(poles.words_b, fmt::format("pole '{}'", poles.label_b));
    std::unordered_set<std::string_view> a(poles.words_a.begin(), poles.words_a.end());
    for (const auto& w : poles.words_b)
        if (a.contains(w)) throw ValidationError(fmt::format("word '{}' appears in both pole wordsets", w));
}

void validate(const TopicWordset& topic) {
    if (topic.words.empty()) throw ValidationError(fmt::format("topic '{}' has no words", topic.label));
    check_unique(topic.words, fmt::format("topic '{}'", topic.label));
}

void validate(const PermutationConfig& cfg) {
    if (cfg.mode == PermutationMode::montecarlo && cfg.samples < 100)
        throw ValidationError(fmt::format("montecarlo mode needs at least 100 samples, got {}", cfg.samples));
    if (cfg.samples == 0) throw ValidationError("samples must be positive");
    if (cfg.exact_limit < 1) throw ValidationError("exact_limit must be at least 1");
}

std::string to_string(PermutationMode mode) {
    switch (mode) {
    case PermutationMode::exact: return "exact";
    case PermutationMode::montecarlo: return "montecarlo";
    case PermutationMode::automatic: return "auto";
    }
    return "?";
}

std::string to_string(TailMode mode) { return mode == TailMode::directional ? "directional" : "two_sided"; }

std::string to_string(Tail tail) {
    switch (tail) {
    case Tail::greater: return "greater";
    case Tail::less: return "less";
    case Tail::two_sided: return "two_sided";
    }
    return "?";
}

PermutationMode parse_permutation_mode(std::string_view text) {
    if (text == "exact") return PermutationMode::exact;
    if (text == "montecarlo") return PermutationMode::montecarlo;
    if (text == "auto") return PermutationMode::automatic;
    throw ValidationError(fmt::format("unknown permutation mode '{}' (exact | montecarlo | auto)", text));
}

TailMode parse_tail_mode(std::string_view text) {
    if (text == "directional") return TailMode::directional;
    if (text == "two_sided" || text == "two-sided") return TailMode::two_sided;
    throw ValidationError(fmt::format("unknown tail '{}' (directional | two_sided)", text));
}

Tail parse_tail(std::string_view text) {
    if (text == "greater") return Tail::greater;
    if (text == "less") return Tail::less;
    if (text == "two_sided") return Tail::two_sided;
    throw ValidationError(fmt::format("unknown tail '{}'", text));
}

std::vector<std::uint32_t> draw_partitions(std::size_t pooled_size, std::size_t group_size, std::uint64_t samples,
                                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint32_t> idx(pooled_size);
    std::vector<std::uint32_t> draws;
    draws.reserve(samples * group_size);
    for (std::uint64_t s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < pooled_size; ++i) idx[i] = static_cast<std::uint32_t>(i);
        for (std::size_t t = 0; t < group_size; ++t) {
            std::uniform_int_distribution<std::size_t> pick(t, pooled_size - 1);
            std::swap(idx[t], idx[pick(rng)]);
        }
        draws.insert(draws.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(group_size));
    }
    return draws;
}

PermutationOutcome permutation_test(std::span<const double> values_1, std::span<const double> values_2,
                                    const PermutationConfig& cfg) {
    validate(cfg);
    if (values_1.empty() || values_2.empty()) throw ValidationError("permutation test needs nonempty groups");
    if (values_1.size() != values_2.size())
        throw ValidationError(fmt::format("permutation test needs equal group sizes ({} vs {})", values_1.size(),
                                          values_2.size()));
    const std::size_t n = values_1.size();

    std::vector<double> pooled(values_1.begin(), values_1.end());
    pooled.insert(pooled.end(), values_2.begin(), values_2.end());
    double magnitude = 0.0;
    for (double v : pooled) magnitude += std::abs(v);

    kernels::PartitionProblem problem{pooled, n, sum(values_1) - sum(values_2), 1e-12 * (1.0 + magnitude)};

    const std::uint64_t n_partitions = kernels::binomial(2 * n, n);
    bool exact = cfg.mode == PermutationMode::exact ||
                 (cfg.mode == PermutationMode::automatic && n_partitions <= cfg.exact_limit);
    if (exact && n_partitions == std::numeric_limits<std::uint64_t>::max())
        throw ValidationError(fmt::format("exact enumeration of C({}, {}) partitions is infeasible", 2 * n, n));

    kernels::TailCounts counts;
    PermutationOutcome out;
    if (exact) {
        counts = kernels::count_exact_parallel(problem, cfg.threads);
        out.method = PermutationMode::exact;
    } else {
        auto draws = draw_partitions(pooled.size(), n, cfg.samples, cfg.seed);
        counts = kernels::count_sampled_parallel(problem, draws, cfg.threads);
        out.method = PermutationMode::montecarlo;
    }
    out.n_permutations = counts.total;

    std::uint64_t hits = 0;
    if (cfg.tail == TailMode::two_sided) {
        out.tail = Tail::two_sided;
        hits = counts.abs_greater_equal;
    } else if (problem.observed >= 0.0) {
        out.tail = Tail::greater;
        hits = counts.greater_equal;
    } else {
        out.tail = Tail::less;
        hits = counts.less_equal;
    }
    out.p_value = static_cast<double>(hits) / static_cast<double>(counts.total);
    return out;
}

double effect_size(std::span<const double> values_1, std::span<const double> values_2) {
    if (values_1.empty() || values_2.empty()) throw ValidationError("effect size needs nonempty groups");
    std::vector<double> all(values_1.begin(), values_1.end());
    all.insert(all.end(), values_2.begin(), values_2.end());
    if (std::all_of(all.begin(), all.end(), [&](double v) { return v == all.front(); }))
        throw DataError("degenerate association distribution: zero standard deviation");
    const double mu = mean(all);
    double ss = 0.0;
    for (double v : all) ss += (v - mu) * (v - mu);
    const double sd = std::sqrt(ss / static_cast<double>(all.size()));
    return (mean(values_1) - mean(values_2)) / sd;
}

void require_words(std::span<const std::string> words, std::span<const EmbeddingSpace* const> spaces) {
    std::vector<MissingWords> missing;
    for (const EmbeddingSpace* space : spaces) {
        MissingWords group{space->label(), {}};
        for (const auto& w : words)
            if (!space->contains(w) &&
                std::find(group.words.begin(), group.words.end(), w) == group.words.end())
                group.words.push_back(w);
        if (!group.words.empty()) missing.push_back(std::move(group));
    }
    if (!missing.empty()) throw MissingWordsError(std::move(missing));
}

namespace {

std::vector<std::string> pole_words(const PoleWordsets& poles) {
    std::vector<std::string> all = poles.words_a;
    all.insert(all.end(), poles.words_b.begin(), poles.words_b.end());
    return all;
}

std::vector<std::string> required_words(std::span<const std::string> words, const PoleWordsets& poles) {
    std::vector<std::string> all(words.begin(), words.end());
    auto p = pole_words(poles);
    all.insert(all.end(), p.begin(), p.end());
    return all;
}

} // namespace

std::vector<double> pole_cosines(std::span<const std::string> words, const EmbeddingSpace& space,
                                 const PoleWordsets& poles, int threads) {
    const EmbeddingSpace* spaces[] = {&space};
    require_words(required_words(words, poles), spaces);
    const auto word_rows = resolve(words, space);
    const auto pole_rows = resolve(pole_words(poles), space);
    kernels::RowsView rows{space.data(), space.norms(), space.dimension()};
    return kernels::cosine_block_parallel(rows, word_rows, rows, pole_rows, threads);
}

std::vector<double> associations(std::span<const std::string> words, const EmbeddingSpace& space,
                                 const PoleWordsets& poles, int threads) {
    const auto cos = pole_cosines(words, space, poles, threads);
    const std::size_t na = poles.words_a.size();
    const std::size_t width = na + poles.words_b.size();
    std::vector<double> out(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::span<const double> row(cos.data() + i * width, width);
        out[i] = mean(row.first(na)) - mean(row.subspan(na));
    }
    return out;
}

double single_word_association(std::string_view word, const EmbeddingSpace& space, const PoleWordsets& poles) {
    const std::string w(word);
    return associations(std::span(&w, 1), space, poles).front();
}

double weat_score(const TopicWordset& x, const TopicWordset& y, const EmbeddingSpace& space,
                  const PoleWordsets& poles) {
    validate(x);
    validate(y);
    validate(poles);
    std::unordered_set<std::string_view> xs(x.words.begin(), x.words.end());
    for (const auto& w : y.words)
        if (xs.contains(w)) throw ValidationError(fmt::format("target sets overlap on '{}'", w));
    return sum(associations(x.words, space, poles)) - sum(associations(y.words, space, poles));
}

double sweat_score(const TopicWordset& topic, const EmbeddingSpace& space1, const EmbeddingSpace& space2,
                   const PoleWordsets& poles) {
    validate(topic);
    validate(poles);
    const EmbeddingSpace* spaces[] = {&space1, &space2};
    require_words(required_words(topic.words, poles), spaces);
    return sum(associations(topic.words, space1, poles)) - sum(associations(topic.words, space2, poles));
}

std::vector<std::string> association_labels(double score, std::string_view group_1, std::string_view group_2,
                                            const PoleWordsets& poles) {
    const bool positive = score >= 0.0;
    return {fmt::format("{} ~ {}", group_1, positive ? poles.label_a : poles.label_b),
            fmt::format("{} ~ {}", group_2, positive ? poles.label_b : poles.label_a)};
}

SweatResult run_sweat(const TopicWordset& topic, const EmbeddingSpace& space1, const EmbeddingSpace& space2,
                      const PoleWordsets& poles, const PermutationConfig& cfg) {
    validate(topic);
    validate(poles);
    validate(cfg);
    const EmbeddingSpace* spaces[] = {&space1, &space2};
    require_words(required_words(topic.words, poles), spaces);

    const auto s1 = associations(topic.words, space1, poles, cfg.threads);
    const auto s2 = associations(topic.words, space2, poles, cfg.threads);

    SweatResult r;
    r.topic = topic.label;
    r.space_1 = space1.label();
    r.space_2 = space2.label();
    r.stats.score = sum(s1) - sum(s2);
    r.stats.effect_size = effect_size(s1, s2);
    r.stats.permutation = permutation_test(s1, s2, cfg);
    r.stats.associations = association_labels(r.stats.score, space1.label(), space2.label(), poles);
    for (std::size_t i = 0; i < topic.words.size(); ++i) r.per_word.push_back({topic.words[i], s1[i], s2[i]});
    return r;
}

WeatResult run_weat(const TopicWordset& x, const TopicWordset& y, const EmbeddingSpace& space,
                    const PoleWordsets& poles, const PermutationConfig& cfg) {
    validate(x);
    validate(y);
    validate(poles);
    validate(cfg);
    std::unordered_set<std::string_view> xs(x.words.begin(), x.words.end());
    for (const auto& w : y.words)
        if (xs.contains(w)) throw ValidationError(fmt::format("target sets overlap on '{}'", w));
    std::vector<std::string> both = x.words;
    both.insert(both.end(), y.words.begin(), y.words.end());
    const EmbeddingSpace* spaces[] = {&space};
    require_words(required_words(both, poles), spaces);

    const auto sx = associations(x.words, space, poles, cfg.threads);
    const auto sy = associations(y.words, space, poles, cfg.threads);

    WeatResult r;
    r.group_x = x.label;
    r.group_y = y.label;
    r.space = space.label();
    r.stats.score = sum(sx) - sum(sy);
    r.stats.effect_size = effect_size(sx, sy);
    r.stats.permutation = permutation_test(sx, sy, cfg);
    r.stats.associations = association_labels(r.stats.score, x.label, y.label, poles);
    for (std::size_t i = 0; i < sx.size(); ++i) r.per_word_x.push_back({x.words[i], sx[i]});
    for (std::size_t i = 0; i < sy.size(); ++i) r.per_word_y.push_back({y.words[i], sy[i]});
    return r;
}

} // namespace sweat
