#ifndef SWEAT_ASSOCIATION_HPP
#define SWEAT_ASSOCIATION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sweat/embeddings.hpp"

namespace sweat {

struct PoleWordsets {
    std::string label_a;
    std::string label_b;
    std::vector<std::string> words_a;
    std::vector<std::string> words_b;

    PoleWordsets swapped() const { return {label_b, label_a, words_b, words_a}; }
};

struct TopicWordset {
    std::string label;
    std::vector<std::string> words;
};

/// Throws ValidationError: empty lists, duplicates, or a word on both poles.
void validate(const PoleWordsets& poles);
void validate(const TopicWordset& topic);

enum class PermutationMode { exact, montecarlo, automatic };
enum class TailMode { directional, two_sided };
enum class Tail { greater, less, two_sided };

struct PermutationConfig {
    PermutationMode mode = PermutationMode::automatic;
    std::uint64_t samples = 10'000;
    std::uint64_t seed = 0;
    std::uint64_t exact_limit = 500'000;
    TailMode tail = TailMode::directional;
    int threads = 0; // 0: OpenMP default
};

void validate(const PermutationConfig& cfg);

std::string to_string(PermutationMode mode);
std::string to_string(TailMode mode);
std::string to_string(Tail tail);
PermutationMode parse_permutation_mode(std::string_view text);
TailMode parse_tail_mode(std::string_view text);
Tail parse_tail(std::string_view text);

struct PermutationOutcome {
    double p_value = 1.0;
    std::uint64_t n_permutations = 0;
    PermutationMode method = PermutationMode::exact; // exact or montecarlo
    Tail tail = Tail::greater;
};

/// Directional (or two-sided) permutation test over equal-size re-splits of
/// the pooled values. Statistic: sum(values_1) - sum(values_2).
PermutationOutcome permutation_test(std::span<const double> values_1, std::span<const double> values_2,
                                    const PermutationConfig& cfg);

/// Group-one index sets for Monte Carlo, samples * group_size entries.
/// Generated serially from `seed` so evaluation order never matters.
std::vector<std::uint32_t> draw_partitions(std::size_t pooled_size, std::size_t group_size,
                                           std::uint64_t samples, std::uint64_t seed);

/// (mean_1 - mean_2) / population std of both lists together.
double effect_size(std::span<const double> values_1, std::span<const double> values_2);

/// mean cos(w, a) over A minus mean cos(w, b) over B.
double single_word_association(std::string_view word, const EmbeddingSpace& space,
                               const PoleWordsets& poles);

/// Cosines of each word against A then B, row-major |words| x (|A| + |B|).
std::vector<double> pole_cosines(std::span<const std::string> words, const EmbeddingSpace& space,
                                 const PoleWordsets& poles, int threads = 0);

/// Arithmetic mean as sum / size; the single definition used by every mean association.
double mean_of(std::span<const double> values);

/// s-values for every word of `words`, pole vectors resolved once.
std::vector<double> associations(std::span<const std::string> words, const EmbeddingSpace& space,
                                 const PoleWordsets& poles, int threads = 0);

double weat_score(const TopicWordset& x, const TopicWordset& y, const EmbeddingSpace& space,
                  const PoleWordsets& poles);
double sweat_score(const TopicWordset& topic, const EmbeddingSpace& space1, const EmbeddingSpace& space2,
                   const PoleWordsets& poles);

/// Labels "<group> ~ <pole>" implied by the sign of the score. Zero counts
/// as positive.
std::vector<std::string> association_labels(double score, std::string_view group_1,
                                            std::string_view group_2, const PoleWordsets& poles);

struct TestStatistics {
    double score = 0.0;
    double effect_size = 0.0;
    PermutationOutcome permutation;
    std::vector<std::string> associations;
};

struct WordAssociation {
    std::string word;
    double space_1 = 0.0;
    double space_2 = 0.0;
};

struct SweatResult {
    std::string topic;
    std::string space_1;
    std::string space_2;
    TestStatistics stats;
    std::vector<WordAssociation> per_word;
};

struct GroupAssociation {
    std::string word;
    double value = 0.0;
};

struct WeatResult {
    std::string group_x;
    std::string group_y;
    std::string space;
    TestStatistics stats;
    std::vector<GroupAssociation> per_word_x;
    std::vector<GroupAssociation> per_word_y;
};

SweatResult run_sweat(const TopicWordset& topic, const EmbeddingSpace& space1, const EmbeddingSpace& space2,
                      const PoleWordsets& poles, const PermutationConfig& cfg);

WeatResult run_weat(const TopicWordset& x, const TopicWordset& y, const EmbeddingSpace& space,
                    const PoleWordsets& poles, const PermutationConfig& cfg);

/// Throws MissingWordsError naming every word of `words` absent from any of `spaces`.
void require_words(std::span<const std::string> words, std::span<const EmbeddingSpace* const> spaces);

} // namespace sweat

#endif
