#ifndef SWEAT_EMBEDDINGS_HPP
#define SWEAT_EMBEDDINGS_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sweat {

using Vector = std::span<const double>;

/**
 * Immutable word -> vector map of a single embedding space.
 *
 * Vectors are stored row-major in one contiguous buffer with their norms
 * precomputed. Construction validates every row: all components finite,
 * norm strictly positive, words unique.
 */
class EmbeddingSpace {
public:
    EmbeddingSpace(std::string label, std::size_t dimension,
                   std::vector<std::string> words, std::vector<double> data);

    const std::string& label() const noexcept { return label_; }
    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return words_.size(); }
    bool empty() const noexcept { return words_.empty(); }

    const std::vector<std::string>& words() const noexcept { return words_; }
    const std::string& word(std::size_t row) const { return words_.at(row); }

    bool contains(std::string_view word) const;
    std::optional<std::size_t> find(std::string_view word) const;

    /// Row index of `word`; throws MissingWordsError when absent.
    std::size_t index(std::string_view word) const;

    Vector row(std::size_t i) const { return {data_.data() + i * dimension_, dimension_}; }
    Vector vector(std::string_view word) const { return row(index(word)); }
    double norm(std::size_t i) const { return norms_[i]; }

    const std::vector<double>& data() const noexcept { return data_; }
    const std::vector<double>& norms() const noexcept { return norms_; }

    EmbeddingSpace relabeled(std::string label) const;

private:
    std::string label_;
    std::size_t dimension_;
    std::vector<std::string> words_;
    std::vector<double> data_;
    std::vector<double> norms_;
    std::unordered_map<std::string, std::size_t> index_;
};

double dot(Vector u, Vector v);
double norm(Vector u);

/// dot(u,v) / (|u| |v|). Overshoot beyond [-1,1] up to 1e-9 is clamped,
/// anything larger is an error.
double cosine(Vector u, Vector v);

/// Cosine with both norms supplied by the caller; clamps to [-1,1] without
/// checking. Every association formula goes through this one expression.
double cosine(Vector u, double norm_u, Vector v, double norm_v) noexcept;

/// Vocabulary word maximising cosine with `query`; ties go to the
/// lexicographically smallest word.
std::string nearest_neighbor(const EmbeddingSpace& space, Vector query);

EmbeddingSpace load_word2vec_text(const std::filesystem::path& path, std::string label = {});

/// Writes `<n> <dim>` then one row per word, components at `precision`
/// significant digits.
void save_word2vec_text(const EmbeddingSpace& space, const std::filesystem::path& path,
                        int precision = 17);

} // namespace sweat

#endif
