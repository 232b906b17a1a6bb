#ifndef SWEAT_LEXICON_HPP
#define SWEAT_LEXICON_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sweat/association.hpp"
#include "sweat/embeddings.hpp"

namespace sweat {

class FrequencyTable {
public:
    FrequencyTable(std::unordered_map<std::string, std::uint64_t> counts, std::uint64_t total_tokens);

    std::uint64_t total_tokens() const noexcept { return total_; }
    std::size_t size() const noexcept { return counts_.size(); }
    bool contains(std::string_view word) const;
    std::optional<std::uint64_t> count(std::string_view word) const;
    const std::unordered_map<std::string, std::uint64_t>& counts() const noexcept { return counts_; }

private:
    std::unordered_map<std::string, std::uint64_t> counts_;
    std::uint64_t total_;
};

/// `#total<TAB>N` header, then `word<TAB>count` lines.
FrequencyTable load_frequency_table(const std::filesystem::path& path);
void save_frequency_table(const FrequencyTable& table, const std::filesystem::path& path);

/// log10 of occurrences per billion tokens. Absent words throw DataError.
double zipf_score(std::string_view word, const FrequencyTable& table);

struct Lexicon {
    PoleWordsets poles;
    std::string provenance;
};

/// JSON object with label_a, label_b, words_a, words_b, provenance.
Lexicon load_lexicon(const std::filesystem::path& path);

enum class RejectReason { oov_space1, oov_space2, oov_frequency, unstable_roundtrip, low_zipf_1, low_zipf_2 };

std::string to_string(RejectReason reason);

struct Rejection {
    std::string word;
    RejectReason reason;
};

struct RefinementReport {
    std::vector<std::string> kept_a;
    std::vector<std::string> kept_b;
    std::vector<Rejection> rejected;
    std::vector<std::string> warnings;

    PoleWordsets kept_poles(const PoleWordsets& original) const {
        return {original.label_a, original.label_b, kept_a, kept_b};
    }
};

struct RefinementInputs {
    const EmbeddingSpace& space1;
    const EmbeddingSpace& space2;
    const FrequencyTable* table1 = nullptr; // frequency filters skipped when both are null
    const FrequencyTable* table2 = nullptr;
    double zipf_threshold = 5.0;
};

/// Round-trip stability plus strict Zipf threshold in both tables. Each
/// rejected word carries the first failing check.
RefinementReport refine(const Lexicon& lexicon, const RefinementInputs& inputs);

struct Candidate {
    std::string word;
    double mean_zipf = 0.0;
};

/// Shared-vocabulary words ranked by mean Zipf over both tables (ties by
/// word), stopwords removed, at most `top` entries.
std::vector<Candidate> topic_candidates(const EmbeddingSpace& space1, const EmbeddingSpace& space2,
                                        const FrequencyTable& table1, const FrequencyTable& table2,
                                        const std::vector<std::string>& stopwords, std::size_t top);

/// Shared-vocabulary words with Zipf > threshold in both tables (default anchors).
std::vector<std::string> frequent_shared_words(const EmbeddingSpace& space1, const EmbeddingSpace& space2,
                                               const FrequencyTable& table1, const FrequencyTable& table2,
                                               double threshold = 5.0);

} // namespace sweat

#endif
