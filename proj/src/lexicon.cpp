#include "sweat/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

#include "sweat/alignment.hpp"
#include "sweat/error.hpp"

namespace sweat {

FrequencyTable::FrequencyTable(std::unordered_map<std::string, std::uint64_t> counts, std::uint64_t total_tokens)
    : counts_(std::move(counts)), total_(total_tokens) {
    if (total_ == 0) throw DataError("frequency table total_tokens must be positive");
    for (const auto& [word, c] : counts_) {
        if (c == 0) throw DataError(fmt::format("frequency table: zero count for '{}'", word));
        if (c > total_)
            throw DataError(fmt::format("frequency table: count {} of '{}' exceeds total {}", c, word, total_));
    }
}

bool FrequencyTable::contains(std::string_view word) const { return counts_.contains(std::string(word)); }

std::optional<std::uint64_t> FrequencyTable::count(std::string_view word) const {
    auto it = counts_.find(std::string(word));
    if (it == counts_.end()) return std::nullopt;
    return it->second;
}

FrequencyTable load_frequency_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open frequency table '{}'", path.string()));
    const auto fail = [&](std::size_t line_no, const std::string& what) {
        return DataError(fmt::format("{}:{}: {}", path.string(), line_no, what));
    };
    const auto parse_count = [](std::string_view text, std::uint64_t& out) {
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
        return ec == std::errc{} && ptr == text.data() + text.size();
    };

    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw fail(1, "missing '#total<TAB>N' header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::uint64_t total = 0;
    const std::string_view prefix = "#total\t";
    if (!line.starts_with(prefix) || !parse_count(std::string_view(line).substr(prefix.size()), total))
        throw fail(1, "header must be '#total<TAB><total_tokens>'");

    std::unordered_map<std::string, std::uint64_t> counts;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        std::uint64_t c = 0;
        if (tab == std::string::npos || tab == 0 || !parse_count(std::string_view(line).substr(tab + 1), c))
            throw fail(line_no, "expected 'word<TAB>count'");
        if (!counts.emplace(line.substr(0, tab), c).second)
            throw fail(line_no, fmt::format("duplicate word '{}'", line.substr(0, tab)));
    }
    try {
        return FrequencyTable(std::move(counts), total);
    } catch (const DataError& e) {
        throw DataError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

void save_frequency_table(const FrequencyTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError(fmt::format("cannot write frequency table '{}'", path.string()));
    std::vector<std::pair<std::string, std::uint64_t>> rows(table.counts().begin(), table.counts().end());
    std::sort(rows.begin(), rows.end());
    out << "#total\t" << table.total_tokens() << '\n';
    for (const auto& [w, c] : rows) out << w << '\t' << c << '\n';
}

double zipf_score(std::string_view word, const FrequencyTable& table) {
    auto c = table.count(word);
    if (!c) throw DataError(fmt::format("word '{}' absent from frequency table", word));
    return std::log10(static_cast<double>(*c) * 1e9 / static_cast<double>(table.total_tokens()));
}

Lexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open lexicon '{}'", path.string()));
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(fmt::format("lexicon '{}': {}", path.string(), e.what()));
    }
    Lexicon lex;
    try {
        lex.poles.label_a = j.at("label_a").get<std::string>();
        lex.poles.label_b = j.at("label_b").get<std::string>();
        lex.poles.words_a = j.at("words_a").get<std::vector<std::string>>();
        lex.poles.words_b = j.at("words_b").get<std::vector<std::string>>();
        lex.provenance = j.value("provenance", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw DataError(fmt::format("lexicon '{}': {}", path.string(), e.what()));
    }
    try {
        validate(lex.poles);
    } catch (const ValidationError& e) {
        throw DataError(fmt::format("lexicon '{}': {}", path.string(), e.what()));
    }
    return lex;
}

std::string to_string(RejectReason reason) {
    switch (reason) {
    case RejectReason::oov_space1: return "oov_space1";
    case RejectReason::oov_space2: return "oov_space2";
    case RejectReason::oov_frequency: return "oov_frequency";
    case RejectReason::unstable_roundtrip: return "unstable_roundtrip";
    case RejectReason::low_zipf_1: return "low_zipf_1";
    case RejectReason::low_zipf_2: return "low_zipf_2";
    }
    return "?";
}

namespace {

std::optional<RejectReason> first_failure(const std::string& word, const RefinementInputs& in) {
    if (!in.space1.contains(word)) return RejectReason::oov_space1;
    if (!in.space2.contains(word)) return RejectReason::oov_space2;
    const bool tables = in.table1 != nullptr && in.table2 != nullptr;
    if (tables && (!in.table1->contains(word) || !in.table2->contains(word))) return RejectReason::oov_frequency;
    if (!round_trip_stable(word, in.space1, in.space2)) return RejectReason::unstable_roundtrip;
    if (tables) {
        if (!(zipf_score(word, *in.table1) > in.zipf_threshold)) return RejectReason::low_zipf_1;
        if (!(zipf_score(word, *in.table2) > in.zipf_threshold)) return RejectReason::low_zipf_2;
    }
    return std::nullopt;
}

} // namespace

RefinementReport refine(const Lexicon& lexicon, const RefinementInputs& inputs) {
    validate(lexicon.poles);
    if (inputs.space1.dimension() != inputs.space2.dimension())
        throw DataError("refine: spaces must share a dimension (align them first)");
    if ((inputs.table1 == nullptr) != (inputs.table2 == nullptr))
        throw ValidationError("refine: supply frequency tables for both spaces or for neither");

    RefinementReport report;
    const auto run = [&](const std::vector<std::string>& words, std::vector<std::string>& kept) {
        for (const auto& w : words) {
            if (auto reason = first_failure(w, inputs))
                report.rejected.push_back({w, *reason});
            else
                kept.push_back(w);
        }
    };
    run(lexicon.poles.words_a, report.kept_a);
    run(lexicon.poles.words_b, report.kept_b);
    if (report.kept_a.empty())
        report.warnings.push_back(fmt::format("no words of pole '{}' survived refinement", lexicon.poles.label_a));
    if (report.kept_b.empty())
        report.warnings.push_back(fmt::format("no words of pole '{}' survived refinement", lexicon.poles.label_b));
    return report;
}

std::vector<Candidate> topic_candidates(const EmbeddingSpace& space1, const EmbeddingSpace& space2,
                                        const FrequencyTable& table1, const FrequencyTable& table2,
                                        const std::vector<std::string>& stopwords, std::size_t top) {
    std::unordered_set<std::string_view> stop(stopwords.begin(), stopwords.end());
    std::vector<Candidate> out;
    for (const auto& w : shared_vocabulary(space1, space2)) {
        if (stop.contains(w) || !table1.contains(w) || !table2.contains(w)) continue;
        out.push_back({w, 0.5 * (zipf_score(w, table1) + zipf_score(w, table2))});
    }
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        if (a.mean_zipf != b.mean_zipf) return a.mean_zipf > b.mean_zipf;
        return a.word < b.word;
    });
    if (out.size() > top) out.resize(top);
    return out;
}

std::vector<std::string> frequent_shared_words(const EmbeddingSpace& space1, const EmbeddingSpace& space2,
                                               const FrequencyTable& table1, const FrequencyTable& table2,
                                               double threshold) {
    std::vector<std::string> out;
    for (const auto& w : shared_vocabulary(space1, space2))
        if (table1.contains(w) && table2.contains(w) && zipf_score(w, table1) > threshold &&
            zipf_score(w, table2) > threshold)
            out.push_back(w);
    return out;
}

} // namespace sweat
