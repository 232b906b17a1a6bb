#include "sweat/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "sweat/error.hpp"
#include "sweat/kernels.hpp"

namespace sweat {

MissingWordsError::MissingWordsError(std::vector<MissingWords> missing)
    : DataError([&] {
          std::string msg = "words missing from vocabulary:";
          for (const auto& group : missing) {
              msg += fmt::format(" [{}:", group.space);
              for (const auto& w : group.words) msg += " " + w;
              msg += "]";
          }
          return msg;
      }()),
      missing_(std::move(missing)) {}

EmbeddingSpace::EmbeddingSpace(std::string label, std::size_t dimension, std::vector<std::string> words,
                               std::vector<double> data)
    : label_(std::move(label)), dimension_(dimension), words_(std::move(words)), data_(std::move(data)) {
    if (dimension_ == 0) throw DataError("embedding dimension must be positive");
    if (data_.size() != words_.size() * dimension_)
        throw DataError(fmt::format("embedding data holds {} values, expected {} x {}", data_.size(),
                                    words_.size(), dimension_));
    norms_.resize(words_.size());
    index_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
        Vector v = row(i);
        if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); }))
            throw DataError(fmt::format("non-finite component in vector of '{}'", words_[i]));
        norms_[i] = sweat::norm(v);
        if (!(norms_[i] > 0.0)) throw DataError(fmt::format("zero-norm vector for '{}'", words_[i]));
        if (!index_.emplace(words_[i], i).second) throw DataError(fmt::format("duplicate word '{}'", words_[i]));
    }
}

bool EmbeddingSpace::contains(std::string_view word) const { return find(word).has_value(); }

std::optional<std::size_t> EmbeddingSpace::find(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t EmbeddingSpace::index(std::string_view word) const {
    if (auto i = find(word)) return *i;
    throw MissingWordsError({{label_, {std::string(word)}}});
}

EmbeddingSpace EmbeddingSpace::relabeled(std::string label) const {
    EmbeddingSpace copy = *this;
    copy.label_ = std::move(label);
    return copy;
}

double dot(Vector u, Vector v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

double norm(Vector u) { return std::sqrt(dot(u, u)); }

double cosine(Vector u, double norm_u, Vector v, double norm_v) noexcept {
    return std::clamp(dot(u, v) / (norm_u * norm_v), -1.0, 1.0);
}

double cosine(Vector u, Vector v) {
    if (u.size() != v.size())
        throw DataError(fmt::format("cosine: dimension mismatch ({} vs {})", u.size(), v.size()));
    const double nu = norm(u);
    const double nv = norm(v);
    if (!(nu > 0.0) || !(nv > 0.0)) throw DataError("cosine: zero-norm vector");
    const double c = dot(u, v) / (nu * nv);
    if (!std::isfinite(c) || std::abs(c) > 1.0 + 1e-9)
        throw DataError(fmt::format("cosine: value {} outside [-1, 1]", c));
    return std::clamp(c, -1.0, 1.0);
}

std::string nearest_neighbor(const EmbeddingSpace& space, Vector query) {
    if (space.empty()) throw DataError("nearest_neighbor: empty space");
    if (query.size() != space.dimension())
        throw DataError(fmt::format("nearest_neighbor: query dimension {} vs space dimension {}", query.size(),
                                    space.dimension()));
    if (!(norm(query) > 0.0)) throw DataError("nearest_neighbor: zero-norm query");
    kernels::RowsView rows{space.data(), space.norms(), space.dimension()};
    return space.word(kernels::nearest_row_parallel(rows, space.words(), query));
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        std::size_t end = line.find(' ', pos);
        if (end == std::string_view::npos) end = line.size();
        out.push_back(line.substr(pos, end - pos));
        pos = end + 1;
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

} // namespace

EmbeddingSpace load_word2vec_text(const std::filesystem::path& path, std::string label) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open embedding file '{}'", path.string()));
    if (label.empty()) label = path.stem().string();

    const auto fail = [&](std::size_t line_no, const std::string& what) {
        return DataError(fmt::format("{}:{}: {}", path.string(), line_no, what));
    };

    std::string line;
    if (!std::getline(in, line)) throw fail(1, "missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_spaces(line);
    std::size_t vocab = 0;
    std::size_t dim = 0;
    if (header.size() != 2 || !parse_number(header[0], vocab) || !parse_number(header[1], dim) || dim == 0)
        throw fail(1, "header must be '<vocab_size> <dimension>'");

    std::vector<std::string> words;
    std::vector<double> data;
    words.reserve(vocab);
    data.reserve(vocab * dim);
    std::unordered_map<std::string, std::size_t> seen;
    seen.reserve(vocab);

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // word2vec writers commonly leave a trailing space
        if (!line.empty() && line.back() == ' ') line.pop_back();
        if (line.empty()) {
            // tolerate trailing blank lines only
            continue;
        }
        if (words.size() == vocab) throw fail(line_no, fmt::format("row count mismatch: header declares {}", vocab));
        auto fields = split_spaces(line);
        if (fields.size() != dim + 1)
            throw fail(line_no, fmt::format("dimension mismatch: expected {} components, found {}", dim,
                                            fields.size() - 1));
        std::string word(fields[0]);
        if (word.empty()) throw fail(line_no, "empty word");
        double sq = 0.0;
        for (std::size_t k = 1; k <= dim; ++k) {
            double x = 0.0;
            if (!parse_number(fields[k], x)) throw fail(line_no, fmt::format("malformed number '{}'", fields[k]));
            if (!std::isfinite(x)) throw fail(line_no, "non-finite component");
            sq += x * x;
            data.push_back(x);
        }
        if (!(sq > 0.0)) throw fail(line_no, fmt::format("zero-norm vector for '{}'", word));
        if (!seen.emplace(word, line_no).second) throw fail(line_no, fmt::format("duplicate word '{}'", word));
        words.push_back(std::move(word));
    }
    if (words.size() != vocab)
        throw fail(line_no, fmt::format("row count mismatch: header declares {}, file has {}", vocab, words.size()));
    return EmbeddingSpace(std::move(label), dim, std::move(words), std::move(data));
}

void save_word2vec_text(const EmbeddingSpace& space, const std::filesystem::path& path, int precision) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot write embedding file '{}'", path.string()));
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "{} {}\n", space.size(), space.dimension());
    for (std::size_t i = 0; i < space.size(); ++i) {
        fmt::format_to(std::back_inserter(buf), "{}", space.word(i));
        for (double x : space.row(i)) fmt::format_to(std::back_inserter(buf), " {:.{}g}", x, precision);
        buf.push_back('\n');
        if (buf.size() > (1u << 20)) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

} // namespace sweat
