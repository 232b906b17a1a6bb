#include "sweat/report.hpp"

#include <fstream>

#include <fmt/format.h>

#include "sweat/error.hpp"

namespace sweat {

using nlohmann::json;

json to_json(const TestStatistics& s) {
    return {{"score", s.score},
            {"effect_size", s.effect_size},
            {"p_value", s.permutation.p_value},
            {"tail", to_string(s.permutation.tail)},
            {"n_permutations", s.permutation.n_permutations},
            {"method", to_string(s.permutation.method)},
            {"associations", s.associations}};
}

json to_json(const SweatResult& r) {
    json j = to_json(r.stats);
    j["topic"] = r.topic;
    j["space_1"] = r.space_1;
    j["space_2"] = r.space_2;
    j["per_word"] = json::array();
    for (const auto& w : r.per_word) j["per_word"].push_back({{"word", w.word}, {"s_1", w.space_1}, {"s_2", w.space_2}});
    return j;
}

json to_json(const WeatResult& r) {
    json j = to_json(r.stats);
    j["group_x"] = r.group_x;
    j["group_y"] = r.group_y;
    j["space"] = r.space;
    const auto list = [](const std::vector<GroupAssociation>& v) {
        json a = json::array();
        for (const auto& w : v) a.push_back({{"word", w.word}, {"s", w.value}});
        return a;
    };
    j["per_word_x"] = list(r.per_word_x);
    j["per_word_y"] = list(r.per_word_y);
    return j;
}

json to_json(const AlignmentReport& r, bool include_rotation) {
    json j = {{"source_label", r.source_label},
              {"target_label", r.target_label},
              {"anchors_used", r.anchors_used},
              {"n_anchors", r.anchors_used.size()},
              {"residual", r.residual},
              {"underdetermined", r.underdetermined},
              {"centered", r.centered},
              {"orthogonality_error", orthogonality_error(r.rotation)}};
    if (include_rotation) {
        json rows = json::array();
        for (Eigen::Index i = 0; i < r.rotation.rows(); ++i) {
            std::vector<double> row(static_cast<std::size_t>(r.rotation.cols()));
            for (Eigen::Index k = 0; k < r.rotation.cols(); ++k) row[static_cast<std::size_t>(k)] = r.rotation(i, k);
            rows.push_back(row);
        }
        j["rotation"] = rows;
        j["source_mean"] = std::vector<double>(r.source_mean.data(), r.source_mean.data() + r.source_mean.size());
        j["target_mean"] = std::vector<double>(r.target_mean.data(), r.target_mean.data() + r.target_mean.size());
    }
    return j;
}

json to_json(const RefinementReport& r) {
    json rejected = json::array();
    for (const auto& x : r.rejected) rejected.push_back({{"word", x.word}, {"reason", to_string(x.reason)}});
    return {{"kept_a", r.kept_a}, {"kept_b", r.kept_b}, {"rejected", rejected}, {"warnings", r.warnings}};
}

SweatResult sweat_result_from_json(const json& j) {
    try {
        SweatResult r;
        r.topic = j.at("topic").get<std::string>();
        r.space_1 = j.at("space_1").get<std::string>();
        r.space_2 = j.at("space_2").get<std::string>();
        r.stats.score = j.at("score").get<double>();
        r.stats.effect_size = j.at("effect_size").get<double>();
        r.stats.permutation.p_value = j.at("p_value").get<double>();
        r.stats.permutation.tail = parse_tail(j.at("tail").get<std::string>());
        r.stats.permutation.n_permutations = j.at("n_permutations").get<std::uint64_t>();
        r.stats.permutation.method = parse_permutation_mode(j.at("method").get<std::string>());
        r.stats.associations = j.at("associations").get<std::vector<std::string>>();
        for (const auto& w : j.at("per_word"))
            r.per_word.push_back({w.at("word").get<std::string>(), w.at("s_1").get<double>(), w.at("s_2").get<double>()});
        return r;
    } catch (const json::exception& e) {
        throw DataError(fmt::format("malformed SWEAT result: {}", e.what()));
    }
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(fmt::format("'{}': {}", path.string(), e.what()));
    }
}

void write_json_file(const json& j, const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
    out << j.dump(2) << '\n';
    if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

json strip_meta(json report) {
    report.erase("meta");
    return report;
}

} // namespace sweat
