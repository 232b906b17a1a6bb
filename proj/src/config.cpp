#include "sweat/config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "sweat/lexicon.hpp"

namespace sweat {

ConfigError::ConfigError(std::vector<std::string> errors)
    : ValidationError([&] {
          std::string msg = "invalid config:";
          for (const auto& e : errors) msg += "\n  " + e;
          return msg;
      }()),
      errors_(std::move(errors)) {}

std::filesystem::path RunConfig::resolve(const std::string& path) const {
    std::filesystem::path p(path);
    return p.is_absolute() ? p : base_dir / p;
}

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open word list '{}'", path.string()));
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
        const auto start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        words.push_back(line.substr(start));
    }
    return words;
}

namespace {

using nlohmann::json;

class Collector {
public:
    explicit Collector(const std::filesystem::path& base) : base_(base) {}

    void error(const std::string& field, const std::string& what) { errors_.push_back(field + ": " + what); }

    template <typename T>
    std::optional<T> get(const json& obj, const std::string& key, const std::string& field, bool required) {
        if (!obj.is_object() || !obj.contains(key)) {
            if (required) error(field, "required field missing");
            return std::nullopt;
        }
        try {
            return obj.at(key).get<T>();
        } catch (const json::exception&) {
            error(field, fmt::format("wrong type ({})", obj.at(key).type_name()));
            return std::nullopt;
        }
    }

    bool readable(const std::string& field, const std::string& path) {
        std::filesystem::path p(path);
        if (!p.is_absolute()) p = base_ / p;
        std::ifstream in(p);
        if (!in) {
            error(field, fmt::format("file not readable: {}", p.string()));
            return false;
        }
        return true;
    }

    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::filesystem::path base_;
    std::vector<std::string> errors_;
};

std::optional<TopicWordset> parse_topic(const json& j, const std::string& field, Collector& c, const RunConfig& cfg,
                                        std::optional<std::string>& file) {
    if (!j.is_object()) {
        c.error(field, "must be an object with 'label' and 'words' or 'file'");
        return std::nullopt;
    }
    TopicWordset topic;
    topic.label = c.get<std::string>(j, "label", field + ".label", true).value_or("");
    if (j.contains("words")) {
        auto words = c.get<std::vector<std::string>>(j, "words", field + ".words", true);
        if (!words) return std::nullopt;
        topic.words = *words;
    } else if (j.contains("file")) {
        file = c.get<std::string>(j, "file", field + ".file", true);
        if (!file || !c.readable(field + ".file", *file)) return std::nullopt;
        topic.words = read_word_list(cfg.resolve(*file));
    } else {
        c.error(field, "needs 'words' or 'file'");
        return std::nullopt;
    }
    try {
        validate(topic);
    } catch (const ValidationError& e) {
        c.error(field, e.what());
    }
    return topic;
}

} // namespace

RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    cfg.base_dir = base_dir;
    Collector c(base_dir);
    if (!j.is_object()) throw ConfigError({"<root>: config must be a JSON object"});

    static const std::vector<std::string> known = {"embeddings", "alignment", "topic",  "topic_y", "poles",
                                                   "refinement", "permutations", "tail", "outputs", "weat",
                                                   "notes"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end()) c.error(key, "unknown field");

    // embeddings
    if (!j.contains("embeddings") || !j["embeddings"].is_array()) {
        c.error("embeddings", "required array of {label, path, frequencies?}");
    } else {
        const auto& arr = j["embeddings"];
        if (arr.empty() || arr.size() > 2) c.error("embeddings", fmt::format("expected 1 or 2 entries, got {}", arr.size()));
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string f = fmt::format("embeddings[{}]", i);
            SpaceEntry e;
            e.label = c.get<std::string>(arr[i], "label", f + ".label", true).value_or("");
            if (arr[i].is_object() && arr[i].contains("label") && e.label.empty()) c.error(f + ".label", "must be nonempty");
            e.path = c.get<std::string>(arr[i], "path", f + ".path", true).value_or("");
            if (!e.path.empty()) c.readable(f + ".path", e.path);
            e.frequencies = c.get<std::string>(arr[i], "frequencies", f + ".frequencies", false);
            if (e.frequencies) c.readable(f + ".frequencies", *e.frequencies);
            cfg.embeddings.push_back(std::move(e));
        }
        if (cfg.embeddings.size() == 2 && !cfg.embeddings[0].label.empty() &&
            cfg.embeddings[0].label == cfg.embeddings[1].label)
            c.error("embeddings", "labels must be distinct");
    }

    // alignment
    if (j.contains("alignment")) {
        const auto& a = j["alignment"];
        if (auto mode = c.get<std::string>(a, "mode", "alignment.mode", false)) {
            if (*mode == "pre_aligned") cfg.alignment.mode = AlignmentMode::pre_aligned;
            else if (*mode == "procrustes") cfg.alignment.mode = AlignmentMode::procrustes;
            else c.error("alignment.mode", fmt::format("unknown mode '{}' (pre_aligned | procrustes)", *mode));
        }
        if (a.is_object() && a.contains("anchors")) {
            const auto& an = a["anchors"];
            if (an.is_array()) {
                cfg.alignment.anchor_words = c.get<std::vector<std::string>>(a, "anchors", "alignment.anchors", true);
                if (cfg.alignment.anchor_words && cfg.alignment.anchor_words->empty())
                    c.error("alignment.anchors", "anchor list is empty");
            } else if (an.is_string()) {
                if (an.get<std::string>() != "auto") {
                    cfg.alignment.anchor_file = an.get<std::string>();
                    c.readable("alignment.anchors", *cfg.alignment.anchor_file);
                }
            } else {
                c.error("alignment.anchors", "expected \"auto\", a file path, or a word list");
            }
        }
        cfg.alignment.center = c.get<bool>(a, "center", "alignment.center", false).value_or(true);
    }

    // topics
    if (j.contains("topic")) cfg.topic = parse_topic(j["topic"], "topic", c, cfg, cfg.topic_file);
    if (j.contains("topic_y")) cfg.topic_y = parse_topic(j["topic_y"], "topic_y", c, cfg, cfg.topic_y_file);

    // poles
    if (j.contains("poles")) {
        const auto& p = j["poles"];
        if (p.is_object() && p.contains("lexicon")) {
            cfg.lexicon_file = c.get<std::string>(p, "lexicon", "poles.lexicon", true);
            if (cfg.lexicon_file && c.readable("poles.lexicon", *cfg.lexicon_file)) {
                try {
                    Lexicon lex = load_lexicon(cfg.resolve(*cfg.lexicon_file));
                    cfg.poles = lex.poles;
                    cfg.poles_provenance = lex.provenance;
                } catch (const Error& e) {
                    c.error("poles.lexicon", e.what());
                }
            }
        } else {
            cfg.poles.label_a = c.get<std::string>(p, "label_a", "poles.label_a", true).value_or("");
            cfg.poles.label_b = c.get<std::string>(p, "label_b", "poles.label_b", true).value_or("");
            cfg.poles.words_a = c.get<std::vector<std::string>>(p, "words_a", "poles.words_a", true).value_or(std::vector<std::string>{});
            cfg.poles.words_b = c.get<std::vector<std::string>>(p, "words_b", "poles.words_b", true).value_or(std::vector<std::string>{});
            cfg.poles_provenance = c.get<std::string>(p, "provenance", "poles.provenance", false).value_or("");
            if (!cfg.poles.words_a.empty() && !cfg.poles.words_b.empty()) {
                try {
                    validate(cfg.poles);
                } catch (const ValidationError& e) {
                    c.error("poles", e.what());
                }
            } else if (p.is_object() && p.contains("words_a") && p.contains("words_b")) {
                c.error("poles", "pole wordsets must both be nonempty");
            }
        }
    }

    // refinement
    if (j.contains("refinement")) {
        const auto& r = j["refinement"];
        cfg.refinement.enabled = c.get<bool>(r, "enabled", "refinement.enabled", false).value_or(false);
        cfg.refinement.zipf_threshold =
            c.get<double>(r, "zipf_threshold", "refinement.zipf_threshold", false).value_or(5.0);
    }

    // permutations
    if (j.contains("permutations")) {
        const auto& p = j["permutations"];
        if (auto mode = c.get<std::string>(p, "mode", "permutations.mode", false)) {
            try {
                cfg.permutations.mode = parse_permutation_mode(*mode);
            } catch (const ValidationError& e) {
                c.error("permutations.mode", e.what());
            }
        }
        cfg.permutations.samples = c.get<std::uint64_t>(p, "samples", "permutations.samples", false).value_or(10'000);
        cfg.permutations.seed = c.get<std::uint64_t>(p, "seed", "permutations.seed", false).value_or(0);
        cfg.permutations.exact_limit =
            c.get<std::uint64_t>(p, "exact_limit", "permutations.exact_limit", false).value_or(500'000);
        cfg.permutations.threads = c.get<int>(p, "threads", "permutations.threads", false).value_or(0);
        try {
            validate(cfg.permutations);
        } catch (const ValidationError& e) {
            c.error("permutations", e.what());
        }
    }
    if (auto tail = c.get<std::string>(j, "tail", "tail", false)) {
        try {
            cfg.permutations.tail = parse_tail_mode(*tail);
        } catch (const ValidationError& e) {
            c.error("tail", e.what());
        }
    }

    // outputs
    if (j.contains("outputs")) {
        const auto& o = j["outputs"];
        cfg.outputs.report = c.get<std::string>(o, "report", "outputs.report", false);
        cfg.outputs.cumulative_svg = c.get<std::string>(o, "cumulative_svg", "outputs.cumulative_svg", false);
        cfg.outputs.detail_svg = c.get<std::string>(o, "detail_svg", "outputs.detail_svg", false);
        cfg.outputs.plot_json = c.get<bool>(o, "plot_json", "outputs.plot_json", false).value_or(false);
        cfg.outputs.space1_on_top = c.get<bool>(o, "space1_on_top", "outputs.space1_on_top", false).value_or(true);
        cfg.outputs.color_a = c.get<std::string>(o, "color_a", "outputs.color_a", false).value_or(cfg.outputs.color_a);
        cfg.outputs.color_b = c.get<std::string>(o, "color_b", "outputs.color_b", false).value_or(cfg.outputs.color_b);
    }

    if (j.contains("weat")) {
        cfg.weat_space = c.get<std::size_t>(j["weat"], "space", "weat.space", false).value_or(0);
        if (cfg.weat_space >= std::max<std::size_t>(cfg.embeddings.size(), 1))
            c.error("weat.space", fmt::format("index {} out of range", cfg.weat_space));
    }
    cfg.notes = c.get<std::string>(j, "notes", "notes", false).value_or("");

    if (!c.errors().empty()) throw ConfigError(c.errors());
    return cfg;
}

RunConfig validate_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open config '{}'", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') ++line, col = 1;
            else ++col;
        }
        throw ConfigError({fmt::format("{}:{}:{}: JSON parse error: {}", path.string(), line, col, e.what())});
    }
    return parse_config(j, path.parent_path());
}

nlohmann::json config_echo(const RunConfig& cfg) {
    using nlohmann::json;
    json j;
    j["embeddings"] = json::array();
    for (const auto& e : cfg.embeddings) {
        json entry = {{"label", e.label}, {"path", e.path}};
        entry["frequencies"] = e.frequencies ? json(*e.frequencies) : json(nullptr);
        j["embeddings"].push_back(entry);
    }
    json anchors = "auto";
    if (cfg.alignment.anchor_words) anchors = *cfg.alignment.anchor_words;
    if (cfg.alignment.anchor_file) anchors = *cfg.alignment.anchor_file;
    j["alignment"] = {{"mode", cfg.alignment.mode == AlignmentMode::procrustes ? "procrustes" : "pre_aligned"},
                      {"anchors", anchors},
                      {"center", cfg.alignment.center}};
    const auto topic_json = [](const std::optional<TopicWordset>& t, const std::optional<std::string>& file) {
        if (!t) return json(nullptr);
        json o = {{"label", t->label}, {"words", t->words}};
        if (file) o["file"] = *file;
        return o;
    };
    j["topic"] = topic_json(cfg.topic, cfg.topic_file);
    j["topic_y"] = topic_json(cfg.topic_y, cfg.topic_y_file);
    j["poles"] = {{"label_a", cfg.poles.label_a},
                  {"label_b", cfg.poles.label_b},
                  {"words_a", cfg.poles.words_a},
                  {"words_b", cfg.poles.words_b},
                  {"provenance", cfg.poles_provenance}};
    if (cfg.lexicon_file) j["poles"]["lexicon"] = *cfg.lexicon_file;
    j["refinement"] = {{"enabled", cfg.refinement.enabled}, {"zipf_threshold", cfg.refinement.zipf_threshold}};
    j["permutations"] = {{"mode", to_string(cfg.permutations.mode)},
                         {"samples", cfg.permutations.samples},
                         {"seed", cfg.permutations.seed},
                         {"exact_limit", cfg.permutations.exact_limit}};
    j["tail"] = to_string(cfg.permutations.tail);
    const auto opt = [](const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); };
    j["outputs"] = {{"report", opt(cfg.outputs.report)},
                    {"cumulative_svg", opt(cfg.outputs.cumulative_svg)},
                    {"detail_svg", opt(cfg.outputs.detail_svg)},
                    {"plot_json", cfg.outputs.plot_json},
                    {"space1_on_top", cfg.outputs.space1_on_top},
                    {"color_a", cfg.outputs.color_a},
                    {"color_b", cfg.outputs.color_b}};
    j["weat"] = {{"space", cfg.weat_space}};
    j["notes"] = cfg.notes;
    return j;
}

} // namespace sweat
