#include "sweat/commands.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <iostream>
#include <omp.h>

#include <fmt/format.h>

#include "sweat/alignment.hpp"
#include "sweat/report.hpp"
#include "sweat/viz.hpp"

namespace sweat {

using nlohmann::json;

namespace {

class Stopwatch {
public:
    void lap(const std::string& name) {
        const auto now = std::chrono::steady_clock::now();
        timings_[name] = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
    }
    json timings() const { return timings_; }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
    json timings_ = json::object();
};

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json make_meta(const Stopwatch& watch) {
    return {{"generated_at", utc_now()}, {"timings_ms", watch.timings()}, {"threads", omp_get_max_threads()}};
}

json report_skeleton(const std::string& command, const RunConfig& cfg) {
    return {{"schema_version", kSchemaVersion},
            {"toolkit_version", kToolkitVersion},
            {"command", command},
            {"status", "ok"},
            {"config", config_echo(cfg)}};
}

struct Prepared {
    std::vector<EmbeddingSpace> spaces;
    std::vector<std::optional<FrequencyTable>> tables;
    std::optional<AlignmentReport> alignment;
    std::vector<std::string> warnings;
};

Prepared prepare(const RunConfig& cfg, Stopwatch& watch, std::size_t needed) {
    if (cfg.embeddings.size() < needed)
        throw ValidationError(fmt::format("embeddings: this command needs {} entries", needed));
    Prepared p;
    for (const auto& e : cfg.embeddings) {
        p.spaces.push_back(load_word2vec_text(cfg.resolve(e.path), e.label));
        p.tables.push_back(e.frequencies ? std::optional(load_frequency_table(cfg.resolve(*e.frequencies)))
                                         : std::nullopt);
    }
    watch.lap("load");

    if (cfg.alignment.mode == AlignmentMode::procrustes && p.spaces.size() == 2) {
        std::vector<std::string> anchors;
        if (cfg.alignment.anchor_words) {
            anchors = *cfg.alignment.anchor_words;
        } else if (cfg.alignment.anchor_file) {
            anchors = read_word_list(cfg.resolve(*cfg.alignment.anchor_file));
        } else if (p.tables[0] && p.tables[1]) {
            anchors = frequent_shared_words(p.spaces[0], p.spaces[1], *p.tables[0], *p.tables[1],
                                            cfg.refinement.zipf_threshold);
            if (anchors.empty()) {
                p.warnings.push_back("no shared word passes the Zipf threshold; anchoring on the full shared vocabulary");
                anchors = shared_vocabulary(p.spaces[0], p.spaces[1]);
            }
        } else {
            anchors = shared_vocabulary(p.spaces[0], p.spaces[1]);
        }
        // space 2 is mapped into the coordinates of space 1
        auto result = procrustes_align(p.spaces[1], p.spaces[0], anchors, {cfg.alignment.center});
        if (result.report.underdetermined)
            p.warnings.push_back(fmt::format("alignment is underdetermined ({} anchors, dimension {})",
                                             result.report.anchors_used.size(), p.spaces[0].dimension()));
        p.spaces[1] = std::move(result.aligned);
        p.alignment = std::move(result.report);
        watch.lap("alignment");
    }
    return p;
}

PoleWordsets refined_poles(const RunConfig& cfg, const Prepared& p, json& report) {
    if (!cfg.refinement.enabled) {
        report["refinement"] = nullptr;
        return cfg.poles;
    }
    const FrequencyTable* t1 = p.tables[0] ? &*p.tables[0] : nullptr;
    const FrequencyTable* t2 = p.tables.size() > 1 && p.tables[1] ? &*p.tables[1] : nullptr;
    if ((t1 == nullptr) != (t2 == nullptr)) t1 = t2 = nullptr;
    const EmbeddingSpace& s2 = p.spaces.size() > 1 ? p.spaces[1] : p.spaces[0];
    auto r = refine({cfg.poles, cfg.poles_provenance}, {p.spaces[0], s2, t1, t2, cfg.refinement.zipf_threshold});
    report["refinement"] = to_json(r);
    report["refinement"]["frequency_filter"] = t1 != nullptr;
    if (r.kept_a.empty() || r.kept_b.empty())
        throw DataError(fmt::format("refinement left an empty pole ('{}': {} words, '{}': {} words)", cfg.poles.label_a,
                                    r.kept_a.size(), cfg.poles.label_b, r.kept_b.size()));
    return r.kept_poles(cfg.poles);
}

void write_error_report(const std::string& command, const RunConfig& cfg, const Overrides& ov, const Error& e,
                        int code) {
    const std::string name = cfg.outputs.report.value_or(command + "_report.json");
    json j = report_skeleton(command, cfg);
    j["status"] = "error";
    j["error"] = {{"exit_code", code}, {"message", e.what()}};
    if (const auto* m = dynamic_cast<const MissingWordsError*>(&e)) {
        json missing = json::array();
        for (const auto& g : m->missing()) missing.push_back({{"space", g.space}, {"words", g.words}});
        j["error"]["missing_words"] = missing;
    }
    try {
        write_json_file(j, output_path(cfg, ov, name));
    } catch (const IoError&) {
        // the original error is what matters
    }
}

template <typename Body>
json guarded(const std::string& command, const RunConfig& cfg, const Overrides& ov, Body body) {
    try {
        return body();
    } catch (const DataError& e) {
        write_error_report(command, cfg, ov, e, 2);
        throw;
    }
}

PlotStyle style_of(const RunConfig& cfg) {
    PlotStyle s;
    s.color_a = cfg.outputs.color_a;
    s.color_b = cfg.outputs.color_b;
    s.space1_on_top = cfg.outputs.space1_on_top;
    return s;
}

PlotStyle style_of(const json& echo) {
    PlotStyle s;
    if (echo.contains("outputs")) {
        const auto& o = echo["outputs"];
        s.color_a = o.value("color_a", s.color_a);
        s.color_b = o.value("color_b", s.color_b);
        s.space1_on_top = o.value("space1_on_top", s.space1_on_top);
    }
    return s;
}

} // namespace

void apply_overrides(RunConfig& cfg, const Overrides& ov) {
    if (ov.seed) cfg.permutations.seed = *ov.seed;
    if (ov.samples) cfg.permutations.samples = *ov.samples;
    if (ov.tail) cfg.permutations.tail = *ov.tail;
    if (ov.threads) cfg.permutations.threads = *ov.threads;
    validate(cfg.permutations);
}

std::filesystem::path output_path(const RunConfig& cfg, const Overrides& ov, const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_absolute()) return p;
    return (ov.out_dir ? *ov.out_dir : cfg.base_dir) / p;
}

json command_sweat(const RunConfig& base, const Overrides& ov) {
    RunConfig cfg = base;
    apply_overrides(cfg, ov);
    return guarded("sweat", cfg, ov, [&] {
        if (!cfg.topic) throw ValidationError("topic: required for sweat");
        if (cfg.poles.words_a.empty()) throw ValidationError("poles: required for sweat");
        Stopwatch watch;
        json report = report_skeleton("sweat", cfg);
        Prepared p = prepare(cfg, watch, 2);
        report["alignment"] = p.alignment ? to_json(*p.alignment) : json(nullptr);
        const PoleWordsets poles = refined_poles(cfg, p, report);
        if (cfg.refinement.enabled) watch.lap("refinement");

        const SweatResult result = run_sweat(*cfg.topic, p.spaces[0], p.spaces[1], poles, cfg.permutations);
        report["result"] = to_json(result);
        report["result"]["seed"] = cfg.permutations.seed;
        watch.lap("sweat");

        const auto cumulative = cumulative_data(*cfg.topic, p.spaces[0], p.spaces[1], poles);
        const auto detail = detail_data(*cfg.topic, p.spaces[0], p.spaces[1], poles);
        report["plots"] = {{"cumulative", cumulative}, {"detail", detail}};
        const PlotStyle style = style_of(cfg);
        if (cfg.outputs.cumulative_svg) render_cumulative(cumulative, output_path(cfg, ov, *cfg.outputs.cumulative_svg), style);
        if (cfg.outputs.detail_svg) render_detail(detail, output_path(cfg, ov, *cfg.outputs.detail_svg), style);
        if (cfg.outputs.plot_json) {
            write_json_file(json(cumulative), output_path(cfg, ov, "cumulative_plot.json"));
            write_json_file(json(detail), output_path(cfg, ov, "detail_plot.json"));
        }
        watch.lap("plots");

        report["warnings"] = p.warnings;
        report["meta"] = make_meta(watch);
        write_json_file(report, output_path(cfg, ov, cfg.outputs.report.value_or("sweat_report.json")));
        return report;
    });
}

json command_weat(const RunConfig& base, const Overrides& ov) {
    RunConfig cfg = base;
    apply_overrides(cfg, ov);
    return guarded("weat", cfg, ov, [&] {
        if (!cfg.topic || !cfg.topic_y) throw ValidationError("topic, topic_y: both required for weat");
        if (cfg.poles.words_a.empty()) throw ValidationError("poles: required for weat");
        Stopwatch watch;
        json report = report_skeleton("weat", cfg);
        Prepared p = prepare(cfg, watch, cfg.weat_space + 1);
        report["alignment"] = p.alignment ? to_json(*p.alignment) : json(nullptr);
        const PoleWordsets poles = refined_poles(cfg, p, report);
        const WeatResult result =
            run_weat(*cfg.topic, *cfg.topic_y, p.spaces[cfg.weat_space], poles, cfg.permutations);
        report["result"] = to_json(result);
        report["result"]["seed"] = cfg.permutations.seed;
        watch.lap("weat");
        report["warnings"] = p.warnings;
        report["meta"] = make_meta(watch);
        write_json_file(report, output_path(cfg, ov, cfg.outputs.report.value_or("weat_report.json")));
        return report;
    });
}

json command_refine(const RunConfig& base, const Overrides& ov, const std::optional<std::filesystem::path>& out) {
    RunConfig cfg = base;
    apply_overrides(cfg, ov);
    if (cfg.poles.words_a.empty()) throw ValidationError("poles: required for refine");
    Stopwatch watch;
    Prepared p = prepare(cfg, watch, 2);
    const FrequencyTable* t1 = p.tables[0] ? &*p.tables[0] : nullptr;
    const FrequencyTable* t2 = p.tables[1] ? &*p.tables[1] : nullptr;
    if ((t1 == nullptr) != (t2 == nullptr)) throw ValidationError("embeddings: give frequency tables for both or neither");
    const auto r = refine({cfg.poles, cfg.poles_provenance}, {p.spaces[0], p.spaces[1], t1, t2, cfg.refinement.zipf_threshold});
    watch.lap("refinement");
    json report = report_skeleton("refine", cfg);
    report["alignment"] = p.alignment ? to_json(*p.alignment) : json(nullptr);
    report["refinement"] = to_json(r);
    report["refinement"]["frequency_filter"] = t1 != nullptr;
    report["warnings"] = p.warnings;
    report["meta"] = make_meta(watch);
    write_json_file(report, out ? *out : output_path(cfg, ov, cfg.outputs.report.value_or("refine_report.json")));
    return report;
}

json command_align(const AlignArgs& args) {
    Stopwatch watch;
    const auto source = load_word2vec_text(args.source);
    const auto target = load_word2vec_text(args.target);
    watch.lap("load");
    std::vector<std::string> anchors;
    std::vector<std::string> warnings;
    if (args.anchors != "auto") {
        anchors = read_word_list(args.anchors);
    } else if (args.source_frequencies && args.target_frequencies) {
        anchors = frequent_shared_words(source, target, load_frequency_table(*args.source_frequencies),
                                        load_frequency_table(*args.target_frequencies), args.zipf_threshold);
        if (anchors.empty()) {
            warnings.push_back("no shared word passes the Zipf threshold; anchoring on the full shared vocabulary");
            anchors = shared_vocabulary(source, target);
        }
    } else {
        anchors = shared_vocabulary(source, target);
    }
    auto result = procrustes_align(source, target, anchors, {args.center});
    watch.lap("alignment");
    if (result.report.underdetermined)
        warnings.push_back(fmt::format("alignment is underdetermined ({} anchors, dimension {})",
                                       result.report.anchors_used.size(), source.dimension()));
    save_word2vec_text(result.aligned, args.out);
    watch.lap("write");
    json report = {{"schema_version", kSchemaVersion},
                   {"toolkit_version", kToolkitVersion},
                   {"command", "align"},
                   {"status", "ok"},
                   {"alignment", to_json(result.report, true)},
                   {"warnings", warnings},
                   {"meta", make_meta(watch)}};
    if (args.report) write_json_file(report, *args.report);
    return report;
}

std::vector<Candidate> command_candidates(const RunConfig& cfg, const std::optional<std::filesystem::path>& stopwords,
                                          std::size_t top) {
    Stopwatch watch;
    Prepared p = prepare(cfg, watch, 2);
    if (!p.tables[0] || !p.tables[1])
        throw ValidationError("embeddings: candidates needs a frequency table for both spaces");
    std::vector<std::string> stop;
    if (stopwords) stop = read_word_list(*stopwords);
    return topic_candidates(p.spaces[0], p.spaces[1], *p.tables[0], *p.tables[1], stop, top);
}

void command_plot(const std::filesystem::path& report_path, const std::optional<std::filesystem::path>& cumulative,
                  const std::optional<std::filesystem::path>& detail) {
    const json report = read_json_file(report_path);
    if (!report.contains("plots") || !report["plots"].is_object())
        throw DataError(fmt::format("'{}' holds no plot data (only sweat reports do)", report_path.string()));
    const PlotStyle style = style_of(report.value("config", json::object()));
    try {
        if (cumulative) render_cumulative(report["plots"].at("cumulative").get<CumulativePlotData>(), *cumulative, style);
        if (detail) render_detail(report["plots"].at("detail").get<DetailPlotData>(), *detail, style);
    } catch (const json::exception& e) {
        throw DataError(fmt::format("'{}': malformed plot data: {}", report_path.string(), e.what()));
    }
}

void inspect_embeddings(const std::filesystem::path& path, std::ostream& out) {
    const auto space = load_word2vec_text(path);
    for (std::size_t i = 0; i < space.size(); ++i) out << space.word(i) << '\t' << fmt::format("{:.9g}", space.norm(i)) << '\n';
}

void inspect_frequencies(const std::filesystem::path& path, std::ostream& out) {
    const auto table = load_frequency_table(path);
    std::vector<std::pair<std::string, std::uint64_t>> rows(table.counts().begin(), table.counts().end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    out << fmt::format("# words {} total_tokens {}\n", table.size(), table.total_tokens());
    for (const auto& [w, c] : rows) out << fmt::format("{}\t{}\t{:.4f}\n", w, c, zipf_score(w, table));
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ValidationError*>(&e)) return 1;
    if (dynamic_cast<const IoError*>(&e)) return 3;
    return 2;
}

} // namespace sweat
