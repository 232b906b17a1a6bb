// sweatkit: command-line front end for the SWEAT toolkit.

#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sweat/commands.hpp"
#include "sweat/report.hpp"

namespace {

struct ConfigOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::optional<std::string> tail;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
};

void add_config_options(CLI::App* cmd, ConfigOptions& o, bool overrides) {
    cmd->add_option("--config", o.config, "JSON run configuration")->required();
    cmd->add_option("--out-dir", o.out_dir, "directory for relative output paths");
    if (!overrides) return;
    cmd->add_option("--seed", o.seed, "Monte Carlo seed");
    cmd->add_option("--samples", o.samples, "Monte Carlo sample count");
    cmd->add_option("--tail", o.tail, "directional | two_sided");
    cmd->add_option("--threads", o.threads, "worker threads for the permutation loop");
}

std::pair<sweat::RunConfig, sweat::Overrides> load(const ConfigOptions& o) {
    sweat::RunConfig cfg = sweat::validate_config(o.config);
    sweat::Overrides ov;
    ov.seed = o.seed;
    ov.samples = o.samples;
    ov.threads = o.threads;
    if (o.tail) ov.tail = sweat::parse_tail_mode(*o.tail);
    if (o.out_dir) ov.out_dir = *o.out_dir;
    sweat::apply_overrides(cfg, ov);
    return {std::move(cfg), std::move(ov)};
}

void print_summary(const nlohmann::json& report) {
    const auto& r = report["result"];
    std::cout << fmt::format("score {:.4f}  effect size {:.4f}  p {:.4g} ({} {}, {} permutations)\n",
                             r["score"].get<double>(), r["effect_size"].get<double>(), r["p_value"].get<double>(),
                             r["method"].get<std::string>(), r["tail"].get<std::string>(),
                             r["n_permutations"].get<std::uint64_t>());
    for (const auto& a : r["associations"]) std::cout << "  " << a.get<std::string>() << '\n';
    for (const auto& w : report.value("warnings", nlohmann::json::array()))
        std::cerr << "warning: " << w.get<std::string>() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sliced word embedding association tests across aligned embedding spaces"};
    app.require_subcommand(1);
    app.set_version_flag("--version", sweat::kToolkitVersion);

    ConfigOptions sweat_opts, weat_opts, refine_opts, cand_opts;
    auto* sweat_cmd = app.add_subcommand("sweat", "SWEAT score, effect size and permutation p-value");
    add_config_options(sweat_cmd, sweat_opts, true);
    auto* weat_cmd = app.add_subcommand("weat", "classic WEAT within one space (topic vs topic_y)");
    add_config_options(weat_cmd, weat_opts, true);

    auto* refine_cmd = app.add_subcommand("refine", "filter a pole lexicon by round-trip stability and Zipf frequency");
    add_config_options(refine_cmd, refine_opts, false);
    std::optional<std::string> refine_out;
    refine_cmd->add_option("--out", refine_out, "report path");

    sweat::AlignArgs align;
    std::optional<std::string> align_report, src_freq, tgt_freq;
    bool no_center = false;
    auto* align_cmd = app.add_subcommand("align", "orthogonal Procrustes alignment of --source onto --target");
    align_cmd->add_option("--source", align.source)->required();
    align_cmd->add_option("--target", align.target)->required();
    align_cmd->add_option("--anchors", align.anchors, "word-list file or 'auto'")->capture_default_str();
    align_cmd->add_option("--out", align.out, "aligned word2vec text file")->required();
    align_cmd->add_option("--report", align_report, "JSON report path");
    align_cmd->add_option("--source-freq", src_freq, "frequency table for auto anchors");
    align_cmd->add_option("--target-freq", tgt_freq, "frequency table for auto anchors");
    align_cmd->add_option("--zipf-threshold", align.zipf_threshold)->capture_default_str();
    align_cmd->add_flag("--no-center", no_center, "pure rotation, no mean-centring");

    std::optional<std::string> stopwords, cand_out;
    std::size_t top = 100;
    auto* cand_cmd = app.add_subcommand("candidates", "shared-vocabulary words ranked by mean Zipf score");
    add_config_options(cand_cmd, cand_opts, false);
    cand_cmd->add_option("--stopwords", stopwords, "one stopword per line");
    cand_cmd->add_option("--top", top)->capture_default_str();
    cand_cmd->add_option("--out", cand_out, "write JSON instead of TSV to stdout");

    std::string plot_report;
    std::optional<std::string> plot_cumulative, plot_detail, plot_dir;
    auto* plot_cmd = app.add_subcommand("plot", "re-render SVGs from a saved sweat report");
    plot_cmd->add_option("--report", plot_report)->required();
    plot_cmd->add_option("--cumulative", plot_cumulative, "cumulative chart path");
    plot_cmd->add_option("--detail", plot_detail, "detail chart path");
    plot_cmd->add_option("--out-dir", plot_dir, "writes cumulative.svg and detail.svg here");

    std::optional<std::string> inspect_emb, inspect_freq;
    auto* inspect_cmd = app.add_subcommand("inspect", "vocabulary listing (word<TAB>norm) or frequency summary");
    inspect_cmd->add_option("--embeddings", inspect_emb);
    inspect_cmd->add_option("--frequencies", inspect_freq);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*sweat_cmd) {
            auto [cfg, ov] = load(sweat_opts);
            print_summary(sweat::command_sweat(cfg, ov));
        } else if (*weat_cmd) {
            auto [cfg, ov] = load(weat_opts);
            print_summary(sweat::command_weat(cfg, ov));
        } else if (*refine_cmd) {
            auto [cfg, ov] = load(refine_opts);
            std::optional<std::filesystem::path> out;
            if (refine_out) out = *refine_out;
            const auto report = sweat::command_refine(cfg, ov, out);
            const auto& r = report["refinement"];
            std::cout << fmt::format("kept {} + {} words, rejected {}\n", r["kept_a"].size(), r["kept_b"].size(),
                                     r["rejected"].size());
            for (const auto& x : r["rejected"])
                std::cout << "  " << x["word"].get<std::string>() << '\t' << x["reason"].get<std::string>() << '\n';
        } else if (*align_cmd) {
            if (align_report) align.report = *align_report;
            if (src_freq) align.source_frequencies = *src_freq;
            if (tgt_freq) align.target_frequencies = *tgt_freq;
            align.center = !no_center;
            const auto report = sweat::command_align(align);
            std::cout << fmt::format("aligned {} anchors, residual {:.3e}\n",
                                     report["alignment"]["n_anchors"].get<std::size_t>(),
                                     report["alignment"]["residual"].get<double>());
            for (const auto& w : report["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
        } else if (*cand_cmd) {
            auto [cfg, ov] = load(cand_opts);
            std::optional<std::filesystem::path> stop;
            if (stopwords) stop = *stopwords;
            const auto cands = sweat::command_candidates(cfg, stop, top);
            if (cand_out) {
                nlohmann::json j = nlohmann::json::array();
                for (const auto& c : cands) j.push_back({{"word", c.word}, {"mean_zipf", c.mean_zipf}});
                sweat::write_json_file(j, sweat::output_path(cfg, ov, *cand_out));
            } else {
                for (const auto& c : cands) std::cout << fmt::format("{}\t{:.4f}\n", c.word, c.mean_zipf);
            }
        } else if (*plot_cmd) {
            std::optional<std::filesystem::path> cumulative, detail;
            if (plot_cumulative) cumulative = *plot_cumulative;
            if (plot_detail) detail = *plot_detail;
            if (plot_dir) {
                std::filesystem::create_directories(*plot_dir);
                if (!cumulative) cumulative = std::filesystem::path(*plot_dir) / "cumulative.svg";
                if (!detail) detail = std::filesystem::path(*plot_dir) / "detail.svg";
            }
            if (!cumulative && !detail) throw sweat::ValidationError("plot: give --cumulative, --detail or --out-dir");
            sweat::command_plot(plot_report, cumulative, detail);
        } else if (*inspect_cmd) {
            if (!inspect_emb && !inspect_freq) throw sweat::ValidationError("inspect: give --embeddings or --frequencies");
            if (inspect_emb) sweat::inspect_embeddings(*inspect_emb, std::cout);
            if (inspect_freq) sweat::inspect_frequencies(*inspect_freq, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return sweat::exit_code_for(e);
    }
    return 0;
}
