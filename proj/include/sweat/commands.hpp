#ifndef SWEAT_COMMANDS_HPP
#define SWEAT_COMMANDS_HPP

// Command implementations behind the sweatkit CLI. They live in the library
// so tests can drive full pipelines in-process.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "sweat/config.hpp"
#include "sweat/lexicon.hpp"

namespace sweat {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::optional<TailMode> tail;
    std::optional<std::filesystem::path> out_dir;
    std::optional<int> threads;
};

void apply_overrides(RunConfig& cfg, const Overrides& overrides);

/// Output paths resolve against --out-dir when given, else the config directory.
std::filesystem::path output_path(const RunConfig& cfg, const Overrides& overrides, const std::string& path);

/// Full SWEAT pipeline: load, optional alignment, optional refinement, test,
/// plots. Writes the report and requested plots; returns the report.
nlohmann::json command_sweat(const RunConfig& cfg, const Overrides& overrides = {});
nlohmann::json command_weat(const RunConfig& cfg, const Overrides& overrides = {});
nlohmann::json command_refine(const RunConfig& cfg, const Overrides& overrides = {},
                              const std::optional<std::filesystem::path>& out = std::nullopt);

struct AlignArgs {
    std::filesystem::path source;
    std::filesystem::path target;
    std::string anchors = "auto"; // "auto" or a word-list file
    std::filesystem::path out;
    std::optional<std::filesystem::path> report;
    std::optional<std::filesystem::path> source_frequencies;
    std::optional<std::filesystem::path> target_frequencies;
    double zipf_threshold = 5.0;
    bool center = true;
};

nlohmann::json command_align(const AlignArgs& args);

std::vector<Candidate> command_candidates(const RunConfig& cfg,
                                          const std::optional<std::filesystem::path>& stopwords, std::size_t top);

/// Re-renders the plots embedded in a saved SWEAT report.
void command_plot(const std::filesystem::path& report, const std::optional<std::filesystem::path>& cumulative,
                  const std::optional<std::filesystem::path>& detail);

/// `word<TAB>norm` per vocabulary entry.
void inspect_embeddings(const std::filesystem::path& path, std::ostream& out);
/// `word<TAB>count<TAB>zipf` sorted by count, after a summary line.
void inspect_frequencies(const std::filesystem::path& path, std::ostream& out);

/// 1 validation, 2 data, 3 I/O.
int exit_code_for(const std::exception& e);

} // namespace sweat

#endif
