#ifndef SWEAT_CONFIG_HPP
#define SWEAT_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sweat/association.hpp"
#include "sweat/error.hpp"

namespace sweat {

/// Every problem found while validating a config, each prefixed with its field path.
class ConfigError : public ValidationError {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const noexcept { return errors_; }

private:
    std::vector<std::string> errors_;
};

struct SpaceEntry {
    std::string label;
    std::string path; // as written in the config
    std::optional<std::string> frequencies;
};

enum class AlignmentMode { pre_aligned, procrustes };

struct AlignmentConfig {
    AlignmentMode mode = AlignmentMode::pre_aligned;
    std::optional<std::vector<std::string>> anchor_words; // inline list
    std::optional<std::string> anchor_file;               // neither set: auto
    bool center = true;
};

struct RefinementConfig {
    bool enabled = false;
    double zipf_threshold = 5.0;
};

struct OutputConfig {
    std::optional<std::string> report;
    std::optional<std::string> cumulative_svg;
    std::optional<std::string> detail_svg;
    bool plot_json = false;
    bool space1_on_top = true;
    std::string color_a = "#2b83ba";
    std::string color_b = "#d7191c";
};

struct RunConfig {
    std::filesystem::path base_dir; // relative paths resolve against this
    std::vector<SpaceEntry> embeddings;
    AlignmentConfig alignment;
    std::optional<TopicWordset> topic;
    std::optional<std::string> topic_file;
    std::optional<TopicWordset> topic_y;
    std::optional<std::string> topic_y_file;
    PoleWordsets poles;
    std::optional<std::string> lexicon_file;
    std::string poles_provenance;
    RefinementConfig refinement;
    PermutationConfig permutations;
    OutputConfig outputs;
    std::size_t weat_space = 0;
    std::string notes;

    std::filesystem::path resolve(const std::string& path) const;
};

/// Parses and validates; throws ConfigError listing all problems, or IoError
/// when the file itself cannot be read.
RunConfig validate_config(const std::filesystem::path& path);
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// Normalised config with defaults filled in, paths as written.
nlohmann::json config_echo(const RunConfig& cfg);

/// One word per line; blank lines and '#' comments skipped.
std::vector<std::string> read_word_list(const std::filesystem::path& path);

} // namespace sweat

#endif
