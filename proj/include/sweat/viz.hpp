#ifndef SWEAT_VIZ_HPP
#define SWEAT_VIZ_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sweat/association.hpp"
#include "sweat/embeddings.hpp"

namespace sweat {

struct CumulativeBar {
    std::string label;
    double beta_a = 0.0;
    double beta_b = 0.0;
    double cumulate = 0.0; // beta_a - beta_b
};

struct CumulativePlotData {
    std::string topic;
    std::string label_a;
    std::string label_b;
    std::vector<CumulativeBar> bars; // space1 first
};

enum class Pole { a, b };

struct WordDistribution {
    std::vector<double> delta_a; // cos(x_i, a) for a in A
    std::vector<double> delta_b;
    double mean_a = 0.0;
    double mean_b = 0.0;
    Pole dominant = Pole::a;
};

struct DetailRow {
    std::string word;
    std::vector<WordDistribution> spaces; // one per space, same order as space_labels
};

struct DetailPlotData {
    std::string topic;
    std::string label_a;
    std::string label_b;
    std::vector<std::string> space_labels;
    std::vector<DetailRow> rows;
};

CumulativePlotData cumulative_data(const TopicWordset& topic, const EmbeddingSpace& space1,
                                   const EmbeddingSpace& space2, const PoleWordsets& poles);

DetailPlotData detail_data(const TopicWordset& topic, const EmbeddingSpace& space1,
                           const EmbeddingSpace& space2, const PoleWordsets& poles);

struct BoxStats {
    double min = 0.0;
    double q1 = 0.0;
    double mean = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Quartiles by linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);
BoxStats box_stats(const std::vector<double>& values);

struct PlotStyle {
    std::string color_a = "#2b83ba";
    std::string color_b = "#d7191c";
    int width = 720;
    bool space1_on_top = true;
};

std::string render_cumulative_svg(const CumulativePlotData& data, const PlotStyle& style = {});
std::string render_detail_svg(const DetailPlotData& data, const PlotStyle& style = {});

void render_cumulative(const CumulativePlotData& data, const std::filesystem::path& path,
                       const PlotStyle& style = {});
void render_detail(const DetailPlotData& data, const std::filesystem::path& path, const PlotStyle& style = {});

void to_json(nlohmann::json& j, const CumulativePlotData& data);
void from_json(const nlohmann::json& j, CumulativePlotData& data);
void to_json(nlohmann::json& j, const DetailPlotData& data);
void from_json(const nlohmann::json& j, DetailPlotData& data);

} // namespace sweat

#endif
