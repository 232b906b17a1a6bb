#include "sweat/viz.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "sweat/error.hpp"

namespace sweat {

namespace {

struct SpaceCosines {
    std::vector<double> cos; // |W| x (|A| + |B|)
    std::size_t width = 0;
};

SpaceCosines compute(const TopicWordset& topic, const EmbeddingSpace& space, const PoleWordsets& poles) {
    return {pole_cosines(topic.words, space, poles), poles.words_a.size() + poles.words_b.size()};
}

void check_inputs(const TopicWordset& topic, const EmbeddingSpace& space1, const EmbeddingSpace& space2,
                  const PoleWordsets& poles) {
    validate(topic);
    validate(poles);
    std::vector<std::string> all = topic.words;
    all.insert(all.end(), poles.words_a.begin(), poles.words_a.end());
    all.insert(all.end(), poles.words_b.begin(), poles.words_b.end());
    const EmbeddingSpace* spaces[] = {&space1, &space2};
    require_words(all, spaces);
}

std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

// Fixed three-decimal pixel coordinates keep output byte-stable.
std::string px(double v) {
    if (v == 0.0) v = 0.0; // no "-0.000"
    auto s = fmt::format("{:.3f}", v);
    return s == "-0.000" ? "0.000" : s;
}

std::string val(double v) { return fmt::format("{:.12g}", v); }

struct Axis {
    double lo;
    double hi;
    double left;
    double right;

    double operator()(double v) const { return left + (v - lo) / (hi - lo) * (right - left); }
    double scale() const { return (right - left) / (hi - lo); }
};

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
    out << text;
    if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

std::string header(int width, int height) {
    return fmt::format("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
                       "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" "
                       "viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">\n"
                       "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
                       width, height, width, height, width, height);
}

void ticks(std::string& svg, const Axis& axis, double y, int count) {
    svg += fmt::format("<line class=\"axis\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#444444\"/>\n",
                       px(axis.left), px(y), px(axis.right), px(y));
    for (int i = 0; i <= count; ++i) {
        const double v = axis.lo + (axis.hi - axis.lo) * i / count;
        const double x = axis(v);
        svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#444444\"/>\n", px(x), px(y),
                           px(x), px(y + 4));
        svg += fmt::format("<text class=\"tick\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" data-value=\"{}\">{:.3g}</text>\n",
                           px(x), px(y + 16), val(v), std::abs(v) < 1e-15 ? 0.0 : v);
    }
}

} // namespace

CumulativePlotData cumulative_data(const TopicWordset& topic, const EmbeddingSpace& space1,
                                   const EmbeddingSpace& space2, const PoleWordsets& poles) {
    check_inputs(topic, space1, space2, poles);
    CumulativePlotData data{topic.label, poles.label_a, poles.label_b, {}};
    const std::size_t na = poles.words_a.size();
    for (const EmbeddingSpace* space : {&space1, &space2}) {
        const auto c = compute(topic, *space, poles);
        CumulativeBar bar{space->label(), 0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < topic.words.size(); ++i) {
            std::span<const double> row(c.cos.data() + i * c.width, c.width);
            bar.beta_a += mean_of(row.first(na));
            bar.beta_b += mean_of(row.subspan(na));
        }
        bar.cumulate = bar.beta_a - bar.beta_b;
        data.bars.push_back(std::move(bar));
    }
    return data;
}

DetailPlotData detail_data(const TopicWordset& topic, const EmbeddingSpace& space1, const EmbeddingSpace& space2,
                           const PoleWordsets& poles) {
    check_inputs(topic, space1, space2, poles);
    DetailPlotData data{topic.label, poles.label_a, poles.label_b, {space1.label(), space2.label()}, {}};
    const std::size_t na = poles.words_a.size();
    const auto c1 = compute(topic, space1, poles);
    const auto c2 = compute(topic, space2, poles);
    for (std::size_t i = 0; i < topic.words.size(); ++i) {
        DetailRow row{topic.words[i], {}};
        for (const SpaceCosines* c : {&c1, &c2}) {
            std::span<const double> cos(c->cos.data() + i * c->width, c->width);
            WordDistribution d;
            d.delta_a.assign(cos.begin(), cos.begin() + static_cast<std::ptrdiff_t>(na));
            d.delta_b.assign(cos.begin() + static_cast<std::ptrdiff_t>(na), cos.end());
            d.mean_a = mean_of(d.delta_a);
            d.mean_b = mean_of(d.delta_b);
            d.dominant = d.mean_a >= d.mean_b ? Pole::a : Pole::b;
            row.spaces.push_back(std::move(d));
        }
        data.rows.push_back(std::move(row));
    }
    return data;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw DataError("quantile of empty list");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + (values[hi] - values[lo]) * frac;
}

BoxStats box_stats(const std::vector<double>& values) {
    if (values.empty()) throw DataError("box statistics of empty list");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    return {*mn, quantile(values, 0.25), mean_of(values), quantile(values, 0.75), *mx};
}

std::string render_cumulative_svg(const CumulativePlotData& data, const PlotStyle& style) {
    const int width = std::max(style.width, 320);
    const double left = 140.0;
    const double right = width - 30.0;
    const double row_h = 56.0;
    const double top = 70.0;
    const int height = static_cast<int>(top + row_h * static_cast<double>(data.bars.size()) + 60.0);

    double extent = 0.0;
    for (const auto& b : data.bars)
        extent = std::max({extent, std::abs(b.beta_a), std::abs(b.beta_b), std::abs(b.cumulate)});
    if (!(extent > 0.0)) extent = 1.0;
    const Axis axis{-extent, extent, left, right};
    const double zero = axis(0.0);

    std::string svg = header(width, height);
    svg += fmt::format("<text class=\"title\" x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                       px(width / 2.0), escape(data.topic));
    svg += fmt::format("<rect x=\"{}\" y=\"34\" width=\"12\" height=\"12\" fill=\"{}\"/>"
                       "<text x=\"{}\" y=\"45\">{}</text>\n",
                       px(left), style.color_a, px(left + 16), escape(data.label_a));
    svg += fmt::format("<rect x=\"{}\" y=\"34\" width=\"12\" height=\"12\" fill=\"{}\"/>"
                       "<text x=\"{}\" y=\"45\">{}</text>\n",
                       px(left + 150), style.color_b, px(left + 166), escape(data.label_b));
    svg += fmt::format("<g id=\"scale\" data-lo=\"{}\" data-hi=\"{}\" data-left=\"{}\" data-right=\"{}\">"
                       "<text x=\"{}\" y=\"45\" text-anchor=\"end\">scale: {:.4g} px per unit</text></g>\n",
                       val(axis.lo), val(axis.hi), px(axis.left), px(axis.right), px(right), axis.scale());

    std::vector<std::size_t> order(data.bars.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (!style.space1_on_top) std::reverse(order.begin(), order.end());

    for (std::size_t slot = 0; slot < order.size(); ++slot) {
        const auto& bar = data.bars[order[slot]];
        const double y = top + row_h * static_cast<double>(slot);
        const double bar_h = 28.0;
        const double xa = axis(bar.beta_a);
        const double xb = axis(-bar.beta_b);
        svg += fmt::format("<g id=\"bar-{}\">\n", order[slot]);
        svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", px(left - 10),
                           px(y + bar_h / 2 + 4), escape(bar.label));
        svg += fmt::format("<rect class=\"beta-a\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" "
                           "data-value=\"{}\"/>\n",
                           px(std::min(zero, xa)), px(y), px(std::abs(xa - zero)), px(bar_h), style.color_a,
                           val(bar.beta_a));
        svg += fmt::format("<rect class=\"beta-b\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" "
                           "data-value=\"{}\"/>\n",
                           px(std::min(zero, xb)), px(y), px(std::abs(xb - zero)), px(bar_h), style.color_b,
                           val(bar.beta_b));
        svg += fmt::format("<circle class=\"cumulate\" cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"#000000\" "
                           "data-value=\"{}\"/>\n",
                           px(axis(bar.cumulate)), px(y + bar_h / 2), val(bar.cumulate));
        svg += "</g>\n";
    }
    const double axis_y = top + row_h * static_cast<double>(data.bars.size()) - 14.0;
    svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#888888\" stroke-dasharray=\"3,3\"/>\n",
                       px(zero), px(top - 6), px(zero), px(axis_y));
    ticks(svg, axis, axis_y, 4);
    svg += "</svg>\n";
    return svg;
}

std::string render_detail_svg(const DetailPlotData& data, const PlotStyle& style) {
    const std::size_t n_spaces = data.space_labels.size();
    const int width = std::max(style.width, 320);
    const double label_w = 110.0;
    const double gap = 24.0;
    const double canvas_w = (width - label_w - 20.0 - gap * static_cast<double>(n_spaces > 0 ? n_spaces - 1 : 0)) /
                            static_cast<double>(std::max<std::size_t>(n_spaces, 1));
    const double row_h = 40.0;
    const double top = 64.0;
    const int height = static_cast<int>(top + row_h * static_cast<double>(data.rows.size()) + 50.0);

    double lo = 0.0, hi = 0.0;
    for (const auto& row : data.rows)
        for (const auto& d : row.spaces) {
            for (double v : d.delta_a) lo = std::min(lo, v), hi = std::max(hi, v);
            for (double v : d.delta_b) lo = std::min(lo, v), hi = std::max(hi, v);
        }
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }

    std::string svg = header(width, height);
    svg += "<defs>\n";
    svg += fmt::format("<marker id=\"arrow-a\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"4\" "
                       "orient=\"auto\"><path d=\"M0,0 L8,4 L0,8 z\" fill=\"{}\"/></marker>\n",
                       style.color_a);
    svg += fmt::format("<marker id=\"arrow-b\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"4\" "
                       "orient=\"auto\"><path d=\"M0,0 L8,4 L0,8 z\" fill=\"{}\"/></marker>\n",
                       style.color_b);
    svg += "</defs>\n";
    svg += fmt::format("<text class=\"title\" x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                       px(width / 2.0), escape(data.topic));
    svg += fmt::format("<rect x=\"{}\" y=\"28\" width=\"12\" height=\"12\" fill=\"{}\"/><text x=\"{}\" y=\"39\">{}</text>\n",
                       px(label_w), style.color_a, px(label_w + 16), escape(data.label_a));
    svg += fmt::format("<rect x=\"{}\" y=\"28\" width=\"12\" height=\"12\" fill=\"{}\"/><text x=\"{}\" y=\"39\">{}</text>\n",
                       px(label_w + 150), style.color_b, px(label_w + 166), escape(data.label_b));

    for (std::size_t r = 0; r < data.rows.size(); ++r)
        svg += fmt::format("<text class=\"word\" x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", px(label_w - 8),
                           px(top + row_h * static_cast<double>(r) + 22), escape(data.rows[r].word));

    for (std::size_t s = 0; s < n_spaces; ++s) {
        const double x0 = label_w + static_cast<double>(s) * (canvas_w + gap);
        const Axis axis{lo, hi, x0 + 6, x0 + canvas_w - 6};
        svg += fmt::format("<g id=\"canvas-{}\" data-lo=\"{}\" data-hi=\"{}\" data-left=\"{}\" data-right=\"{}\">\n", s,
                           val(lo), val(hi), px(axis.left), px(axis.right));
        svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#cccccc\"/>\n",
                           px(x0), px(top - 8), px(canvas_w), px(row_h * static_cast<double>(data.rows.size()) + 8));
        svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-weight=\"bold\">{}</text>\n",
                           px(x0 + canvas_w / 2), px(top - 14), escape(data.space_labels[s]));
        svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#888888\" stroke-dasharray=\"3,3\"/>\n",
                           px(axis(0.0)), px(top - 8), px(axis(0.0)), px(top + row_h * static_cast<double>(data.rows.size())));

        for (std::size_t r = 0; r < data.rows.size(); ++r) {
            if (s >= data.rows[r].spaces.size()) continue;
            const auto& d = data.rows[r].spaces[s];
            const double y = top + row_h * static_cast<double>(r);
            const auto box = [&](const std::vector<double>& values, double yc, const std::string& color,
                                 std::string_view cls) {
                const BoxStats b = box_stats(values);
                std::string g = fmt::format("<g class=\"{}\" data-min=\"{}\" data-q1=\"{}\" data-mean=\"{}\" "
                                            "data-q3=\"{}\" data-max=\"{}\">",
                                            cls, val(b.min), val(b.q1), val(b.mean), val(b.q3), val(b.max));
                g += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\"/>", px(axis(b.min)),
                                 px(yc), px(axis(b.max)), px(yc), color);
                g += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\"/>", px(axis(b.min)),
                                 px(yc - 4), px(axis(b.min)), px(yc + 4), color);
                g += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\"/>", px(axis(b.max)),
                                 px(yc - 4), px(axis(b.max)), px(yc + 4), color);
                g += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"10\" fill=\"{}\" fill-opacity=\"0.35\" "
                                 "stroke=\"{}\"/>",
                                 px(axis(b.q1)), px(yc - 5), px(axis(b.q3) - axis(b.q1)), color, color);
                g += fmt::format("<line class=\"belt\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" "
                                 "stroke-width=\"2.5\"/>",
                                 px(axis(b.mean)), px(yc - 6), px(axis(b.mean)), px(yc + 6), color);
                g += "</g>\n";
                return g;
            };
            svg += fmt::format("<g id=\"cell-{}-{}\">\n", s, r);
            svg += box(d.delta_a, y + 8, style.color_a, "box-a");
            svg += box(d.delta_b, y + 28, style.color_b, "box-b");
            const bool dom_a = d.dominant == Pole::a;
            svg += fmt::format("<line class=\"arrow\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" "
                               "stroke-width=\"1.5\" marker-end=\"url(#arrow-{})\" data-dominant=\"{}\"/>\n",
                               px(axis(dom_a ? d.mean_b : d.mean_a)), px(dom_a ? y + 23 : y + 13),
                               px(axis(dom_a ? d.mean_a : d.mean_b)), px(dom_a ? y + 13 : y + 23),
                               dom_a ? style.color_a : style.color_b, dom_a ? 'a' : 'b', dom_a ? "a" : "b");
            svg += "</g>\n";
        }
        ticks(svg, axis, top + row_h * static_cast<double>(data.rows.size()) + 4, 4);
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void render_cumulative(const CumulativePlotData& data, const std::filesystem::path& path, const PlotStyle& style) {
    write_file(path, render_cumulative_svg(data, style));
}

void render_detail(const DetailPlotData& data, const std::filesystem::path& path, const PlotStyle& style) {
    write_file(path, render_detail_svg(data, style));
}

void to_json(nlohmann::json& j, const CumulativePlotData& data) {
    j = {{"topic", data.topic}, {"label_a", data.label_a}, {"label_b", data.label_b}, {"bars", nlohmann::json::array()}};
    for (const auto& b : data.bars)
        j["bars"].push_back({{"label", b.label}, {"beta_a", b.beta_a}, {"beta_b", b.beta_b}, {"cumulate", b.cumulate}});
}

void from_json(const nlohmann::json& j, CumulativePlotData& data) {
    data.topic = j.at("topic").get<std::string>();
    data.label_a = j.at("label_a").get<std::string>();
    data.label_b = j.at("label_b").get<std::string>();
    data.bars.clear();
    for (const auto& b : j.at("bars"))
        data.bars.push_back({b.at("label").get<std::string>(), b.at("beta_a").get<double>(),
                             b.at("beta_b").get<double>(), b.at("cumulate").get<double>()});
}

void to_json(nlohmann::json& j, const DetailPlotData& data) {
    j = {{"topic", data.topic},
         {"label_a", data.label_a},
         {"label_b", data.label_b},
         {"space_labels", data.space_labels},
         {"rows", nlohmann::json::array()}};
    for (const auto& row : data.rows) {
        nlohmann::json spaces = nlohmann::json::array();
        for (const auto& d : row.spaces)
            spaces.push_back({{"delta_a", d.delta_a},
                              {"delta_b", d.delta_b},
                              {"mean_a", d.mean_a},
                              {"mean_b", d.mean_b},
                              {"dominant_pole", d.dominant == Pole::a ? "A" : "B"}});
        j["rows"].push_back({{"word", row.word}, {"spaces", std::move(spaces)}});
    }
}

void from_json(const nlohmann::json& j, DetailPlotData& data) {
    data.topic = j.at("topic").get<std::string>();
    data.label_a = j.at("label_a").get<std::string>();
    data.label_b = j.at("label_b").get<std::string>();
    data.space_labels = j.at("space_labels").get<std::vector<std::string>>();
    data.rows.clear();
    for (const auto& r : j.at("rows")) {
        DetailRow row{r.at("word").get<std::string>(), {}};
        for (const auto& s : r.at("spaces")) {
            WordDistribution d;
            d.delta_a = s.at("delta_a").get<std::vector<double>>();
            d.delta_b = s.at("delta_b").get<std::vector<double>>();
            d.mean_a = s.at("mean_a").get<double>();
            d.mean_b = s.at("mean_b").get<double>();
            const auto pole = s.at("dominant_pole").get<std::string>();
            if (pole != "A" && pole != "B") throw DataError(fmt::format("invalid dominant_pole '{}'", pole));
            d.dominant = pole == "A" ? Pole::a : Pole::b;
            row.spaces.push_back(std::move(d));
        }
        data.rows.push_back(std::move(row));
    }
}

} // namespace sweat
