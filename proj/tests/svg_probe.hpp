#ifndef SWEAT_TESTS_SVG_PROBE_HPP
#define SWEAT_TESTS_SVG_PROBE_HPP

#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace sweat::testing {

namespace pt = boost::property_tree;

/// Parsed SVG, walked as a plain element tree. Throws on malformed XML.
class SvgProbe {
public:
    struct Element {
        std::string tag;
        const pt::ptree* node;

        std::optional<std::string> attr(const std::string& name) const {
            if (auto a = node->get_child_optional("<xmlattr>." + name)) return a->data();
            return std::nullopt;
        }
        double num(const std::string& name) const { return std::stod(attr(name).value()); }
        bool has_class(const std::string& cls) const { return attr("class") == cls; }
        std::vector<Element> children() const {
            std::vector<Element> out;
            for (const auto& [tag, child] : *node)
                if (tag != "<xmlattr>" && tag != "<xmlcomment>" && tag != "<xmltext>") out.push_back({tag, &child});
            return out;
        }
    };

    explicit SvgProbe(const std::string& text) {
        std::istringstream in(text);
        pt::read_xml(in, tree_);
    }

    Element root() const { return {"svg", &tree_.get_child("svg")}; }

    std::vector<Element> find_all(const std::function<bool(const Element&)>& pred) const {
        std::vector<Element> out;
        walk(root(), pred, out);
        return out;
    }

    std::optional<Element> by_id(const std::string& id) const {
        auto all = find_all([&](const Element& e) { return e.attr("id") == id; });
        if (all.empty()) return std::nullopt;
        return all.front();
    }

    static std::vector<Element> within(const Element& scope, const std::string& cls) {
        std::vector<Element> out;
        walk(scope, [&](const Element& e) { return e.has_class(cls); }, out);
        return out;
    }

private:
    static void walk(const Element& e, const std::function<bool(const Element&)>& pred, std::vector<Element>& out) {
        if (pred(e)) out.push_back(e);
        for (const auto& c : e.children()) walk(c, pred, out);
    }

    pt::ptree tree_;
};

/// Axis mapping recovered from data-lo/hi/left/right on a scale element.
struct ProbeAxis {
    double lo, hi, left, right;
    explicit ProbeAxis(const SvgProbe::Element& e)
        : lo(e.num("data-lo")), hi(e.num("data-hi")), left(e.num("data-left")), right(e.num("data-right")) {}
    double operator()(double v) const { return left + (v - lo) / (hi - lo) * (right - left); }
};

} // namespace sweat::testing

#endif
