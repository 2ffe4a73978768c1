#pragma once

#include "quasicross/crossing.hpp"
#include "quasicross/drawing.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace quasicross {

/// Stroke colors by edge tag. Untagged edges are black; the stage tags of
/// the construction figures get fixed colors, and any other tag takes the
/// next spare color in tag order.
class Palette {
public:
    Palette()
        : colors_{{"initial", "#000000"}, {"pink", "#ff69b4"},      {"dark blue", "#00008b"},
                  {"dark-blue", "#00008b"}, {"darkblue", "#00008b"}, {"final", "#2e8b57"}} {}

    /// Reads QUASICROSS_PALETTE ("tag=#hex,tag=#hex") on top of the defaults.
    static Palette from_environment() {
        Palette p;
        if (const char* env = std::getenv("QUASICROSS_PALETTE")) p.apply(env);
        return p;
    }

    void apply(const std::string& spec) {
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0) throw std::invalid_argument("palette entry needs tag=color: " + item);
            const std::string color = item.substr(eq + 1);
            if (!valid_color(color)) throw std::invalid_argument("palette color must be #rrggbb: " + color);
            colors_[item.substr(0, eq)] = color;
        }
    }

    void set(const std::string& tag, const std::string& color) {
        if (!valid_color(color)) throw std::invalid_argument("palette color must be #rrggbb: " + color);
        colors_[tag] = color;
    }

    /// Colors for every tag used in d.
    [[nodiscard]] std::map<std::string, std::string> assign(const Drawing& d) const {
        static const char* spare[] = {"#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#bcbd22", "#7f7f7f"};
        std::set<std::string> tags;
        for (const auto& e : d.edges())
            if (e.tag) tags.insert(*e.tag);
        std::map<std::string, std::string> out;
        std::size_t next = 0;
        for (const auto& t : tags) {
            auto it = colors_.find(t);
            out[t] = it != colors_.end() ? it->second : spare[next++ % std::size(spare)];
        }
        return out;
    }

private:
    static bool valid_color(const std::string& c) {
        if (c.size() != 7 || c[0] != '#') return false;
        for (std::size_t i = 1; i < 7; ++i)
            if (!std::isxdigit(static_cast<unsigned char>(c[i]))) return false;
        return true;
    }

    std::map<std::string, std::string> colors_;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

/// SVG image of a valid drawing: labeled vertex dots, edges as polylines
/// colored by tag, and a red circle around the three crossing points of
/// every triple. Output depends only on the drawing and palette.
inline std::string render_svg(const Drawing& d, const Palette& palette = Palette{}) {
    const CrossingGraph g = crossing_pairs(d);
    const TripleReport triples = count_triples(g);

    const Rational size(800), margin(40);
    Rational min_x, max_x, min_y, max_y;
    bool first = true;
    auto extend = [&](const Point& p) {
        if (first) {
            min_x = max_x = p.x;
            min_y = max_y = p.y;
            first = false;
            return;
        }
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    };
    for (const auto& v : d.vertices()) extend(v.position);
    for (const auto& e : d.edges())
        for (const auto& b : e.bends) extend(b);
    if (first) min_x = max_x = min_y = max_y = Rational(0);
    Rational extent = std::max(max_x - min_x, max_y - min_y);
    if (extent.sign() == 0) extent = Rational(1);
    const Rational scale = size / extent;
    const Rational width = (max_x - min_x) * scale + margin * Rational(2);
    const Rational height = (max_y - min_y) * scale + margin * Rational(2);

    auto px = [&](const Rational& x) { return to_decimal((x - min_x) * scale + margin, 3); };
    auto py = [&](const Rational& y) { return to_decimal((max_y - y) * scale + margin, 3); };

    const auto colors = palette.assign(d);
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << to_decimal(width, 3) << "\" height=\""
        << to_decimal(height, 3) << "\" viewBox=\"0 0 " << to_decimal(width, 3) << ' ' << to_decimal(height, 3)
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    out << "<g class=\"edges\" fill=\"none\" stroke-width=\"2\">\n";
    for (std::size_t i = 0; i < d.edge_count(); ++i) {
        const Edge& e = d.edge(i);
        const std::string color = e.tag ? colors.at(*e.tag) : "#000000";
        out << "<polyline class=\"edge\" data-edge=\"" << detail::xml_escape(d.edge_name(i)) << "\"";
        if (e.tag) out << " data-tag=\"" << detail::xml_escape(*e.tag) << "\"";
        out << " stroke=\"" << color << "\" points=\"";
        const auto& route = d.route(i);
        for (std::size_t k = 0; k < route.size(); ++k) {
            if (k) out << ' ';
            out << px(route[k].x) << ',' << py(route[k].y);
        }
        out << "\"/>\n";
    }
    out << "</g>\n";

    out << "<g class=\"triples\" fill=\"none\" stroke=\"#ff0000\" stroke-width=\"2\">\n";
    for (const auto& t : triples.triples) {
        const Point& a = g.location(t[0], t[1]);
        const Point& b = g.location(t[0], t[2]);
        const Point& c = g.location(t[1], t[2]);
        const Point center{(a.x + b.x + c.x) / Rational(3), (a.y + b.y + c.y) / Rational(3)};
        Rational reach(0);
        for (const Point* p : {&a, &b, &c}) {
            const Rational dx = p->x - center.x, dy = p->y - center.y;
            reach = std::max(reach, dx * dx + dy * dy);
        }
        // ceiling of the pixel radius on a 1/1000 grid, plus padding
        const Rational r = sqrt_floor(reach * scale * scale, 3) + Rational(1, 1000) + Rational(8);
        out << "<circle class=\"triple\" data-edges=\"" << detail::xml_escape(d.edge_name(t[0])) << ' '
            << detail::xml_escape(d.edge_name(t[1])) << ' ' << detail::xml_escape(d.edge_name(t[2])) << "\" cx=\""
            << px(center.x) << "\" cy=\"" << py(center.y) << "\" r=\"" << to_decimal(r, 3) << "\"/>\n";
    }
    out << "</g>\n";

    out << "<g class=\"vertices\" font-family=\"sans-serif\" font-size=\"14\">\n";
    for (const auto& v : d.vertices()) {
        out << "<circle class=\"vertex\" cx=\"" << px(v.position.x) << "\" cy=\"" << py(v.position.y)
            << "\" r=\"5\" fill=\"#000000\"/>\n";
        out << "<text x=\"" << to_decimal((v.position.x - min_x) * scale + margin + Rational(7), 3) << "\" y=\""
            << to_decimal((max_y - v.position.y) * scale + margin - Rational(7), 3) << "\">"
            << detail::xml_escape(v.id) << "</text>\n";
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

inline void export_svg(const Drawing& d, const std::string& path, const Palette& palette = Palette::from_environment()) {
    const std::string text = render_svg(d, palette);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write " + path);
    file << text;
    if (!file.flush()) throw std::runtime_error("cannot write " + path);
}

}  // namespace quasicross
