#include "quasicross/io.hpp"
#include "quasicross/svg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <regex>

using namespace quasicross;

namespace {

std::size_t occurrences(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

Drawing staged() { return load_drawing(std::string(QUASICROSS_FIXTURES) + "/staged_k5.json"); }

}  // namespace

TEST(Svg, OneCircleAroundTheConvexSixTriple) {
    const std::string svg = render_svg(convex_complete(6));
    EXPECT_EQ(occurrences(svg, "class=\"triple\""), 1u);
    EXPECT_EQ(occurrences(svg, "class=\"edge\""), 15u);
    EXPECT_EQ(occurrences(svg, "class=\"vertex\""), 6u);
    EXPECT_NE(svg.find("data-edges=\"1-4 2-5 3-6\""), std::string::npos);
    EXPECT_EQ(occurrences(render_svg(convex_complete(5)), "class=\"triple\""), 0u);
    EXPECT_EQ(occurrences(render_svg(convex_complete(7)), "class=\"triple\""), 7u);
}

TEST(Svg, CircleCoversItsCrossings) {
    const Drawing d = convex_complete(6);
    const std::string svg = render_svg(d);
    std::smatch m;
    ASSERT_TRUE(std::regex_search(svg, m, std::regex(R"re(class="triple"[^>]* r="([0-9.]+)")re")));
    const double r = std::stod(m[1]);

    const CrossingGraph g = crossing_pairs(d);
    const auto t = count_triples(g).triples.at(0);
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    for (const auto& v : d.vertices()) {
        lo_x = std::min(lo_x, v.position.x.approx());
        hi_x = std::max(hi_x, v.position.x.approx());
        lo_y = std::min(lo_y, v.position.y.approx());
        hi_y = std::max(hi_y, v.position.y.approx());
    }
    const double scale = 800.0 / std::max(hi_x - lo_x, hi_y - lo_y);
    const Point* pts[] = {&g.location(t[0], t[1]), &g.location(t[0], t[2]), &g.location(t[1], t[2])};
    double cx = 0, cy = 0;
    for (const Point* p : pts) {
        cx += p->x.approx() / 3;
        cy += p->y.approx() / 3;
    }
    double reach = 0;
    for (const Point* p : pts) reach = std::max(reach, std::hypot(p->x.approx() - cx, p->y.approx() - cy));
    EXPECT_GE(r, reach * scale + 8.0 - 1e-6);
    EXPECT_LE(r, reach * scale + 8.0 + 0.003);
}

TEST(Svg, DeterministicBytes) {
    const Drawing d = staged();
    EXPECT_EQ(render_svg(d), render_svg(d));
    EXPECT_EQ(render_svg(convex_complete(8)), render_svg(convex_complete(8)));
}

TEST(Svg, StageTagsGetTheirColors) {
    const std::string svg = render_svg(staged());
    EXPECT_NE(svg.find("data-tag=\"pink\" stroke=\"#ff69b4\""), std::string::npos);
    EXPECT_NE(svg.find("data-tag=\"dark blue\" stroke=\"#00008b\""), std::string::npos);
    EXPECT_NE(svg.find("data-tag=\"final\" stroke=\"#2e8b57\""), std::string::npos);
    EXPECT_NE(svg.find("data-tag=\"initial\" stroke=\"#000000\""), std::string::npos);
}

TEST(Svg, PaletteOverrides) {
    Palette p;
    p.apply("pink=#010203,extra=#abcdef");
    EXPECT_NE(render_svg(staged(), p).find("stroke=\"#010203\""), std::string::npos);
    EXPECT_THROW(p.apply("pink=red"), std::invalid_argument);
    EXPECT_THROW(p.apply("=#000000"), std::invalid_argument);

    ::setenv("QUASICROSS_PALETTE", "final=#123456", 1);
    const Palette env = Palette::from_environment();
    ::unsetenv("QUASICROSS_PALETTE");
    EXPECT_EQ(env.assign(staged()).at("final"), "#123456");
    EXPECT_EQ(env.assign(staged()).at("pink"), "#ff69b4");
}

TEST(Svg, UnknownTagsTakeSpareColorsInOrder) {
    const Drawing k4 = convex_complete(4);
    std::vector<Edge> edges = k4.edges();
    edges[0].tag = "zeta";
    edges[1].tag = "alpha";
    const Drawing d(k4.vertices(), edges);
    const auto colors = Palette{}.assign(d);
    EXPECT_EQ(colors.at("alpha"), "#ff7f0e");
    EXPECT_EQ(colors.at("zeta"), "#9467bd");
}

TEST(Svg, EscapesIds) {
    const Drawing d({{"a<&>", Point{Rational(0), Rational(0)}}, {"b\"", Point{Rational(1), Rational(1)}}},
                    std::vector<Edge>{{0, 1, {}, std::nullopt}});
    const std::string svg = render_svg(d);
    EXPECT_NE(svg.find("a&lt;&amp;&gt;"), std::string::npos);
    EXPECT_EQ(svg.find("a<&>"), std::string::npos);
}

TEST(Svg, InvalidDrawingThrows) {
    const Drawing d = load_drawing(std::string(QUASICROSS_FIXTURES) + "/invalid_double_crossing.json");
    EXPECT_THROW(render_svg(d), InvalidDrawing);
}
