#include "quasicross/io.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace quasicross;
using quasicross::testing::P;

namespace {

std::string fixture(const std::string& name) { return std::string(QUASICROSS_FIXTURES) + "/" + name; }

FormatErrorKind kind_of(const std::string& text) {
    try {
        parse_drawing(text);
    } catch (const FormatError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected a FormatError for " << text;
    return FormatErrorKind::schema;
}

std::string with_vertices(const std::string& vertices, const std::string& edges = "[]") {
    return R"({"format_version": 1, "vertices": )" + vertices + R"(, "edges": )" + edges + "}";
}

}  // namespace

TEST(DrawingFile, BundledConvexSixRoundTrips) {
    const std::string text = read_text_file(fixture("convex_k6.json"));
    const Drawing d = parse_drawing(text);
    EXPECT_EQ(d, convex_complete(6));
    EXPECT_EQ(serialize_drawing(d), text);
}

TEST(DrawingFile, NonCanonicalInputSerializesCanonically) {
    const std::string loose = R"({"edges": [{"v": "b", "u": "a", "bends": [["2/4", "-0"]], "tag": "pink"}],
        "vertices": [{"y": "+3", "x": "6/3", "id": "a"}, {"id": "b", "x": "-7/14", "y": "0"}], "format_version": 1})";
    const Drawing d = parse_drawing(loose);
    EXPECT_EQ(d.vertex(0).position, P(2, 3));
    EXPECT_EQ(d.vertex(1).position.x, Rational(-1, 2));
    EXPECT_EQ(d.edge(0).bends.at(0), Point(Rational(1, 2), Rational(0)));
    const std::string canonical = serialize_drawing(d);
    EXPECT_EQ(serialize_drawing(parse_drawing(canonical)), canonical);
    EXPECT_NE(canonical.find("\"1/2\""), std::string::npos);
    EXPECT_LT(canonical.find("format_version"), canonical.find("vertices"));
    EXPECT_NE(canonical.find("\"tag\": \"pink\""), std::string::npos);
}

TEST(DrawingFile, TagIsOmittedWhenAbsentAndBendsOptional) {
    const Drawing d = parse_drawing(with_vertices(R"([{"id": "a", "x": "0", "y": "0"}, {"id": "b", "x": "1", "y": "0"}])",
                                                  R"([{"u": "a", "v": "b"}])"));
    EXPECT_FALSE(d.edge(0).tag.has_value());
    EXPECT_EQ(serialize_drawing(d).find("tag"), std::string::npos);
}

TEST(DrawingFile, ErrorKinds) {
    EXPECT_EQ(kind_of(with_vertices(R"([{"id": "a", "x": "1/0", "y": "0"}])")), FormatErrorKind::zero_denominator);
    EXPECT_EQ(kind_of(with_vertices(R"([{"id": "a", "x": "1.5", "y": "0"}])")), FormatErrorKind::malformed_rational);
    EXPECT_EQ(kind_of(with_vertices(R"([{"id": "a", "x": "1/-2", "y": "0"}])")), FormatErrorKind::malformed_rational);
    EXPECT_EQ(kind_of(with_vertices(R"([{"id": "a", "x": 1, "y": "0"}])")), FormatErrorKind::schema);
    EXPECT_EQ(kind_of(with_vertices(R"([{"id": "a", "x": "0", "y": "0"}, {"id": "a", "x": "1", "y": "0"}])")),
              FormatErrorKind::duplicate_id);
    EXPECT_EQ(kind_of(with_vertices(R"([{"id": "a", "x": "0", "y": "0"}])", R"([{"u": "a", "v": "z"}])")),
              FormatErrorKind::unknown_endpoint);
    EXPECT_EQ(kind_of(with_vertices(R"([{"id": "a", "x": "0", "y": "0"}, {"id": "b", "x": "0", "y": "0"}])")),
              FormatErrorKind::duplicate_position);
    EXPECT_EQ(kind_of(R"({"format_version": 2, "vertices": [], "edges": []})"), FormatErrorKind::unsupported_version);
    EXPECT_EQ(kind_of(R"({"format_version": 1, "vertices": [})"), FormatErrorKind::syntax);
    EXPECT_EQ(kind_of("[1, 2]"), FormatErrorKind::schema);
    EXPECT_EQ(kind_of(R"({"format_version": 1, "vertices": [], "edges": [], "extra": 0})"), FormatErrorKind::schema);
}

TEST(DrawingFile, ErrorsCarryContext) {
    try {
        parse_drawing(with_vertices(R"([{"id": "a", "x": "0", "y": "0"}, {"id": "b", "x": "1", "y": "0"}])",
                                    R"([{"u": "a", "v": "b"}, {"u": "b", "v": "z"}])"));
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_EQ(e.context(), "$.edges[1].v");
    }
    try {
        parse_drawing(with_vertices(R"([{"id": "a", "x": "0", "y": "3/0"}])"));
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_EQ(e.context(), "$.vertices[0].y");
    }
    try {
        parse_drawing("{\n  \"format_version\": 1,\n  \"vertices\": [,]\n}");
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_EQ(e.kind(), FormatErrorKind::syntax);
        EXPECT_EQ(e.context().rfind("line 3,", 0), 0u) << e.context();
    }
}

TEST(Analysis, MatchesTheCoreOnFixtures) {
    for (const char* name : {"convex_k5.json", "convex_k6.json", "staged_k5.json", "invalid_double_crossing.json"}) {
        const Drawing d = load_drawing(fixture(name));
        const json a = analysis_json(d);
        const ValidationReport r = validate(d);
        EXPECT_EQ(a["validation"]["is_valid"].get<bool>(), r.is_valid) << name;
        if (!r.is_valid) {
            EXPECT_TRUE(a["triple_count"].is_null());
            continue;
        }
        const TripleReport t = count_triples(crossing_pairs(d));
        EXPECT_EQ(a["triple_count"].get<std::size_t>(), t.triple_count) << name;
        EXPECT_EQ(a["crossing_pair_count"].get<std::size_t>(), t.crossing_pair_count) << name;
        EXPECT_EQ(a["triples"].size(), t.triple_count);
        EXPECT_EQ(a["crossings"].size(), t.crossing_pair_count);
        EXPECT_EQ(a["bounds"]["best_integer_lower_bound"], "0");
    }
    const json k6 = analysis_json(convex_complete(6));
    EXPECT_EQ(k6["triples"][0], json::parse(R"([["1","4"],["2","5"],["3","6"]])"));
}

TEST(Analysis, ViolationsAreNamed) {
    const json a = analysis_json(load_drawing(fixture("invalid_concurrent.json")));
    ASSERT_EQ(a["validation"]["violations"].size(), 1u);
    EXPECT_EQ(a["validation"]["violations"][0]["kind"], "ConcurrentCrossings");
    EXPECT_EQ(a["validation"]["violations"][0]["location"], json::parse(R"(["0","0"])"));
}

TEST(Bounds, ReportUsesExactStrings) {
    const json b = bound_json(best_lower_bound(BoundInput::complete(11)));
    EXPECT_EQ(b["eq1"], "7/2");
    EXPECT_EQ(b["best_integer_lower_bound"], "4");
    EXPECT_TRUE(b["eq2_optimized"].is_null());
    const json big = bound_json(best_lower_bound({18, 153}));
    EXPECT_EQ(big["eq2_fixed_alpha"]["alpha"], "65/8");
    EXPECT_EQ(Rational::parse(big["eq2_fixed_alpha"]["value"].get<std::string>()),
              eq2_bound({18, 153}, Rational(65, 8)));
}

TEST(SearchConfigFile, ParsesAndRejects) {
    const SearchConfig c = parse_config(read_text_file(fixture("search_k6.json")));
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.max_iterations, 10000u);
    EXPECT_EQ(c.cooling_factor, Rational(999, 1000));
    EXPECT_EQ(c.move_weights[static_cast<int>(MoveKind::AddBend)], Rational(2));
    EXPECT_EQ(parse_config(config_json(c).dump()).perturbation_radius, c.perturbation_radius);

    EXPECT_THROW(parse_config(R"({"cooling_factor": "3/2"})"), FormatError);
    EXPECT_THROW(parse_config(R"({"move_weights": {"Teleport": "1"}})"), FormatError);
    EXPECT_THROW(parse_config(R"({"seeds": 1})"), FormatError);
    EXPECT_THROW(parse_config(R"({"move_weights": {"PerturbVertex": "0", "AddBend": "0", "MoveBend": "0", "RemoveBend": "0"}})"),
                 FormatError);
    EXPECT_EQ(parse_config("{}").max_iterations, SearchConfig{}.max_iterations);
}

TEST(Checkpoint, StateRoundTrips) {
    RestartState s;
    s.restart = 2;
    s.iteration = 77;
    RandomStream rng(5, 2);
    rng.next();
    s.rng_state = rng.state();
    s.current = convex_complete(5);
    s.best = convex_complete(6);
    s.best_objective = {1, 15};
    s.best_iteration = 10;
    const auto back = parse_checkpoint(checkpoint_json({s}).dump(2));
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].restart, 2u);
    EXPECT_EQ(back[0].iteration, 77u);
    EXPECT_EQ(back[0].best_iteration, 10u);
    EXPECT_EQ(back[0].best_objective, s.best_objective);
    EXPECT_EQ(back[0].current, s.current);
    EXPECT_EQ(back[0].best, s.best);
    RandomStream restored(0);
    restored.restore(back[0].rng_state);
    EXPECT_EQ(restored, rng);
}

TEST(Trace, LinesAreExact) {
    SearchTrace t;
    t.records.push_back({3, {1, 15}, {0, 11}, MoveKind::AddBend, true, true, 0.75});
    std::ostringstream os;
    write_trace_lines(os, t);
    const json line = json::parse(os.str());
    EXPECT_EQ(line["temperature"], "3/4");
    EXPECT_EQ(line["kind"], "AddBend");
    EXPECT_EQ(line["after"]["crossing_pairs"], 11);
}
