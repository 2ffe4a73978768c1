#pragma once

#include "quasicross/bounds.hpp"
#include "quasicross/crossing.hpp"
#include "quasicross/drawing.hpp"
#include "quasicross/search.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace quasicross {

using json = nlohmann::ordered_json;

enum class FormatErrorKind {
    syntax,
    schema,
    unsupported_version,
    malformed_rational,
    zero_denominator,
    duplicate_id,
    unknown_endpoint,
    duplicate_position,
    self_loop,
    duplicate_edge,
    degenerate_route,
};

inline const char* to_string(FormatErrorKind k) {
    switch (k) {
        case FormatErrorKind::syntax: return "syntax";
        case FormatErrorKind::schema: return "schema";
        case FormatErrorKind::unsupported_version: return "unsupported_version";
        case FormatErrorKind::malformed_rational: return "malformed_rational";
        case FormatErrorKind::zero_denominator: return "zero_denominator";
        case FormatErrorKind::duplicate_id: return "duplicate_id";
        case FormatErrorKind::unknown_endpoint: return "unknown_endpoint";
        case FormatErrorKind::duplicate_position: return "duplicate_position";
        case FormatErrorKind::self_loop: return "self_loop";
        case FormatErrorKind::duplicate_edge: return "duplicate_edge";
        case FormatErrorKind::degenerate_route: return "degenerate_route";
    }
    return "unknown";
}

/// A document that does not describe a drawing. `context` names the field
/// ("edges[3].u") or, for syntax errors, the line and column.
class FormatError : public std::invalid_argument {
public:
    FormatError(FormatErrorKind kind, std::string context, const std::string& message)
        : std::invalid_argument(context + ": " + message), kind_(kind), context_(std::move(context)) {}

    [[nodiscard]] FormatErrorKind kind() const { return kind_; }
    [[nodiscard]] const std::string& context() const { return context_; }

private:
    FormatErrorKind kind_;
    std::string context_;
};

namespace detail {

inline std::string line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

inline json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(FormatErrorKind::syntax, line_column(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }
}

inline const json& member(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw FormatError(FormatErrorKind::schema, where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw FormatError(FormatErrorKind::schema, where, std::string("missing field \"") + key + "\"");
    return *it;
}

inline void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : keys) known |= it.key() == k;
        if (!known) throw FormatError(FormatErrorKind::schema, where, "unknown field \"" + it.key() + "\"");
    }
}

inline std::string string_field(const json& v, const std::string& where) {
    if (!v.is_string()) throw FormatError(FormatErrorKind::schema, where, "expected a string");
    return v.get<std::string>();
}

inline Rational rational_field(const json& v, const std::string& where) {
    const std::string s = string_field(v, where);
    try {
        return Rational::parse(s);
    } catch (const std::domain_error&) {
        throw FormatError(FormatErrorKind::zero_denominator, where, "zero denominator in \"" + s + "\"");
    } catch (const std::invalid_argument&) {
        throw FormatError(FormatErrorKind::malformed_rational, where, "malformed rational \"" + s + "\"");
    }
}

inline std::uint64_t unsigned_field(const json& v, const std::string& where) {
    if (!v.is_number_unsigned()) throw FormatError(FormatErrorKind::schema, where, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

inline Point point_field(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) throw FormatError(FormatErrorKind::schema, where, "expected [x, y]");
    return {rational_field(v[0], where + "[0]"), rational_field(v[1], where + "[1]")};
}

inline FormatErrorKind format_kind(DrawingErrorKind k) {
    switch (k) {
        case DrawingErrorKind::duplicate_vertex_id: return FormatErrorKind::duplicate_id;
        case DrawingErrorKind::duplicate_position: return FormatErrorKind::duplicate_position;
        case DrawingErrorKind::unknown_endpoint: return FormatErrorKind::unknown_endpoint;
        case DrawingErrorKind::self_loop: return FormatErrorKind::self_loop;
        case DrawingErrorKind::duplicate_edge: return FormatErrorKind::duplicate_edge;
        case DrawingErrorKind::degenerate_route: return FormatErrorKind::degenerate_route;
    }
    return FormatErrorKind::schema;
}

}  // namespace detail

inline json point_json(const Point& p) { return json::array({p.x.str(), p.y.str()}); }

inline json drawing_json(const Drawing& d) {
    json doc;
    doc["format_version"] = 1;
    json vertices = json::array();
    for (const auto& v : d.vertices())
        vertices.push_back(json{{"id", v.id}, {"x", v.position.x.str()}, {"y", v.position.y.str()}});
    doc["vertices"] = std::move(vertices);
    json edges = json::array();
    for (const auto& e : d.edges()) {
        json item{{"u", d.vertex(e.u).id}, {"v", d.vertex(e.v).id}};
        json bends = json::array();
        for (const auto& b : e.bends) bends.push_back(point_json(b));
        item["bends"] = std::move(bends);
        if (e.tag) item["tag"] = *e.tag;
        edges.push_back(std::move(item));
    }
    doc["edges"] = std::move(edges);
    return doc;
}

inline Drawing drawing_from_json(const json& doc, const std::string& where = "$") {
    using namespace detail;
    if (!doc.is_object()) throw FormatError(FormatErrorKind::schema, where, "expected an object");
    only_keys(doc, {"format_version", "vertices", "edges"}, where);
    const json& version = member(doc, "format_version", where);
    if (!version.is_number_integer() || version.get<long>() != 1)
        throw FormatError(FormatErrorKind::unsupported_version, where + ".format_version", "expected format_version 1");

    const json& vs = member(doc, "vertices", where);
    if (!vs.is_array()) throw FormatError(FormatErrorKind::schema, where + ".vertices", "expected a list");
    std::vector<Vertex> vertices;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string at = where + ".vertices[" + std::to_string(i) + "]";
        only_keys(vs[i], {"id", "x", "y"}, at);
        std::string id = string_field(member(vs[i], "id", at), at + ".id");
        if (!ids.insert(id).second) throw FormatError(FormatErrorKind::duplicate_id, at + ".id", "duplicate vertex id \"" + id + "\"");
        vertices.push_back({std::move(id), {rational_field(member(vs[i], "x", at), at + ".x"),
                                             rational_field(member(vs[i], "y", at), at + ".y")}});
    }

    const json& es = member(doc, "edges", where);
    if (!es.is_array()) throw FormatError(FormatErrorKind::schema, where + ".edges", "expected a list");
    std::vector<EdgeSpec> edges;
    for (std::size_t i = 0; i < es.size(); ++i) {
        const std::string at = where + ".edges[" + std::to_string(i) + "]";
        only_keys(es[i], {"u", "v", "bends", "tag"}, at);
        EdgeSpec spec;
        spec.u = string_field(member(es[i], "u", at), at + ".u");
        spec.v = string_field(member(es[i], "v", at), at + ".v");
        if (!ids.contains(spec.u)) throw FormatError(FormatErrorKind::unknown_endpoint, at + ".u", "unknown vertex \"" + spec.u + "\"");
        if (!ids.contains(spec.v)) throw FormatError(FormatErrorKind::unknown_endpoint, at + ".v", "unknown vertex \"" + spec.v + "\"");
        if (auto it = es[i].find("bends"); it != es[i].end()) {
            if (!it->is_array()) throw FormatError(FormatErrorKind::schema, at + ".bends", "expected a list");
            for (std::size_t b = 0; b < it->size(); ++b)
                spec.bends.push_back(point_field((*it)[b], at + ".bends[" + std::to_string(b) + "]"));
        }
        if (auto it = es[i].find("tag"); it != es[i].end()) spec.tag = string_field(*it, at + ".tag");
        edges.push_back(std::move(spec));
    }
    try {
        return Drawing(std::move(vertices), edges);
    } catch (const DrawingError& e) {
        throw FormatError(format_kind(e.kind()), where, e.what());
    }
}

inline Drawing parse_drawing(const std::string& text) { return drawing_from_json(detail::parse_json_text(text)); }

/// Canonical text: two-space indentation, fixed key order, trailing newline.
inline std::string serialize_drawing(const Drawing& d) { return drawing_json(d).dump(2) + "\n"; }

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out.flush()) throw std::runtime_error("cannot write " + path);
}

inline Drawing load_drawing(const std::string& path) { return parse_drawing(read_text_file(path)); }

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json validation_json(const Drawing& d, const ValidationReport& r) {
    json out{{"is_valid", r.is_valid}};
    json list = json::array();
    for (const auto& v : r.violations) {
        json item{{"kind", to_string(v.kind)}};
        json edges = json::array();
        for (std::size_t e : v.edges) edges.push_back(d.edge_name(e));
        item["edges"] = std::move(edges);
        if (v.vertex) item["vertex"] = d.vertex(*v.vertex).id;
        if (v.location) item["location"] = point_json(*v.location);
        list.push_back(std::move(item));
    }
    out["violations"] = std::move(list);
    return out;
}

inline json alpha_json(const std::optional<AlphaOptimum>& a) {
    if (!a) return nullptr;
    return json{{"alpha", a->alpha.str()}, {"value", a->bound.str()}};
}

inline json bound_json(const BoundReport& r) {
    return json{{"n", r.input.n},
                {"e", r.input.e},
                {"eq1", r.eq1_value.str()},
                {"eq1_ceiling", r.eq1_value.ceil().get_str()},
                {"eq2_fixed_alpha", alpha_json(r.eq2_fixed)},
                {"eq2_optimized", alpha_json(r.eq2_optimized)},
                {"best_integer_lower_bound", r.best_integer_lower_bound.get_str()}};
}

inline json edge_ids_json(const Drawing& d, std::size_t e) {
    return json::array({d.vertex(d.edge(e).u).id, d.vertex(d.edge(e).v).id});
}

/// The analysis of one drawing. Counts and crossings are present only for a
/// valid drawing; bounds only for n >= 4.
inline json analysis_json(const Drawing& d) {
    std::vector<PairCrossings> pairs;
    ValidationReport report = validate(d, &pairs);
    json out{{"validation", validation_json(d, report)},
             {"vertex_count", d.vertex_count()},
             {"edge_count", d.edge_count()}};
    if (report.is_valid) {
        CrossingGraph g(d.edge_count());
        for (auto& pc : pairs) g.add_link(pc.first, pc.second, pc.points.front());
        TripleReport t = count_triples(g);
        out["crossing_pair_count"] = t.crossing_pair_count;
        out["triple_count"] = t.triple_count;
        json triples = json::array();
        for (const auto& tr : t.triples) {
            json item = json::array();
            for (std::size_t e : tr) item.push_back(edge_ids_json(d, e));
            triples.push_back(std::move(item));
        }
        out["triples"] = std::move(triples);
        json crossings = json::array();
        for (const auto& [link, p] : g.locations())
            crossings.push_back(json{{"edges", json::array({edge_ids_json(d, link.first), edge_ids_json(d, link.second)})},
                                     {"location", point_json(p)}});
        out["crossings"] = std::move(crossings);
    } else {
        out["crossing_pair_count"] = nullptr;
        out["triple_count"] = nullptr;
        out["triples"] = nullptr;
        out["crossings"] = nullptr;
    }
    if (d.vertex_count() >= 4) {
        out["bounds"] = bound_json(best_lower_bound(
            {static_cast<long>(d.vertex_count()), static_cast<long>(d.edge_count())}));
    } else {
        out["bounds"] = nullptr;
    }
    return out;
}

inline json subsample_json(const SubsampleStats& s) {
    auto block = [](const Rational& mean, const Rational& expected, const Rational& var, const Rational& se) {
        return json{{"mean", mean.str()},
                    {"expected", expected.str()},
                    {"variance_of_mean", var.str()},
                    {"standard_error_floor", se.str()},
                    {"within_3_standard_errors", within_standard_errors(mean, expected, var, 3)}};
    };
    return json{{"p", s.p.str()},
                {"trials", s.trials},
                {"seed", s.seed},
                {"n", s.n},
                {"e", s.e},
                {"triples", s.triples},
                {"vertices", block(s.mean_vertices, s.expected_vertices, s.variance_of_mean_vertices, s.standard_error_vertices)},
                {"edges", block(s.mean_edges, s.expected_edges, s.variance_of_mean_edges, s.standard_error_edges)},
                {"triple_count", block(s.mean_triples, s.expected_triples, s.variance_of_mean_triples, s.standard_error_triples)}};
}

inline json objective_json(const Objective& o) {
    return json{{"triples", o.triples}, {"crossing_pairs", o.crossing_pairs}};
}

inline Objective objective_from_json(const json& v, const std::string& where) {
    detail::only_keys(v, {"triples", "crossing_pairs"}, where);
    return {detail::unsigned_field(detail::member(v, "triples", where), where + ".triples"),
            detail::unsigned_field(detail::member(v, "crossing_pairs", where), where + ".crossing_pairs")};
}

// ---------------------------------------------------------------------------
// Search configuration, traces and checkpoints
// ---------------------------------------------------------------------------

inline json config_json(const SearchConfig& c) {
    json weights;
    for (int k = 0; k < 4; ++k) weights[to_string(static_cast<MoveKind>(k))] = c.move_weights[k].str();
    return json{{"seed", c.seed},
                {"max_iterations", c.max_iterations},
                {"initial_temperature", c.initial_temperature.str()},
                {"cooling_factor", c.cooling_factor.str()},
                {"move_weights", weights},
                {"max_bends_per_edge", c.max_bends_per_edge},
                {"perturbation_radius", c.perturbation_radius.str()},
                {"restart_count", c.restart_count},
                {"lattice_denominator", c.lattice_denominator},
                {"checkpoint_interval", c.checkpoint_interval},
                {"threads", c.threads}};
}

/// Missing fields keep their defaults; unknown fields are errors.
inline SearchConfig config_from_json(const json& v) {
    using namespace detail;
    const std::string where = "$";
    if (!v.is_object()) throw FormatError(FormatErrorKind::schema, where, "expected an object");
    only_keys(v,
              {"seed", "max_iterations", "initial_temperature", "cooling_factor", "move_weights", "max_bends_per_edge",
               "perturbation_radius", "restart_count", "lattice_denominator", "checkpoint_interval", "threads"},
              where);
    SearchConfig c;
    auto field = [&](const char* key) -> const json* {
        auto it = v.find(key);
        return it == v.end() ? nullptr : &*it;
    };
    const std::string p = where + ".";
    if (auto f = field("seed")) c.seed = unsigned_field(*f, p + "seed");
    if (auto f = field("max_iterations")) c.max_iterations = unsigned_field(*f, p + "max_iterations");
    if (auto f = field("initial_temperature")) c.initial_temperature = rational_field(*f, p + "initial_temperature");
    if (auto f = field("cooling_factor")) c.cooling_factor = rational_field(*f, p + "cooling_factor");
    if (auto f = field("move_weights")) {
        if (!f->is_object()) throw FormatError(FormatErrorKind::schema, p + "move_weights", "expected an object");
        for (auto it = f->begin(); it != f->end(); ++it) {
            auto kind = move_kind_from_string(it.key());
            if (!kind) throw FormatError(FormatErrorKind::schema, p + "move_weights", "unknown move \"" + it.key() + "\"");
            c.move_weights[static_cast<int>(*kind)] = rational_field(it.value(), p + "move_weights." + it.key());
        }
    }
    if (auto f = field("max_bends_per_edge")) c.max_bends_per_edge = unsigned_field(*f, p + "max_bends_per_edge");
    if (auto f = field("perturbation_radius")) c.perturbation_radius = rational_field(*f, p + "perturbation_radius");
    if (auto f = field("restart_count")) c.restart_count = unsigned_field(*f, p + "restart_count");
    if (auto f = field("lattice_denominator"))
        c.lattice_denominator = static_cast<std::int64_t>(std::min<std::uint64_t>(unsigned_field(*f, p + "lattice_denominator"), 1ULL << 40));
    if (auto f = field("checkpoint_interval")) c.checkpoint_interval = unsigned_field(*f, p + "checkpoint_interval");
    if (auto f = field("threads")) c.threads = unsigned_field(*f, p + "threads");
    try {
        c.check();
    } catch (const std::invalid_argument& e) {
        // messages lead with the offending field
        const std::string msg = e.what();
        std::string key = msg.substr(0, msg.find(' '));
        if (key == "move" || key == "at") key = "move_weights";
        throw FormatError(FormatErrorKind::schema, v.contains(key) ? p + key : where, msg);
    }
    return c;
}

inline SearchConfig parse_config(const std::string& text) { return config_from_json(detail::parse_json_text(text)); }

/// One JSON object per line; temperatures as exact rationals.
inline void write_trace_lines(std::ostream& out, const SearchTrace& t) {
    for (const auto& r : t.records) {
        json line{{"restart", t.restart},
                  {"iteration", r.iteration},
                  {"before", objective_json(r.before)},
                  {"after", objective_json(r.after)},
                  {"kind", to_string(r.kind)},
                  {"valid", r.valid},
                  {"accepted", r.accepted},
                  {"temperature", from_double(r.temperature).str()}};
        out << line.dump() << '\n';
    }
}

inline json best_timeline_json(const SearchTrace& t) {
    json out = json::array();
    for (const auto& [it, o] : t.best_timeline) out.push_back(json{{"iteration", it}, {"best", objective_json(o)}});
    return out;
}

inline json checkpoint_json(const std::vector<RestartState>& states) {
    json list = json::array();
    for (const auto& s : states) {
        list.push_back(json{{"restart", s.restart},
                            {"iteration", s.iteration},
                            {"rng_state", s.rng_state},
                            {"best_iteration", s.best_iteration},
                            {"best_objective", objective_json(s.best_objective)},
                            {"current", drawing_json(s.current)},
                            {"best", drawing_json(s.best)}});
    }
    return json{{"format_version", 1}, {"restarts", std::move(list)}};
}

inline std::vector<RestartState> checkpoint_from_json(const json& v) {
    using namespace detail;
    only_keys(v, {"format_version", "restarts"}, "$");
    const json& version = member(v, "format_version", "$");
    if (!version.is_number_integer() || version.get<long>() != 1)
        throw FormatError(FormatErrorKind::unsupported_version, "$.format_version", "expected format_version 1");
    const json& list = member(v, "restarts", "$");
    if (!list.is_array()) throw FormatError(FormatErrorKind::schema, "$.restarts", "expected a list");
    std::vector<RestartState> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string at = "$.restarts[" + std::to_string(i) + "]";
        const json& s = list[i];
        only_keys(s, {"restart", "iteration", "rng_state", "best_iteration", "best_objective", "current", "best"}, at);
        RestartState st;
        st.restart = unsigned_field(member(s, "restart", at), at + ".restart");
        st.iteration = unsigned_field(member(s, "iteration", at), at + ".iteration");
        st.rng_state = string_field(member(s, "rng_state", at), at + ".rng_state");
        st.best_iteration = unsigned_field(member(s, "best_iteration", at), at + ".best_iteration");
        st.best_objective = objective_from_json(member(s, "best_objective", at), at + ".best_objective");
        st.current = drawing_from_json(member(s, "current", at), at + ".current");
        st.best = drawing_from_json(member(s, "best", at), at + ".best");
        out.push_back(std::move(st));
    }
    return out;
}

inline std::vector<RestartState> parse_checkpoint(const std::string& text) {
    return checkpoint_from_json(detail::parse_json_text(text));
}

}  // namespace quasicross
