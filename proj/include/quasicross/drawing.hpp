#pragma once

#include "quasicross/geometry.hpp"

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace quasicross {

struct Vertex {
    std::string id;
    Point position;

    friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Edge as written in a drawing file: endpoints by vertex id.
struct EdgeSpec {
    std::string u;
    std::string v;
    std::vector<Point> bends;
    std::optional<std::string> tag;
};

/// Edge as stored: endpoints by vertex index.
struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
    std::vector<Point> bends;
    std::optional<std::string> tag;

    friend bool operator==(const Edge&, const Edge&) = default;
};

enum class DrawingErrorKind {
    duplicate_vertex_id,
    duplicate_position,
    unknown_endpoint,
    self_loop,
    duplicate_edge,
    degenerate_route,
};

inline const char* to_string(DrawingErrorKind k) {
    switch (k) {
        case DrawingErrorKind::duplicate_vertex_id: return "duplicate_vertex_id";
        case DrawingErrorKind::duplicate_position: return "duplicate_position";
        case DrawingErrorKind::unknown_endpoint: return "unknown_endpoint";
        case DrawingErrorKind::self_loop: return "self_loop";
        case DrawingErrorKind::duplicate_edge: return "duplicate_edge";
        case DrawingErrorKind::degenerate_route: return "degenerate_route";
    }
    return "unknown";
}

class DrawingError : public std::invalid_argument {
public:
    DrawingError(DrawingErrorKind kind, const std::string& what)
        : std::invalid_argument(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    [[nodiscard]] DrawingErrorKind kind() const { return kind_; }

private:
    DrawingErrorKind kind_;
};

/// A straight-line-or-polyline drawing of a simple graph with exact
/// coordinates. Structurally well-formed by construction; geometric
/// simplicity is checked separately by validate().
class Drawing {
public:
    Drawing() = default;

    Drawing(std::vector<Vertex> vertices, std::vector<Edge> edges)
        : vertices_(std::move(vertices)), edges_(std::move(edges)) {
        check_and_index();
    }

    Drawing(std::vector<Vertex> vertices, const std::vector<EdgeSpec>& specs) : vertices_(std::move(vertices)) {
        index_vertices();
        edges_.reserve(specs.size());
        for (const auto& s : specs) {
            edges_.push_back({lookup(s.u), lookup(s.v), s.bends, s.tag});
        }
        check_and_index();
    }

    [[nodiscard]] std::size_t vertex_count() const { return vertices_.size(); }
    [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
    [[nodiscard]] const std::vector<Vertex>& vertices() const { return vertices_; }
    [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
    [[nodiscard]] const Vertex& vertex(std::size_t i) const { return vertices_.at(i); }
    [[nodiscard]] const Edge& edge(std::size_t i) const { return edges_.at(i); }

    /// [pos(u), bends..., pos(v)]
    [[nodiscard]] const std::vector<Point>& route(std::size_t edge) const { return routes_.at(edge); }

    [[nodiscard]] std::optional<std::size_t> find_vertex(const std::string& id) const {
        auto it = by_id_.find(id);
        if (it == by_id_.end()) return std::nullopt;
        return it->second;
    }

    [[nodiscard]] std::optional<std::size_t> find_vertex_at(const Point& p) const {
        auto it = by_position_.find(p);
        if (it == by_position_.end()) return std::nullopt;
        return it->second;
    }

    /// "u-v" with vertex ids, the display name of an edge.
    [[nodiscard]] std::string edge_name(std::size_t i) const {
        const Edge& e = edges_.at(i);
        return vertices_[e.u].id + "-" + vertices_[e.v].id;
    }

    friend bool operator==(const Drawing& a, const Drawing& b) {
        return a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
    }

private:
    std::size_t lookup(const std::string& id) const {
        auto it = by_id_.find(id);
        if (it == by_id_.end()) throw DrawingError(DrawingErrorKind::unknown_endpoint, "no vertex \"" + id + "\"");
        return it->second;
    }

    void index_vertices() {
        by_id_.clear();
        by_position_.clear();
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            if (!by_id_.emplace(vertices_[i].id, i).second)
                throw DrawingError(DrawingErrorKind::duplicate_vertex_id, "\"" + vertices_[i].id + "\"");
            if (!by_position_.emplace(vertices_[i].position, i).second)
                throw DrawingError(DrawingErrorKind::duplicate_position, "vertex \"" + vertices_[i].id + "\"");
        }
    }

    void check_and_index() {
        index_vertices();
        std::set<std::pair<std::size_t, std::size_t>> seen;
        routes_.clear();
        routes_.reserve(edges_.size());
        for (const auto& e : edges_) {
            if (e.u >= vertices_.size() || e.v >= vertices_.size())
                throw DrawingError(DrawingErrorKind::unknown_endpoint, "edge endpoint index out of range");
            if (e.u == e.v) throw DrawingError(DrawingErrorKind::self_loop, "at \"" + vertices_[e.u].id + "\"");
            if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second)
                throw DrawingError(DrawingErrorKind::duplicate_edge,
                                   vertices_[e.u].id + "-" + vertices_[e.v].id);
            std::vector<Point> r;
            r.reserve(e.bends.size() + 2);
            r.push_back(vertices_[e.u].position);
            r.insert(r.end(), e.bends.begin(), e.bends.end());
            r.push_back(vertices_[e.v].position);
            for (std::size_t k = 0; k + 1 < r.size(); ++k)
                if (r[k] == r[k + 1])
                    throw DrawingError(DrawingErrorKind::degenerate_route,
                                       "repeated point on edge " + vertices_[e.u].id + "-" + vertices_[e.v].id);
            routes_.push_back(std::move(r));
        }
    }

    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Point>> routes_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::map<Point, std::size_t> by_position_;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class ViolationKind {
    MultipleMeetings,
    DegenerateContact,
    EdgeThroughVertex,
    SelfIntersection,
    ConcurrentCrossings,
};

inline const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::MultipleMeetings: return "MultipleMeetings";
        case ViolationKind::DegenerateContact: return "DegenerateContact";
        case ViolationKind::EdgeThroughVertex: return "EdgeThroughVertex";
        case ViolationKind::SelfIntersection: return "SelfIntersection";
        case ViolationKind::ConcurrentCrossings: return "ConcurrentCrossings";
    }
    return "unknown";
}

struct Violation {
    ViolationKind kind;
    std::vector<std::size_t> edges;
    std::optional<std::size_t> vertex;
    std::optional<Point> location;
};

struct ValidationReport {
    bool is_valid = true;
    std::vector<Violation> violations;

    [[nodiscard]] bool has(ViolationKind k) const {
        for (const auto& v : violations)
            if (v.kind == k) return true;
        return false;
    }
};

/// Proper crossings of one edge pair, in order along the lower-index edge.
struct PairCrossings {
    std::size_t first;
    std::size_t second;
    std::vector<Point> points;
};

namespace detail {

inline std::optional<std::size_t> shared_endpoint(const Edge& a, const Edge& b) {
    if (a.u == b.u || a.u == b.v) return a.u;
    if (a.v == b.u || a.v == b.v) return a.v;
    return std::nullopt;
}

inline bool is_endpoint(const Edge& e, std::size_t vertex) { return e.u == vertex || e.v == vertex; }

}  // namespace detail

/// Checks the simple-drawing conditions: every edge pair meets at most once,
/// adjacent edges meet only at their common vertex, no degenerate contact,
/// no edge through a foreign vertex, no self-intersection, and no point
/// shared by two different crossings.
///
/// When `crossings` is non-null it receives the proper crossings of every
/// edge pair that has at least one.
inline ValidationReport validate(const Drawing& d, std::vector<PairCrossings>* crossings = nullptr) {
    ValidationReport report;
    const std::size_t m = d.edge_count();
    auto flag = [&](Violation v) { report.violations.push_back(std::move(v)); };

    for (std::size_t i = 0; i < m; ++i) {
        if (self_intersects<Rational>(d.route(i))) flag({ViolationKind::SelfIntersection, {i}, std::nullopt, std::nullopt});
    }

    for (std::size_t i = 0; i < m; ++i) {
        const Edge& e = d.edge(i);
        for (std::size_t w = 0; w < d.vertex_count(); ++w) {
            if (detail::is_endpoint(e, w)) continue;
            if (polyline_contains<Rational>(d.route(i), d.vertex(w).position))
                flag({ViolationKind::EdgeThroughVertex, {i}, w, d.vertex(w).position});
        }
    }

    std::map<Point, std::vector<std::pair<std::size_t, std::size_t>>> crossing_sites;
    for (std::size_t i = 0; i < m; ++i) {
        const Edge& ei = d.edge(i);
        for (std::size_t j = i + 1; j < m; ++j) {
            const Edge& ej = d.edge(j);
            const auto shared = detail::shared_endpoint(ei, ej);
            std::vector<Point> proper;
            for (const auto& c : polyline_contacts<Rational>(d.route(i), d.route(j))) {
                if (c.kind == ContactKind::overlap) {
                    flag({ViolationKind::DegenerateContact, {i, j}, std::nullopt, std::nullopt});
                    continue;
                }
                Point p = point_at(d.route(i), c.on_a);
                if (c.kind == ContactKind::proper_crossing) {
                    proper.push_back(std::move(p));
                    continue;
                }
                if (c.kind == ContactKind::endpoint_contact && shared) continue;
                // A touch at a vertex of exactly one of the two edges is that
                // vertex lying on the other edge, already reported above.
                auto at = d.find_vertex_at(p);
                if (at && (detail::is_endpoint(ei, *at) != detail::is_endpoint(ej, *at))) continue;
                flag({ViolationKind::DegenerateContact, {i, j}, std::nullopt, std::move(p)});
            }
            const std::size_t allowed = shared ? 0 : 1;
            if (proper.size() > allowed)
                flag({ViolationKind::MultipleMeetings, {i, j}, std::nullopt, proper[allowed]});
            for (const auto& p : proper) crossing_sites[p].emplace_back(i, j);
            if (crossings && !proper.empty()) crossings->push_back({i, j, std::move(proper)});
        }
    }

    for (const auto& [p, pairs] : crossing_sites) {
        if (pairs.size() < 2) continue;
        std::set<std::size_t> involved;
        for (auto [a, b] : pairs) {
            involved.insert(a);
            involved.insert(b);
        }
        flag({ViolationKind::ConcurrentCrossings, {involved.begin(), involved.end()}, std::nullopt, p});
    }

    report.is_valid = report.violations.empty();
    return report;
}

// ---------------------------------------------------------------------------
// Generators and transforms
// ---------------------------------------------------------------------------

/// Straight-line drawing of K_n on points of the parabola y = x^2.
/// Abscissae start at i = 1..n; if any pair of crossings coincides, attempt r
/// moves abscissa i to i + r/2^i. Vertex ids are "1".."n" and edges are listed
/// in lexicographic order of (i, j), i < j.
inline Drawing convex_complete(int n) {
    if (n < 3 || n > 64) throw std::invalid_argument("convex_complete needs 3 <= n <= 64");
    constexpr int max_attempts = 8;
    ValidationReport last;
    for (int attempt = 0; attempt <= max_attempts; ++attempt) {
        std::vector<Vertex> vertices;
        for (int i = 1; i <= n; ++i) {
            Rational x(i);
            if (attempt > 0) {
                mpz_class two_pow;
                mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, static_cast<unsigned long>(i));
                x += Rational(mpz_class(attempt), two_pow);
            }
            vertices.push_back({std::to_string(i), {x, x * x}});
        }
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
            for (std::size_t j = i + 1; j < static_cast<std::size_t>(n); ++j) edges.push_back({i, j, {}, std::nullopt});
        Drawing d(std::move(vertices), std::move(edges));
        last = validate(d);
        if (last.is_valid) return d;
    }
    std::string why;
    for (const auto& v : last.violations) {
        if (!why.empty()) why += ", ";
        why += to_string(v.kind);
    }
    throw std::runtime_error("convex_complete(" + std::to_string(n) + ") still invalid after retries: " + why);
}

/// x' = a x + b y + tx, y' = c x + d y + ty.
struct AffineMap {
    Rational a{1}, b{0}, c{0}, d{1}, tx{0}, ty{0};

    [[nodiscard]] Rational determinant() const { return a * d - b * c; }
    [[nodiscard]] Point operator()(const Point& p) const { return {a * p.x + b * p.y + tx, c * p.x + d * p.y + ty}; }
};

inline Drawing affine_transform(const Drawing& d, const AffineMap& m) {
    if (m.determinant().sign() == 0) throw std::invalid_argument("affine map is singular");
    std::vector<Vertex> vertices = d.vertices();
    for (auto& v : vertices) v.position = m(v.position);
    std::vector<Edge> edges = d.edges();
    for (auto& e : edges)
        for (auto& b : e.bends) b = m(b);
    return Drawing(std::move(vertices), std::move(edges));
}

/// The sub-drawing induced by `keep`: those vertices and every edge with
/// both endpoints kept, routes unchanged. Order follows the original.
inline Drawing subdrawing(const Drawing& d, const std::set<std::string>& keep) {
    std::vector<bool> kept(d.vertex_count(), false);
    for (const auto& id : keep) {
        auto i = d.find_vertex(id);
        if (!i) throw DrawingError(DrawingErrorKind::unknown_endpoint, "cannot keep unknown vertex \"" + id + "\"");
        kept[*i] = true;
    }
    std::vector<Vertex> vertices;
    std::vector<std::size_t> remap(d.vertex_count(), 0);
    for (std::size_t i = 0; i < d.vertex_count(); ++i) {
        if (!kept[i]) continue;
        remap[i] = vertices.size();
        vertices.push_back(d.vertex(i));
    }
    std::vector<Edge> edges;
    for (const auto& e : d.edges()) {
        if (kept[e.u] && kept[e.v]) edges.push_back({remap[e.u], remap[e.v], e.bends, e.tag});
    }
    return Drawing(std::move(vertices), std::move(edges));
}

}  // namespace quasicross
