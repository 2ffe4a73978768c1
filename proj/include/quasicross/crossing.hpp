#pragma once

#include "quasicross/drawing.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace quasicross {

/// Thrown when an operation that needs a simple drawing is given one that
/// is not; carries the full report.
class InvalidDrawing : public std::runtime_error {
public:
    explicit InvalidDrawing(ValidationReport report)
        : std::runtime_error("drawing is not simple"), report_(std::move(report)) {}
    [[nodiscard]] const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

using EdgeTriple = std::array<std::size_t, 3>;

/// Nodes are the drawing's edges; a link joins two edges that cross.
/// Triples of pairwise crossing edges are exactly its triangles.
class CrossingGraph {
public:
    CrossingGraph() = default;
    explicit CrossingGraph(std::size_t nodes) : adjacency_(nodes) {}

    void add_link(std::size_t a, std::size_t b, Point location) {
        if (a == b) throw std::invalid_argument("crossing graph link needs two distinct edges");
        if (a > b) std::swap(a, b);
        if (!locations_.emplace(std::make_pair(a, b), std::move(location)).second) return;
        adjacency_.at(a).insert(std::upper_bound(adjacency_[a].begin(), adjacency_[a].end(), b), b);
        adjacency_.at(b).insert(std::upper_bound(adjacency_[b].begin(), adjacency_[b].end(), a), a);
    }

    [[nodiscard]] std::size_t node_count() const { return adjacency_.size(); }
    [[nodiscard]] std::size_t link_count() const { return locations_.size(); }
    [[nodiscard]] const std::vector<std::size_t>& neighbors(std::size_t node) const { return adjacency_.at(node); }

    [[nodiscard]] bool linked(std::size_t a, std::size_t b) const {
        if (a > b) std::swap(a, b);
        return locations_.contains({a, b});
    }

    /// Exact crossing point of every link, keyed by (smaller, larger) edge index.
    [[nodiscard]] const std::map<std::pair<std::size_t, std::size_t>, Point>& locations() const { return locations_; }

    [[nodiscard]] const Point& location(std::size_t a, std::size_t b) const {
        if (a > b) std::swap(a, b);
        return locations_.at({a, b});
    }

    /// Same nodes, keeping only links whose two endpoints are both kept.
    [[nodiscard]] CrossingGraph restricted(const std::vector<bool>& keep) const {
        CrossingGraph g(node_count());
        for (const auto& [link, p] : locations_)
            if (keep.at(link.first) && keep.at(link.second)) g.add_link(link.first, link.second, p);
        return g;
    }

private:
    std::vector<std::vector<std::size_t>> adjacency_;
    std::map<std::pair<std::size_t, std::size_t>, Point> locations_;
};

struct TripleReport {
    std::size_t triple_count = 0;
    std::vector<EdgeTriple> triples;
    std::size_t crossing_pair_count = 0;
};

/// Crossing graph of a simple drawing. Throws InvalidDrawing otherwise.
inline CrossingGraph crossing_pairs(const Drawing& d) {
    std::vector<PairCrossings> pairs;
    ValidationReport report = validate(d, &pairs);
    if (!report.is_valid) throw InvalidDrawing(std::move(report));
    CrossingGraph g(d.edge_count());
    for (auto& pc : pairs) g.add_link(pc.first, pc.second, std::move(pc.points.front()));
    return g;
}

/// All triangles of g, each as sorted edge indices, in lexicographic order.
///
/// Links are oriented from lower to higher (degree, index) rank; every
/// triangle is then found exactly once by intersecting the forward
/// neighborhoods of a link's two ends.
inline TripleReport count_triples(const CrossingGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto da = g.neighbors(a).size(), db = g.neighbors(b).size();
        return da != db ? da < db : a < b;
    });
    std::vector<std::size_t> rank(n);
    for (std::size_t r = 0; r < n; ++r) rank[order[r]] = r;

    // forward[u]: neighbors of higher rank, sorted by rank
    std::vector<std::vector<std::size_t>> forward(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v : g.neighbors(u))
            if (rank[v] > rank[u]) forward[u].push_back(rank[v]);
        std::sort(forward[u].begin(), forward[u].end());
    }

    TripleReport report;
    report.crossing_pair_count = g.link_count();
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t rv : forward[u]) {
            const auto& fu = forward[u];
            const auto& fv = forward[order[rv]];
            auto i = fu.begin();
            auto j = fv.begin();
            while (i != fu.end() && j != fv.end()) {
                if (*i < *j) {
                    ++i;
                } else if (*j < *i) {
                    ++j;
                } else {
                    EdgeTriple t{u, order[rv], order[*i]};
                    std::sort(t.begin(), t.end());
                    report.triples.push_back(t);
                    ++i;
                    ++j;
                }
            }
        }
    }
    std::sort(report.triples.begin(), report.triples.end());
    report.triple_count = report.triples.size();
    return report;
}

/// Reference count: every edge triple, each pair tested with the public
/// polyline meeting classifier. Cubic; for testing.
inline std::size_t count_triples_bruteforce(const Drawing& d) {
    ValidationReport report = validate(d);
    if (!report.is_valid) throw InvalidDrawing(std::move(report));
    const std::size_t m = d.edge_count();
    std::vector<std::vector<char>> crosses(m, std::vector<char>(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            for (const auto& meeting : polyline_meetings(d.route(i), d.route(j))) {
                if (std::holds_alternative<ProperCrossing>(meeting)) crosses[i][j] = crosses[j][i] = 1;
            }
        }
    }
    std::size_t count = 0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k)
                if (crosses[i][j] && crosses[i][k] && crosses[j][k]) ++count;
    return count;
}

struct QuasiplanarizeResult {
    std::vector<std::size_t> deleted;  // original edge indices, in deletion order
    Drawing residual;
};

/// Deletes, one at a time, the edge lying in the most remaining triples
/// (smallest index on ties) until no triple is left.
inline QuasiplanarizeResult greedy_quasiplanarize(const Drawing& d) {
    TripleReport report = count_triples(crossing_pairs(d));
    std::vector<EdgeTriple> remaining = std::move(report.triples);
    std::vector<bool> removed(d.edge_count(), false);
    QuasiplanarizeResult out;
    while (!remaining.empty()) {
        std::vector<std::size_t> load(d.edge_count(), 0);
        for (const auto& t : remaining)
            for (std::size_t e : t) ++load[e];
        const std::size_t victim =
            static_cast<std::size_t>(std::max_element(load.begin(), load.end()) - load.begin());
        removed[victim] = true;
        out.deleted.push_back(victim);
        std::erase_if(remaining, [&](const EdgeTriple& t) {
            return t[0] == victim || t[1] == victim || t[2] == victim;
        });
    }
    std::vector<Edge> kept;
    for (std::size_t i = 0; i < d.edge_count(); ++i)
        if (!removed[i]) kept.push_back(d.edge(i));
    out.residual = Drawing(d.vertices(), std::move(kept));
    return out;
}

/// Vertices touched by a triple of edges.
inline std::vector<std::size_t> triple_vertices(const Drawing& d, const EdgeTriple& t) {
    std::vector<std::size_t> vs;
    for (std::size_t e : t) {
        vs.push_back(d.edge(e).u);
        vs.push_back(d.edge(e).v);
    }
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

}  // namespace quasicross
