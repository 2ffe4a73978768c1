#pragma once

#include "quasicross/geometry.hpp"

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace quasicross {

/// Crossing bookkeeping for a simple drawing that changes one vertex or one
/// edge route at a time. A change is first proposed, which validates only the
/// edges it touches and computes the resulting counts, and then either
/// committed or dropped.
///
/// Concurrency only needs checking along modified edges: if three edges pass
/// through one point and an unmodified pair among them already crossed there,
/// the third one is modified and sees both crossings at the same location.
template <class C>
class incremental_crossings {
public:
    using point = basic_point<C>;

    struct route_spec {
        std::size_t u = 0;
        std::size_t v = 0;
        std::vector<point> bends;
    };

    incremental_crossings(std::vector<point> vertices, std::vector<route_spec> edges)
        : vertices_(std::move(vertices)), edges_(std::move(edges)), m_(edges_.size()), words_((m_ + 63) / 64) {
        incident_.resize(vertices_.size());
        routes_.resize(m_);
        for (std::size_t e = 0; e < m_; ++e) {
            incident_.at(edges_[e].u).push_back(e);
            incident_.at(edges_[e].v).push_back(e);
            routes_[e] = build_route(e, edges_[e].bends);
        }
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            for (std::size_t j = i + 1; j < vertices_.size(); ++j)
                if (vertices_[i] == vertices_[j]) throw std::invalid_argument("two vertices share a position");
        adj_.assign(m_ * words_, 0);
        in_change_.assign(m_, 0);
        pending_routes_.clear();
        changed_.clear();
        for (std::size_t e = 0; e < m_; ++e) {
            changed_.push_back(e);
            pending_routes_.push_back(routes_[e]);
        }
        pending_vertex_.reset();
        for (std::size_t e : changed_) in_change_[e] = 1;
        if (!check_change()) throw std::invalid_argument(std::string("drawing is not simple: ") + rejection_);
        commit();
    }

    [[nodiscard]] std::size_t vertex_count() const { return vertices_.size(); }
    [[nodiscard]] std::size_t edge_count() const { return m_; }
    [[nodiscard]] const std::vector<point>& vertices() const { return vertices_; }
    [[nodiscard]] const route_spec& edge(std::size_t e) const { return edges_[e]; }
    [[nodiscard]] const std::vector<point>& route(std::size_t e) const { return routes_[e]; }
    [[nodiscard]] std::size_t triples() const { return triples_; }
    [[nodiscard]] std::size_t crossing_pairs() const { return pairs_; }
    [[nodiscard]] bool crossing(std::size_t a, std::size_t b) const {
        return (adj_[a * words_ + b / 64] >> (b % 64)) & 1U;
    }

    /// Move vertex v to p. Returns false (see rejection()) when the result is
    /// not simple.
    bool propose_vertex(std::size_t v, const point& p) {
        begin_change();
        for (std::size_t w = 0; w < vertices_.size(); ++w) {
            if (w != v && vertices_[w] == p) return reject("vertex position already taken");
        }
        pending_vertex_ = {v, p};
        for (std::size_t e : incident_[v]) {
            changed_.push_back(e);
            std::vector<point> r = routes_[e];
            if (edges_[e].u == v) r.front() = p;
            if (edges_[e].v == v) r.back() = p;
            pending_routes_.push_back(std::move(r));
        }
        for (std::size_t e : changed_) in_change_[e] = 1;
        for (std::size_t f = 0; f < m_; ++f) {
            if (in_change_[f]) continue;
            if (polyline_contains<C>(routes_[f], p)) return reject("edge passes through a vertex");
        }
        return check_change();
    }

    /// Replace the bends of edge e.
    bool propose_route(std::size_t e, const std::vector<point>& bends) {
        begin_change();
        changed_.push_back(e);
        pending_routes_.push_back(build_route(e, bends));
        in_change_[e] = 1;
        return check_change();
    }

    [[nodiscard]] std::size_t proposed_triples() const { return pending_triples_; }
    [[nodiscard]] std::size_t proposed_crossing_pairs() const { return pending_pairs_; }
    [[nodiscard]] const char* rejection() const { return rejection_; }

    /// Apply the last successful proposal.
    void commit() {
        if (!pending_ok_) throw std::logic_error("no valid proposal to commit");
        if (pending_vertex_) vertices_[pending_vertex_->first] = pending_vertex_->second;
        for (std::size_t k = 0; k < changed_.size(); ++k) {
            const std::size_t e = changed_[k];
            routes_[e] = std::move(pending_routes_[k]);
            edges_[e].bends.assign(routes_[e].begin() + 1, routes_[e].end() - 1);
        }
        adj_.swap(scratch_);
        triples_ = pending_triples_;
        pairs_ = pending_pairs_;
        clear_change();
    }

private:
    struct crossing_record {
        std::size_t e;
        std::size_t f;
        path_position<C> on_e;
        path_position<C> on_f;
    };

    std::vector<point> build_route(std::size_t e, const std::vector<point>& bends) const {
        std::vector<point> r;
        r.reserve(bends.size() + 2);
        r.push_back(vertices_[edges_[e].u]);
        r.insert(r.end(), bends.begin(), bends.end());
        r.push_back(vertices_[edges_[e].v]);
        return r;
    }

    const std::vector<point>& current_route(std::size_t f) const {
        if (in_change_[f]) {
            for (std::size_t k = 0; k < changed_.size(); ++k)
                if (changed_[k] == f) return pending_routes_[k];
        }
        return routes_[f];
    }

    const point& current_vertex(std::size_t w) const {
        if (pending_vertex_ && pending_vertex_->first == w) return pending_vertex_->second;
        return vertices_[w];
    }

    void begin_change() { clear_change(); }

    void clear_change() {
        for (std::size_t e : changed_) in_change_[e] = 0;
        changed_.clear();
        pending_routes_.clear();
        pending_vertex_.reset();
        pending_ok_ = false;
        rejection_ = "";
    }

    bool reject(const char* why) {
        rejection_ = why;
        pending_ok_ = false;
        return false;
    }

    static std::optional<std::size_t> shared(const route_spec& a, const route_spec& b) {
        if (a.u == b.u || a.u == b.v) return a.u;
        if (a.v == b.u || a.v == b.v) return a.v;
        return std::nullopt;
    }

    bool check_change() {
        records_.clear();
        for (std::size_t k = 0; k < changed_.size(); ++k) {
            const std::size_t e = changed_[k];
            const auto& r = pending_routes_[k];
            for (std::size_t i = 0; i + 1 < r.size(); ++i)
                if (r[i] == r[i + 1]) return reject("zero-length route segment");
            if (self_intersects<C>(r)) return reject("edge route intersects itself");
            for (std::size_t w = 0; w < vertices_.size(); ++w) {
                if (w == edges_[e].u || w == edges_[e].v) continue;
                if (polyline_contains<C>(r, current_vertex(w))) return reject("edge passes through a vertex");
            }
        }
        for (std::size_t k = 0; k < changed_.size(); ++k) {
            const std::size_t e = changed_[k];
            const auto& re = pending_routes_[k];
            for (std::size_t f = 0; f < m_; ++f) {
                if (f == e || (in_change_[f] && f < e)) continue;
                const auto& rf = current_route(f);
                polyline_contacts_into<C>(re, rf, contacts_);
                const bool adjacent = shared(edges_[e], edges_[f]).has_value();
                std::size_t proper = 0;
                for (auto& c : contacts_) {
                    switch (c.kind) {
                        case ContactKind::overlap:
                        case ContactKind::touch:
                            return reject("degenerate contact between edges");
                        case ContactKind::endpoint_contact:
                            break;
                        case ContactKind::proper_crossing:
                            if (adjacent || ++proper > 1) return reject("edges meet more than once");
                            records_.push_back({e, f, std::move(c.on_a), std::move(c.on_b)});
                            break;
                    }
                }
            }
        }
        for (std::size_t e : changed_) {
            along_.clear();
            for (const auto& rec : records_) {
                if (rec.e == e) along_.push_back(&rec.on_e);
                if (rec.f == e) along_.push_back(&rec.on_f);
            }
            std::sort(along_.begin(), along_.end(),
                      [](const auto* p, const auto* q) { return compare_positions(*p, *q) < 0; });
            for (std::size_t i = 0; i + 1 < along_.size(); ++i)
                if (compare_positions(*along_[i], *along_[i + 1]) == 0) return reject("three edges cross at one point");
        }
        update_counts();
        pending_ok_ = true;
        return true;
    }

    void update_counts() {
        scratch_ = adj_;
        for (std::size_t e : changed_) {
            for (std::size_t w = 0; w < words_; ++w) scratch_[e * words_ + w] = 0;
            for (std::size_t f = 0; f < m_; ++f) scratch_[f * words_ + e / 64] &= ~(std::uint64_t{1} << (e % 64));
        }
        for (const auto& rec : records_) {
            scratch_[rec.e * words_ + rec.f / 64] |= std::uint64_t{1} << (rec.f % 64);
            scratch_[rec.f * words_ + rec.e / 64] |= std::uint64_t{1} << (rec.e % 64);
        }
        pending_pairs_ = pairs_ - links_touching(adj_) + links_touching(scratch_);
        pending_triples_ = triples_ - triangles_touching(adj_) + triangles_touching(scratch_);
    }

    // Links with at least one end among the changed edges.
    std::size_t links_touching(const std::vector<std::uint64_t>& g) {
        std::size_t count = 0;
        earlier_.assign(words_, 0);
        for (std::size_t e : sorted_changed()) {
            for (std::size_t w = 0; w < words_; ++w) count += std::popcount(g[e * words_ + w] & ~earlier_[w]);
            earlier_[e / 64] |= std::uint64_t{1} << (e % 64);
        }
        return count;
    }

    // Triangles with at least one corner among the changed edges; each is
    // counted at its smallest changed corner.
    std::size_t triangles_touching(const std::vector<std::uint64_t>& g) {
        std::size_t twice = 0;
        earlier_.assign(words_, 0);
        row_.assign(words_, 0);
        for (std::size_t e : sorted_changed()) {
            for (std::size_t w = 0; w < words_; ++w) row_[w] = g[e * words_ + w] & ~earlier_[w];
            for (std::size_t w = 0; w < words_; ++w) {
                std::uint64_t bits = row_[w];
                while (bits) {
                    const std::size_t y = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
                    bits &= bits - 1;
                    for (std::size_t x = 0; x < words_; ++x) twice += std::popcount(row_[x] & g[y * words_ + x]);
                }
            }
            earlier_[e / 64] |= std::uint64_t{1} << (e % 64);
        }
        return twice / 2;
    }

    const std::vector<std::size_t>& sorted_changed() {
        sorted_ = changed_;
        std::sort(sorted_.begin(), sorted_.end());
        return sorted_;
    }

    std::vector<point> vertices_;
    std::vector<route_spec> edges_;
    std::size_t m_;
    std::size_t words_;
    std::vector<std::vector<std::size_t>> incident_;
    std::vector<std::vector<point>> routes_;
    std::vector<std::uint64_t> adj_;
    std::size_t triples_ = 0;
    std::size_t pairs_ = 0;

    // pending change
    std::vector<std::size_t> changed_;
    std::vector<std::vector<point>> pending_routes_;
    std::vector<char> in_change_;
    std::optional<std::pair<std::size_t, point>> pending_vertex_;
    std::vector<std::uint64_t> scratch_;
    std::size_t pending_triples_ = 0;
    std::size_t pending_pairs_ = 0;
    bool pending_ok_ = false;
    const char* rejection_ = "";

    // scratch buffers
    std::vector<polyline_contact<C>> contacts_;
    std::vector<crossing_record> records_;
    std::vector<const path_position<C>*> along_;
    std::vector<std::uint64_t> earlier_, row_;
    std::vector<std::size_t> sorted_;
};

}  // namespace quasicross
