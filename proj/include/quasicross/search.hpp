#pragma once

#include "quasicross/crossing.hpp"
#include "quasicross/drawing.hpp"
#include "quasicross/incremental.hpp"
#include "quasicross/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace quasicross {

struct Objective {
    std::size_t triples = 0;
    std::size_t crossing_pairs = 0;

    friend auto operator<=>(const Objective&, const Objective&) = default;
};

/// Full recount. Throws InvalidDrawing for a non-simple drawing.
inline Objective objective(const Drawing& d) {
    TripleReport r = count_triples(crossing_pairs(d));
    return {r.triple_count, r.crossing_pair_count};
}

enum class MoveKind { PerturbVertex = 0, AddBend = 1, MoveBend = 2, RemoveBend = 3 };

inline const char* to_string(MoveKind k) {
    switch (k) {
        case MoveKind::PerturbVertex: return "PerturbVertex";
        case MoveKind::AddBend: return "AddBend";
        case MoveKind::MoveBend: return "MoveBend";
        case MoveKind::RemoveBend: return "RemoveBend";
    }
    return "unknown";
}

inline std::optional<MoveKind> move_kind_from_string(const std::string& s) {
    for (MoveKind k : {MoveKind::PerturbVertex, MoveKind::AddBend, MoveKind::MoveBend, MoveKind::RemoveBend})
        if (s == to_string(k)) return k;
    return std::nullopt;
}

/// Largest absolute coordinate a move may produce.
inline constexpr long kCoordinateLimit = 1L << 20;

struct SearchConfig {
    std::uint64_t seed = 1;
    std::uint64_t max_iterations = 100000;
    Rational initial_temperature{2};
    Rational cooling_factor{Rational(99999, 100000)};
    /// Indexed by MoveKind.
    std::array<Rational, 4> move_weights{Rational(4), Rational(2), Rational(3), Rational(1)};
    std::size_t max_bends_per_edge = 2;
    Rational perturbation_radius{Rational(1, 4)};
    std::size_t restart_count = 1;
    /// Moves land on multiples of 1 / lattice_denominator.
    std::int64_t lattice_denominator = 65536;
    /// Checkpoint every this many iterations; 0 disables.
    std::uint64_t checkpoint_interval = 0;
    /// Worker threads for restarts; 0 means one per hardware thread.
    std::size_t threads = 0;
    /// Keep one trace record per iteration.
    bool record_iterations = true;

    void check() const {
        if (initial_temperature.sign() <= 0) throw std::invalid_argument("initial_temperature must be positive");
        if (cooling_factor.sign() <= 0 || cooling_factor >= Rational(1))
            throw std::invalid_argument("cooling_factor must lie in (0, 1)");
        bool any = false;
        for (const auto& w : move_weights) {
            if (w.sign() < 0) throw std::invalid_argument("move weights must be nonnegative");
            any |= w.sign() > 0;
        }
        if (!any) throw std::invalid_argument("at least one move weight must be positive");
        if (perturbation_radius.sign() <= 0) throw std::invalid_argument("perturbation_radius must be positive");
        if (perturbation_radius > Rational(kCoordinateLimit))
            throw std::invalid_argument("perturbation_radius exceeds the coordinate limit");
        if (restart_count < 1) throw std::invalid_argument("restart_count must be at least 1");
        if (lattice_denominator < 1 || lattice_denominator > (1L << 20))
            throw std::invalid_argument("lattice_denominator must lie in [1, 2^20]");
        if (max_bends_per_edge > 64) throw std::invalid_argument("max_bends_per_edge must be at most 64");
    }
};

/// A concrete change in lattice units of 1 / lattice_denominator.
///
/// PerturbVertex and MoveBend carry an offset (dx, dy); AddBend carries the
/// absolute lattice point of the new bend, inserted after route point
/// `index`; MoveBend and RemoveBend address bend `index` of edge `target`.
struct Move {
    MoveKind kind = MoveKind::PerturbVertex;
    std::size_t target = 0;
    std::size_t index = 0;
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend bool operator==(const Move&, const Move&) = default;
};

struct MoveOutcome {
    Move move;
    /// Unset when the proposal was rejected.
    std::optional<Drawing> candidate;
    std::optional<Objective> objective;
    std::string rejection;
};

struct TraceRecord {
    std::uint64_t iteration = 0;
    Objective before;
    Objective after;
    MoveKind kind = MoveKind::PerturbVertex;
    bool valid = false;
    bool accepted = false;
    double temperature = 0;
};

struct SearchTrace {
    std::size_t restart = 0;
    std::vector<TraceRecord> records;
    /// (iteration, best objective so far), appended whenever the best improves.
    std::vector<std::pair<std::uint64_t, Objective>> best_timeline;
    std::uint64_t proposals_valid = 0;
    std::uint64_t proposals_accepted = 0;
};

/// Everything needed to continue one restart's chain.
struct RestartState {
    std::size_t restart = 0;
    std::uint64_t iteration = 0;
    std::string rng_state;
    Drawing current;
    Drawing best;
    Objective best_objective;
    std::uint64_t best_iteration = 0;
};

struct AnnealHooks {
    /// Called from the restart's worker thread every checkpoint_interval
    /// iterations and once when the restart finishes.
    std::function<void(const RestartState&)> checkpoint;
    /// States to continue from, matched by restart index.
    std::vector<RestartState> resume;
};

struct AnnealResult {
    Drawing best;
    Objective best_objective;
    Objective initial_objective;
    std::size_t best_restart = 0;
    std::vector<SearchTrace> traces;
    std::vector<RestartState> final_states;
    /// True when the fast integer kernel ran the chains.
    bool integer_kernel = false;
};

namespace detail {

inline std::int64_t to_int64(const mpz_class& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("value exceeds 64 bits");
    return z.get_si();
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Coordinates in which a chain runs. Moves are expressed in lattice units
/// (1 / L); both frames map them to the same rational points.
template <class C>
struct frame;

template <>
struct frame<Rational> {
    std::int64_t lattice = 1;

    [[nodiscard]] Rational from_units(std::int64_t k) const { return Rational(static_cast<long>(k), static_cast<long>(lattice)); }
    [[nodiscard]] std::int64_t floor_units(const Rational& x, std::int64_t div) const {
        return to_int64((x * Rational(static_cast<long>(lattice)) / Rational(static_cast<long>(div))).floor());
    }
    [[nodiscard]] bool in_range(const Rational& x) const {
        return Rational(-kCoordinateLimit) <= x && x <= Rational(kCoordinateLimit);
    }
    [[nodiscard]] Rational to_rational(const Rational& x) const { return x; }
    [[nodiscard]] Rational from_rational(const Rational& x) const { return x; }
    [[nodiscard]] static Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }
};

/// Integer multiples of 1 / scale, where the lattice denominator divides scale.
template <>
struct frame<std::int64_t> {
    std::int64_t lattice = 1;
    std::int64_t scale = 1;

    [[nodiscard]] std::int64_t from_units(std::int64_t k) const { return k * (scale / lattice); }
    [[nodiscard]] std::int64_t floor_units(std::int64_t x, std::int64_t div) const {
        return floor_div(x, (scale / lattice) * div);
    }
    [[nodiscard]] bool in_range(std::int64_t x) const {
        return -kCoordinateLimit * scale <= x && x <= kCoordinateLimit * scale;
    }
    [[nodiscard]] Rational to_rational(std::int64_t x) const {
        return Rational(mpz_class(static_cast<long>(x)), mpz_class(static_cast<long>(scale)));
    }
    [[nodiscard]] std::int64_t from_rational(const Rational& x) const {
        return to_int64(x.numerator() * (mpz_class(static_cast<long>(scale)) / x.denominator()));
    }
    [[nodiscard]] static std::int64_t abs(std::int64_t x) { return x < 0 ? -x : x; }
};

/// The common denominator for an integer frame covering every coordinate of
/// `drawings`, or nothing when some coordinate is out of range or the
/// denominator grows past 2^40.
inline std::optional<std::int64_t> integer_scale(const std::vector<const Drawing*>& drawings, std::int64_t lattice) {
    mpz_class scale(static_cast<long>(lattice));
    const mpz_class limit = mpz_class(1) << 40;
    const Rational bound(kCoordinateLimit);
    auto visit = [&](const Point& p) {
        for (const Rational* c : {&p.x, &p.y}) {
            if (*c > bound || *c < -bound) return false;
            mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), c->denominator().get_mpz_t());
            if (scale > limit) return false;
        }
        return true;
    };
    for (const Drawing* d : drawings) {
        for (const auto& v : d->vertices())
            if (!visit(v.position)) return std::nullopt;
        for (const auto& e : d->edges())
            for (const auto& b : e.bends)
                if (!visit(b)) return std::nullopt;
    }
    return scale.get_si();
}

/// One Markov chain state: a drawing held in frame coordinates with its
/// incremental crossing counts.
template <class C>
class chain_state {
public:
    using point = basic_point<C>;
    using engine = incremental_crossings<C>;

    chain_state(const Drawing& d, const SearchConfig& cfg, frame<C> f)
        : template_(d), cfg_(cfg), frame_(f), engine_(convert_vertices(d, f), convert_edges(d, f)) {
        const Rational units = cfg.perturbation_radius * Rational(static_cast<long>(cfg.lattice_denominator));
        radius_units_ = std::max<std::int64_t>(0, to_int64(units.floor()));
        build_thresholds();
    }

    [[nodiscard]] Objective objective() const { return {engine_.triples(), engine_.crossing_pairs()}; }

    /// Draws a move; nullopt for a move that cannot apply to its target
    /// (no bend to move or remove, or the edge is already at max bends).
    std::optional<Move> sample(RandomStream& rng, MoveKind& kind) const {
        kind = pick_kind(rng);
        Move mv;
        mv.kind = kind;
        const std::size_t n = engine_.vertex_count();
        const std::size_t m = engine_.edge_count();
        switch (kind) {
            case MoveKind::PerturbVertex: {
                if (n == 0) return std::nullopt;
                mv.target = rng.below(n);
                mv.x = rng.between(-radius_units_, radius_units_);
                mv.y = rng.between(-radius_units_, radius_units_);
                return mv;
            }
            case MoveKind::AddBend: {
                if (m == 0) return std::nullopt;
                mv.target = rng.below(m);
                const auto& route = engine_.route(mv.target);
                if (route.size() - 2 >= cfg_.max_bends_per_edge) return std::nullopt;
                mv.index = rng.below(route.size() - 1);
                const point& a = route[mv.index];
                const point& b = route[mv.index + 1];
                const std::int64_t cx = frame_.floor_units(a.x + b.x, 2);
                const std::int64_t cy = frame_.floor_units(a.y + b.y, 2);
                const std::int64_t h = std::max<std::int64_t>(
                    {frame_.floor_units(frame<C>::abs(b.x - a.x), 1), frame_.floor_units(frame<C>::abs(b.y - a.y), 1), 1});
                mv.x = cx + rng.between(-h, h);
                mv.y = cy + rng.between(-h, h);
                return mv;
            }
            case MoveKind::MoveBend:
            case MoveKind::RemoveBend: {
                if (m == 0) return std::nullopt;
                mv.target = rng.below(m);
                const std::size_t bends = engine_.route(mv.target).size() - 2;
                if (bends == 0) return std::nullopt;
                mv.index = rng.below(bends);
                if (kind == MoveKind::MoveBend) {
                    mv.x = rng.between(-radius_units_, radius_units_);
                    mv.y = rng.between(-radius_units_, radius_units_);
                }
                return mv;
            }
        }
        return std::nullopt;
    }

    /// Validates the move and computes the objective it would give; the
    /// move is kept pending until commit().
    std::optional<Objective> evaluate(const Move& mv) {
        rejection_.clear();
        const std::size_t n = engine_.vertex_count();
        const std::size_t m = engine_.edge_count();
        auto fail = [&](const char* why) -> std::optional<Objective> {
            rejection_ = why;
            return std::nullopt;
        };
        bool ok = false;
        switch (mv.kind) {
            case MoveKind::PerturbVertex: {
                if (mv.target >= n) return fail("no such vertex");
                const point& old = engine_.vertices()[mv.target];
                point p{old.x + frame_.from_units(mv.x), old.y + frame_.from_units(mv.y)};
                if (!frame_.in_range(p.x) || !frame_.in_range(p.y)) return fail("coordinate out of range");
                ok = engine_.propose_vertex(mv.target, p);
                break;
            }
            case MoveKind::AddBend: {
                if (mv.target >= m) return fail("no such edge");
                std::vector<point> bends = engine_.edge(mv.target).bends;
                if (bends.size() >= cfg_.max_bends_per_edge) return fail("edge already has the maximum number of bends");
                if (mv.index > bends.size()) return fail("no such route segment");
                point p{frame_.from_units(mv.x), frame_.from_units(mv.y)};
                if (!frame_.in_range(p.x) || !frame_.in_range(p.y)) return fail("coordinate out of range");
                bends.insert(bends.begin() + static_cast<std::ptrdiff_t>(mv.index), p);
                ok = engine_.propose_route(mv.target, bends);
                break;
            }
            case MoveKind::MoveBend:
            case MoveKind::RemoveBend: {
                if (mv.target >= m) return fail("no such edge");
                std::vector<point> bends = engine_.edge(mv.target).bends;
                if (mv.index >= bends.size()) return fail("edge has no such bend");
                if (mv.kind == MoveKind::RemoveBend) {
                    bends.erase(bends.begin() + static_cast<std::ptrdiff_t>(mv.index));
                } else {
                    point& b = bends[mv.index];
                    b = point{b.x + frame_.from_units(mv.x), b.y + frame_.from_units(mv.y)};
                    if (!frame_.in_range(b.x) || !frame_.in_range(b.y)) return fail("coordinate out of range");
                }
                ok = engine_.propose_route(mv.target, bends);
                break;
            }
        }
        if (!ok) return fail(engine_.rejection());
        return Objective{engine_.proposed_triples(), engine_.proposed_crossing_pairs()};
    }

    void commit() { engine_.commit(); }

    [[nodiscard]] const std::string& rejection() const { return rejection_; }

    [[nodiscard]] Drawing drawing() const {
        std::vector<Vertex> vertices = template_.vertices();
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            const point& p = engine_.vertices()[i];
            vertices[i].position = {frame_.to_rational(p.x), frame_.to_rational(p.y)};
        }
        std::vector<Edge> edges = template_.edges();
        for (std::size_t e = 0; e < edges.size(); ++e) {
            edges[e].bends.clear();
            for (const point& b : engine_.edge(e).bends)
                edges[e].bends.push_back({frame_.to_rational(b.x), frame_.to_rational(b.y)});
        }
        return Drawing(std::move(vertices), std::move(edges));
    }

private:
    static std::vector<point> convert_vertices(const Drawing& d, const frame<C>& f) {
        std::vector<point> out;
        for (const auto& v : d.vertices()) out.push_back({f.from_rational(v.position.x), f.from_rational(v.position.y)});
        return out;
    }

    static std::vector<typename engine::route_spec> convert_edges(const Drawing& d, const frame<C>& f) {
        std::vector<typename engine::route_spec> out;
        for (const auto& e : d.edges()) {
            typename engine::route_spec r{e.u, e.v, {}};
            for (const auto& b : e.bends) r.bends.push_back({f.from_rational(b.x), f.from_rational(b.y)});
            out.push_back(std::move(r));
        }
        return out;
    }

    // A raw draw u picks the first kind k with u * total < (w_0 + ... + w_k) * 2^64.
    void build_thresholds() {
        Rational total(0);
        for (const auto& w : cfg_.move_weights) total += w;
        Rational acc(0);
        const Rational two64(mpz_class(mpz_class(1) << 64));
        for (int k = 0; k < 4; ++k) {
            acc += cfg_.move_weights[k];
            const mpz_class t = (acc * two64 / total).ceil();
            const mpz_class hi = t >> 64;
            const mpz_class lo = t - (hi << 64);
            thresholds_[k] = (static_cast<unsigned __int128>(hi.get_ui()) << 64) |
                             std::stoull(lo.get_str());
        }
    }

    MoveKind pick_kind(RandomStream& rng) const {
        const std::uint64_t u = rng.next();
        for (int k = 0; k < 4; ++k) {
            if (cfg_.move_weights[k].sign() == 0) continue;
            if (u < thresholds_[k]) return static_cast<MoveKind>(k);
        }
        throw std::logic_error("move weights do not cover the draw");
    }

    Drawing template_;
    SearchConfig cfg_;
    frame<C> frame_;
    engine engine_;
    std::int64_t radius_units_ = 0;
    std::array<unsigned __int128, 4> thresholds_{};
    std::string rejection_;
};

inline __int128 scalarize(const Objective& o, std::size_t edge_count) {
    const __int128 weight = 1 + static_cast<__int128>(edge_count) * (edge_count - 1) / 2;
    return static_cast<__int128>(o.triples) * weight + static_cast<__int128>(o.crossing_pairs);
}

struct restart_outcome {
    SearchTrace trace;
    RestartState state;
};

template <class C>
restart_outcome run_restart(const Drawing& d0, const SearchConfig& cfg, frame<C> f, std::size_t restart,
                            const RestartState* resume, const AnnealHooks& hooks) {
    RandomStream rng(cfg.seed, restart);
    RestartState st;
    st.restart = restart;
    if (resume) {
        st = *resume;
        rng.restore(st.rng_state);
    } else {
        st.current = d0;
        st.best = d0;
    }
    chain_state<C> chain(st.current, cfg, f);
    if (!resume) st.best_objective = chain.objective();
    const std::size_t m = d0.edge_count();

    restart_outcome out;
    out.trace.restart = restart;
    out.trace.best_timeline.emplace_back(st.iteration, st.best_objective);
    if (cfg.record_iterations && cfg.max_iterations > st.iteration)
        out.trace.records.reserve(cfg.max_iterations - st.iteration);

    const double cooling = cfg.cooling_factor.approx();
    double temperature = cfg.initial_temperature.approx();
    for (std::uint64_t k = 0; k < st.iteration; ++k) temperature *= cooling;

    auto snapshot = [&] {
        st.current = chain.drawing();
        st.rng_state = rng.state();
    };

    Objective current = chain.objective();
    while (st.iteration < cfg.max_iterations) {
        TraceRecord rec;
        rec.iteration = st.iteration;
        rec.before = current;
        rec.after = current;
        rec.temperature = temperature;
        MoveKind kind{};
        std::optional<Move> mv = chain.sample(rng, kind);
        rec.kind = kind;
        std::optional<Objective> next;
        if (mv) next = chain.evaluate(*mv);
        if (next) {
            rec.valid = true;
            rec.after = *next;
            ++out.trace.proposals_valid;
            const __int128 delta = scalarize(*next, m) - scalarize(current, m);
            bool accept = delta <= 0;
            if (!accept) accept = rng.unit() < std::exp(-static_cast<double>(delta) / temperature);
            if (accept) {
                chain.commit();
                current = *next;
                rec.accepted = true;
                ++out.trace.proposals_accepted;
                if (current < st.best_objective) {
                    st.best_objective = current;
                    st.best_iteration = st.iteration + 1;
                    st.best = chain.drawing();
                    out.trace.best_timeline.emplace_back(st.iteration + 1, current);
                }
            }
        }
        if (cfg.record_iterations) out.trace.records.push_back(rec);
        temperature *= cooling;
        ++st.iteration;
        if (hooks.checkpoint && cfg.checkpoint_interval > 0 && st.iteration % cfg.checkpoint_interval == 0 &&
            st.iteration < cfg.max_iterations) {
            snapshot();
            hooks.checkpoint(st);
        }
    }
    snapshot();
    if (hooks.checkpoint) hooks.checkpoint(st);
    out.state = std::move(st);
    return out;
}

template <class C>
std::vector<restart_outcome> run_restarts(const Drawing& d0, const SearchConfig& cfg, frame<C> f,
                                          const AnnealHooks& hooks) {
    const std::size_t count = cfg.restart_count;
    std::vector<std::optional<restart_outcome>> results(count);
    auto resume_for = [&](std::size_t r) -> const RestartState* {
        for (const auto& s : hooks.resume)
            if (s.restart == r) return &s;
        return nullptr;
    };
    std::size_t workers = cfg.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : cfg.threads;
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t r = 0; r < count; ++r) results[r] = run_restart(d0, cfg, f, r, resume_for(r), hooks);
    } else {
        std::mutex lock;
        std::size_t next = 0;
        std::exception_ptr failure;
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t r;
                    {
                        std::lock_guard g(lock);
                        if (next >= count || failure) return;
                        r = next++;
                    }
                    try {
                        auto res = run_restart(d0, cfg, f, r, resume_for(r), hooks);
                        std::lock_guard g(lock);
                        results[r] = std::move(res);
                    } catch (...) {
                        std::lock_guard g(lock);
                        failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }
    std::vector<restart_outcome> out;
    for (auto& r : results) out.push_back(std::move(*r));
    return out;
}

inline void require_valid(const Drawing& d) {
    ValidationReport report = validate(d);
    if (!report.is_valid) throw InvalidDrawing(std::move(report));
}

}  // namespace detail

/// Applies an explicit move to d. Never throws for invalid proposals; they
/// come back with an empty candidate and the reason.
inline MoveOutcome apply_move(const Drawing& d, const SearchConfig& cfg, const Move& mv) {
    detail::require_valid(d);
    detail::chain_state<Rational> chain(d, cfg, detail::frame<Rational>{cfg.lattice_denominator});
    MoveOutcome out;
    out.move = mv;
    if (auto obj = chain.evaluate(mv)) {
        chain.commit();
        out.candidate = chain.drawing();
        out.objective = *obj;
    } else {
        out.rejection = chain.rejection();
    }
    return out;
}

/// Draws one random move for d with the annealer's proposal distribution and
/// applies it.
inline MoveOutcome propose_move(const Drawing& d, const SearchConfig& cfg, RandomStream& rng) {
    cfg.check();
    detail::require_valid(d);
    detail::chain_state<Rational> chain(d, cfg, detail::frame<Rational>{cfg.lattice_denominator});
    MoveKind kind{};
    std::optional<Move> mv = chain.sample(rng, kind);
    if (!mv) {
        MoveOutcome out;
        out.move.kind = kind;
        out.rejection = kind == MoveKind::AddBend ? "edge already has the maximum number of bends" : "edge has no bends";
        return out;
    }
    return apply_move(d, cfg, *mv);
}

/// Simulated annealing over drawings of d0's graph, minimizing triples and
/// then crossing pairs. The returned best drawing is recounted from scratch.
inline AnnealResult anneal(const Drawing& d0, const SearchConfig& cfg, const AnnealHooks& hooks = {},
                           bool allow_integer_kernel = true) {
    cfg.check();
    detail::require_valid(d0);
    AnnealResult result;
    result.initial_objective = objective(d0);

    std::vector<const Drawing*> all{&d0};
    for (const auto& s : hooks.resume) {
        if (s.current.vertex_count() != d0.vertex_count() || s.current.edge_count() != d0.edge_count())
            throw std::invalid_argument("checkpoint does not match the input graph");
        all.push_back(&s.current);
        all.push_back(&s.best);
    }
    std::optional<std::int64_t> scale =
        allow_integer_kernel ? detail::integer_scale(all, cfg.lattice_denominator) : std::nullopt;

    std::vector<detail::restart_outcome> runs;
    if (scale) {
        result.integer_kernel = true;
        runs = detail::run_restarts(d0, cfg, detail::frame<std::int64_t>{cfg.lattice_denominator, *scale}, hooks);
    } else {
        runs = detail::run_restarts(d0, cfg, detail::frame<Rational>{cfg.lattice_denominator}, hooks);
    }

    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
        if (runs[r].state.best_objective < runs[best].state.best_objective) best = r;
    result.best_restart = best;
    result.best = runs[best].state.best;
    result.best_objective = runs[best].state.best_objective;
    for (auto& r : runs) {
        result.traces.push_back(std::move(r.trace));
        result.final_states.push_back(std::move(r.state));
    }

    const Objective recount = objective(result.best);
    if (recount != result.best_objective)
        throw std::logic_error("incremental objective disagrees with the full recount");
    return result;
}

}  // namespace quasicross
