#pragma once

#include "quasicross/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <variant>
#include <vector>

namespace quasicross {

// ---------------------------------------------------------------------------
// Coordinate rings
//
// The kernel is written once over a coordinate type C. Differences of two
// coordinates must be exact in C, and products of two differences exact in
// coord_traits<C>::wide. Two instantiations exist: Rational (arbitrary
// precision, used by the public API) and std::int64_t (an integer lattice with
// |coordinate| <= 2^60, used by the annealer's inner loop).
// ---------------------------------------------------------------------------

template <class C>
struct coord_traits;

template <>
struct coord_traits<Rational> {
    using wide = Rational;
    static const Rational& widen(const Rational& c) { return c; }
    static int sign(const Rational& w) { return w.sign(); }
};

template <>
struct coord_traits<std::int64_t> {
    using wide = __int128;
    static __int128 widen(std::int64_t c) { return c; }
    static int sign(__int128 w) { return (w > 0) - (w < 0); }
};

template <class C>
using wide_t = typename coord_traits<C>::wide;

/// num / den with den > 0.
template <class W>
struct fraction {
    W num{};
    W den{1};

    [[nodiscard]] bool is_zero() const { return num == W{0}; }
    [[nodiscard]] bool is_one() const { return num == den; }
    [[nodiscard]] bool strictly_inside_unit() const { return num > W{0} && num < den; }
};

template <class W>
fraction<W> make_fraction(W num, W den) {
    if (den < W{0}) {
        num = -num;
        den = -den;
    }
    return {std::move(num), std::move(den)};
}

inline int compare_fractions(const fraction<Rational>& a, const fraction<Rational>& b) {
    Rational lhs = a.num * b.den;
    Rational rhs = b.num * a.den;
    return lhs < rhs ? -1 : (rhs < lhs ? 1 : 0);
}

namespace detail {

struct u256 {
    unsigned __int128 hi;
    unsigned __int128 lo;
};

inline u256 mul_wide(unsigned __int128 a, unsigned __int128 b) {
    using u128 = unsigned __int128;
    const std::uint64_t a0 = static_cast<std::uint64_t>(a), a1 = static_cast<std::uint64_t>(a >> 64);
    const std::uint64_t b0 = static_cast<std::uint64_t>(b), b1 = static_cast<std::uint64_t>(b >> 64);
    const u128 p00 = static_cast<u128>(a0) * b0;
    const u128 p01 = static_cast<u128>(a0) * b1;
    const u128 p10 = static_cast<u128>(a1) * b0;
    const u128 p11 = static_cast<u128>(a1) * b1;
    const u128 mid = (p00 >> 64) + static_cast<std::uint64_t>(p01) + static_cast<std::uint64_t>(p10);
    return {p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64), (mid << 64) | static_cast<std::uint64_t>(p00)};
}

inline unsigned __int128 magnitude(__int128 v) {
    return v < 0 ? static_cast<unsigned __int128>(0) - static_cast<unsigned __int128>(v)
                 : static_cast<unsigned __int128>(v);
}

}  // namespace detail

/// Exact comparison of a/b and c/d (b, d > 0) through 256-bit products.
inline int compare_fractions(const fraction<__int128>& x, const fraction<__int128>& y) {
    const int sx = (x.num > 0) - (x.num < 0);
    const int sy = (y.num > 0) - (y.num < 0);
    if (sx != sy) return sx < sy ? -1 : 1;
    if (sx == 0) return 0;
    const detail::u256 l = detail::mul_wide(detail::magnitude(x.num), detail::magnitude(y.den));
    const detail::u256 r = detail::mul_wide(detail::magnitude(y.num), detail::magnitude(x.den));
    int c = 0;
    if (l.hi != r.hi) {
        c = l.hi < r.hi ? -1 : 1;
    } else if (l.lo != r.lo) {
        c = l.lo < r.lo ? -1 : 1;
    }
    return sx > 0 ? c : -c;
}

// ---------------------------------------------------------------------------
// Points and predicates
// ---------------------------------------------------------------------------

template <class C>
struct basic_point {
    C x{};
    C y{};

    friend bool operator==(const basic_point& p, const basic_point& q) { return p.x == q.x && p.y == q.y; }
    friend bool operator!=(const basic_point& p, const basic_point& q) { return !(p == q); }
    friend bool operator<(const basic_point& p, const basic_point& q) {
        return p.x < q.x || (p.x == q.x && p.y < q.y);
    }
};

using Point = basic_point<Rational>;

enum class Orientation { Right = -1, Collinear = 0, Left = 1 };

template <class C>
wide_t<C> cross(const C& ux, const C& uy, const C& vx, const C& vy) {
    using T = coord_traits<C>;
    return T::widen(ux) * T::widen(vy) - T::widen(uy) * T::widen(vx);
}

template <class C>
wide_t<C> dot(const C& ux, const C& uy, const C& vx, const C& vy) {
    using T = coord_traits<C>;
    return T::widen(ux) * T::widen(vx) + T::widen(uy) * T::widen(vy);
}

/// Sign of (q - p) x (r - p).
template <class C>
int orient_sign(const basic_point<C>& p, const basic_point<C>& q, const basic_point<C>& r) {
    return coord_traits<C>::sign(cross<C>(q.x - p.x, q.y - p.y, r.x - p.x, r.y - p.y));
}

template <class C>
Orientation orientation(const basic_point<C>& p, const basic_point<C>& q, const basic_point<C>& r) {
    return static_cast<Orientation>(orient_sign(p, q, r));
}

/// True when r lies on the closed segment [p, q].
template <class C>
bool on_segment(const basic_point<C>& p, const basic_point<C>& q, const basic_point<C>& r) {
    if (orient_sign(p, q, r) != 0) return false;
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
           r.y <= std::max(p.y, q.y);
}

/// A segment with distinct endpoints.
struct Segment {
    Point a;
    Point b;

    Segment(Point from, Point to) : a(std::move(from)), b(std::move(to)) {
        if (a == b) throw std::invalid_argument("zero-length segment");
    }
};

// ---------------------------------------------------------------------------
// Segment contact, parametrized
// ---------------------------------------------------------------------------

enum class ContactShape { none, point, overlap };

/// Where two segments a-b and c-d touch. For a point contact, `on_first` is
/// the parameter along a-b and `on_second` the parameter along c-d.
template <class C>
struct segment_contact {
    ContactShape shape = ContactShape::none;
    fraction<wide_t<C>> on_first{};
    fraction<wide_t<C>> on_second{};
};

template <class C>
segment_contact<C> contact(const basic_point<C>& a, const basic_point<C>& b, const basic_point<C>& c,
                           const basic_point<C>& d) {
    using W = wide_t<C>;
    using T = coord_traits<C>;
    segment_contact<C> out;
    if (std::max(a.x, b.x) < std::min(c.x, d.x) || std::max(c.x, d.x) < std::min(a.x, b.x) ||
        std::max(a.y, b.y) < std::min(c.y, d.y) || std::max(c.y, d.y) < std::min(a.y, b.y))
        return out;

    const int o1 = orient_sign(a, b, c);
    const int o2 = orient_sign(a, b, d);
    if (o1 == 0 && o2 == 0) {
        // Collinear: project onto the axis along which a-b is not constant.
        const bool use_x = a.x != b.x;
        auto coord = [&](const basic_point<C>& p) -> W { return T::widen(use_x ? p.x : p.y); };
        const W base = coord(a);
        const W span = coord(b) - base;
        fraction<W> tc = make_fraction<W>(coord(c) - base, span);
        fraction<W> td = make_fraction<W>(coord(d) - base, span);
        const fraction<W> zero{W{0}, W{1}};
        const fraction<W> one{W{1}, W{1}};
        const bool c_first = compare_fractions(tc, td) < 0;
        const fraction<W>& lo = c_first ? tc : td;
        const fraction<W>& hi = c_first ? td : tc;
        if (compare_fractions(hi, zero) < 0 || compare_fractions(lo, one) > 0) return out;
        if (compare_fractions(hi, zero) == 0) {
            // Touch at a, which is whichever of c and d sits at parameter 0.
            out.shape = ContactShape::point;
            out.on_first = zero;
            out.on_second = (c == a) ? zero : one;
            return out;
        }
        if (compare_fractions(lo, one) == 0) {
            out.shape = ContactShape::point;
            out.on_first = one;
            out.on_second = (c == b) ? zero : one;
            return out;
        }
        out.shape = ContactShape::overlap;
        return out;
    }
    if (o1 * o2 > 0) return out;
    const int o3 = orient_sign(c, d, a);
    const int o4 = orient_sign(c, d, b);
    if (o3 * o4 > 0) return out;

    const C abx = b.x - a.x, aby = b.y - a.y;
    const C cdx = d.x - c.x, cdy = d.y - c.y;
    const C acx = c.x - a.x, acy = c.y - a.y;
    const W denom = cross<C>(abx, aby, cdx, cdy);
    out.shape = ContactShape::point;
    out.on_first = make_fraction<W>(cross<C>(acx, acy, cdx, cdy), denom);
    out.on_second = make_fraction<W>(cross<C>(acx, acy, abx, aby), denom);
    return out;
}

// ---------------------------------------------------------------------------
// Public meeting classification (Rational)
// ---------------------------------------------------------------------------

struct NoMeeting {
    friend bool operator==(const NoMeeting&, const NoMeeting&) = default;
};
struct ProperCrossing {
    Point point;
    friend bool operator==(const ProperCrossing&, const ProperCrossing&) = default;
};
struct EndpointContact {
    Point point;
    friend bool operator==(const EndpointContact&, const EndpointContact&) = default;
};
struct TouchDegenerate {
    Point point;
    friend bool operator==(const TouchDegenerate&, const TouchDegenerate&) = default;
};
struct OverlapDegenerate {
    friend bool operator==(const OverlapDegenerate&, const OverlapDegenerate&) = default;
};

using MeetingKind = std::variant<NoMeeting, ProperCrossing, EndpointContact, TouchDegenerate, OverlapDegenerate>;

inline Point point_at(const Point& a, const Point& b, const fraction<Rational>& t) {
    Rational s = t.num / t.den;
    return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
}

inline MeetingKind segment_meeting(const Segment& s1, const Segment& s2) {
    auto c = contact(s1.a, s1.b, s2.a, s2.b);
    switch (c.shape) {
        case ContactShape::none:
            return NoMeeting{};
        case ContactShape::overlap:
            return OverlapDegenerate{};
        case ContactShape::point:
            break;
    }
    Point p = point_at(s1.a, s1.b, c.on_first);
    const bool end1 = c.on_first.is_zero() || c.on_first.is_one();
    const bool end2 = c.on_second.is_zero() || c.on_second.is_one();
    if (end1 && end2) return EndpointContact{p};
    if (!end1 && !end2) return ProperCrossing{p};
    return TouchDegenerate{p};
}

// ---------------------------------------------------------------------------
// Polylines
// ---------------------------------------------------------------------------

/// A location along a polyline: segment index plus parameter in [0, 1).
/// The final vertex is the only location with parameter 1.
template <class C>
struct path_position {
    std::size_t segment = 0;
    fraction<wide_t<C>> t{};
};

template <class C>
int compare_positions(const path_position<C>& p, const path_position<C>& q) {
    if (p.segment != q.segment) return p.segment < q.segment ? -1 : 1;
    return compare_fractions(p.t, q.t);
}

template <class C>
path_position<C> normalized_position(std::size_t segment, fraction<wide_t<C>> t, std::size_t segment_count) {
    if (t.is_one() && segment + 1 < segment_count) return {segment + 1, {wide_t<C>{0}, wide_t<C>{1}}};
    return {segment, std::move(t)};
}

template <class C>
bool is_path_end(const path_position<C>& p, std::size_t segment_count) {
    return (p.segment == 0 && p.t.is_zero()) || (p.segment + 1 == segment_count && p.t.is_one());
}

enum class ContactKind { proper_crossing, endpoint_contact, touch, overlap };

template <class C>
struct polyline_contact {
    ContactKind kind;
    path_position<C> on_a;
    path_position<C> on_b;
};

namespace detail {

template <class C>
struct arm_pair {
    C ux, uy, vx, vy;
};

/// The two directions leaving an interior location of a polyline.
template <class C>
arm_pair<C> arms_at(std::span<const basic_point<C>> p, const path_position<C>& pos) {
    const std::size_t i = pos.segment;
    if (pos.t.is_zero()) {
        return {p[i - 1].x - p[i].x, p[i - 1].y - p[i].y, p[i + 1].x - p[i].x, p[i + 1].y - p[i].y};
    }
    return {p[i].x - p[i + 1].x, p[i].y - p[i + 1].y, p[i + 1].x - p[i].x, p[i + 1].y - p[i].y};
}

enum class sector_side { inside, outside, boundary };

/// Side of direction w relative to the open counterclockwise sector from u to v.
template <class C>
sector_side side_of(const arm_pair<C>& s, const C& wx, const C& wy) {
    using T = coord_traits<C>;
    auto along = [&](const C& ax, const C& ay) {
        return T::sign(cross<C>(ax, ay, wx, wy)) == 0 && T::sign(dot<C>(ax, ay, wx, wy)) > 0;
    };
    if (along(s.ux, s.uy) || along(s.vx, s.vy)) return sector_side::boundary;
    const int uv = T::sign(cross<C>(s.ux, s.uy, s.vx, s.vy));
    const int uw = T::sign(cross<C>(s.ux, s.uy, wx, wy));
    const int wv = T::sign(cross<C>(wx, wy, s.vx, s.vy));
    bool inside;
    if (uv > 0) {
        inside = uw > 0 && wv > 0;
    } else if (uv < 0) {
        const int vw = T::sign(cross<C>(s.vx, s.vy, wx, wy));
        const int wu = T::sign(cross<C>(wx, wy, s.ux, s.uy));
        inside = !(vw > 0 && wu > 0);
    } else {
        inside = uw > 0;
    }
    return inside ? sector_side::inside : sector_side::outside;
}

template <class C>
ContactKind classify_interior(std::span<const basic_point<C>> a, const path_position<C>& pa,
                              std::span<const basic_point<C>> b, const path_position<C>& pb) {
    using T = coord_traits<C>;
    const arm_pair<C> sa = arms_at(a, pa);
    // A polyline folding straight back onto itself has no sides.
    if (T::sign(cross<C>(sa.ux, sa.uy, sa.vx, sa.vy)) == 0 && T::sign(dot<C>(sa.ux, sa.uy, sa.vx, sa.vy)) > 0)
        return ContactKind::touch;
    const arm_pair<C> sb = arms_at(b, pb);
    const sector_side s1 = side_of(sa, sb.ux, sb.uy);
    const sector_side s2 = side_of(sa, sb.vx, sb.vy);
    if (s1 == sector_side::boundary || s2 == sector_side::boundary) return ContactKind::touch;
    return s1 != s2 ? ContactKind::proper_crossing : ContactKind::touch;
}

}  // namespace detail

/// All contacts between polylines a and b, one entry per distinct location
/// along a (sorted by that location), followed by one entry per collinear
/// overlapping segment pair. A contact at a bend is reported once; passing
/// transversally through the other polyline at a bend is a proper crossing.
/// Locations are keyed along a, so a is assumed not to self-intersect.
/// `out` is cleared first; its capacity is reused.
template <class C>
void polyline_contacts_into(std::span<const basic_point<C>> a, std::span<const basic_point<C>> b,
                            std::vector<polyline_contact<C>>& out) {
    const std::size_t na = a.size() - 1;
    const std::size_t nb = b.size() - 1;
    out.clear();
    std::size_t overlaps = 0;
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            auto c = contact(a[i], a[i + 1], b[j], b[j + 1]);
            if (c.shape == ContactShape::none) continue;
            if (c.shape == ContactShape::overlap) {
                // kept at the front until the point contacts are sorted
                out.insert(out.begin(), polyline_contact<C>{ContactKind::overlap, {i, {}}, {j, {}}});
                ++overlaps;
                continue;
            }
            out.push_back({ContactKind::touch, normalized_position<C>(i, std::move(c.on_first), na),
                           normalized_position<C>(j, std::move(c.on_second), nb)});
        }
    }
    const auto first_point = out.begin() + static_cast<std::ptrdiff_t>(overlaps);
    if (out.end() - first_point > 1) {
        std::sort(first_point, out.end(),
                  [](const auto& p, const auto& q) { return compare_positions(p.on_a, q.on_a) < 0; });
        out.erase(std::unique(first_point, out.end(),
                              [](const auto& p, const auto& q) { return compare_positions(p.on_a, q.on_a) == 0; }),
                  out.end());
    }
    for (auto it = out.begin() + static_cast<std::ptrdiff_t>(overlaps); it != out.end(); ++it) {
        auto& p = *it;
        const bool end_a = is_path_end(p.on_a, na);
        const bool end_b = is_path_end(p.on_b, nb);
        if (end_a && end_b) {
            p.kind = ContactKind::endpoint_contact;
        } else if (end_a || end_b) {
            p.kind = ContactKind::touch;
        } else {
            p.kind = detail::classify_interior(a, p.on_a, b, p.on_b);
        }
    }
    std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(overlaps), out.end());
}

template <class C>
std::vector<polyline_contact<C>> polyline_contacts(std::span<const basic_point<C>> a,
                                                   std::span<const basic_point<C>> b) {
    std::vector<polyline_contact<C>> out;
    polyline_contacts_into(a, b, out);
    return out;
}

/// True when the polyline meets itself anywhere other than at the shared
/// vertex of consecutive segments.
template <class C>
bool self_intersects(std::span<const basic_point<C>> p) {
    const std::size_t n = p.size() - 1;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            auto c = contact(p[i], p[i + 1], p[j], p[j + 1]);
            if (c.shape == ContactShape::none) continue;
            if (c.shape == ContactShape::overlap) return true;
            if (j == i + 1 && c.on_first.is_one() && c.on_second.is_zero()) continue;
            return true;
        }
    }
    return false;
}

template <class C>
bool polyline_contains(std::span<const basic_point<C>> p, const basic_point<C>& q) {
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (on_segment(p[i], p[i + 1], q)) return true;
    return false;
}

/// Exact point of a location along a rational polyline.
inline Point point_at(std::span<const Point> p, const path_position<Rational>& pos) {
    if (pos.t.is_zero()) return p[pos.segment];
    if (pos.t.is_one()) return p[pos.segment + 1];
    return point_at(p[pos.segment], p[pos.segment + 1], pos.t);
}

struct PointHash {
    std::size_t operator()(const Point& p) const noexcept {
        std::size_t h = std::hash<Rational>{}(p.x);
        return h ^ (std::hash<Rational>{}(p.y) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
};

using PointSet = std::unordered_set<Point, PointHash>;

/// Every meeting between polylines a and b with its exact location. Contacts
/// at points of `shared_graph_endpoints` are endpoint contacts.
inline std::vector<MeetingKind> polyline_meetings(std::span<const Point> a, std::span<const Point> b,
                                                  const PointSet& shared_graph_endpoints = {}) {
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("polyline needs at least two points");
    std::vector<MeetingKind> out;
    for (const auto& c : polyline_contacts<Rational>(a, b)) {
        if (c.kind == ContactKind::overlap) {
            out.emplace_back(OverlapDegenerate{});
            continue;
        }
        Point p = point_at(a, c.on_a);
        if (shared_graph_endpoints.contains(p)) {
            out.emplace_back(EndpointContact{std::move(p)});
            continue;
        }
        switch (c.kind) {
            case ContactKind::proper_crossing: out.emplace_back(ProperCrossing{std::move(p)}); break;
            case ContactKind::endpoint_contact: out.emplace_back(EndpointContact{std::move(p)}); break;
            default: out.emplace_back(TouchDegenerate{std::move(p)}); break;
        }
    }
    return out;
}

}  // namespace quasicross
