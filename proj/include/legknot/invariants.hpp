#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "legknot/canonical.hpp"
#include "legknot/realization.hpp"
#include "legknot/surface.hpp"

namespace legknot {

inline int maslov(const LegendrianGaussDiagram& d) { return d.positive_cusps() - d.negative_cusps(); }

namespace detail {

// 0 for directions in [0, pi), 1 for [pi, 2pi), measured from +x.
inline int half_plane(Point v) { return (v.y > 0 || (v.y == 0 && v.x > 0)) ? 0 : 1; }

inline bool angle_less(Point a, Point b) {
    const int ha = half_plane(a), hb = half_plane(b);
    if (ha != hb) return ha < hb;
    return cross(a, b) > 0;
}

inline void check_segments(const std::vector<Point>& v) {
    const std::size_t m = v.size();
    if (m < 3) throw Error(ErrorCode::NonGenericInput, "closed polyline needs at least 3 vertices");
    for (std::size_t i = 0; i < m; ++i) {
        if (v[i] == v[(i + 1) % m]) throw Error(ErrorCode::DegenerateSegment, "zero-length segment", static_cast<long>(i));
    }
}

} // namespace detail

/// Whitney index by counting signed passes of the tangent through +x.
inline int rotation_number(const PlanarFlatDiagram& p) {
    const auto& v = p.strand;
    detail::check_segments(v);
    const int m = static_cast<int>(v.size());
    int wraps = 0;
    for (int i = 0; i < m; ++i) {
        const Point a = detail::segment_dir(v, i);
        const Point b = detail::segment_dir(v, (i + 1) % m);
        const i128 cr = cross(a, b);
        if (cr == 0) {
            if (dot(a, b) < 0) throw Error(ErrorCode::NonGenericInput, "half-turn at a vertex", (i + 1) % m);
            continue;
        }
        if (cr > 0 && detail::angle_less(b, a)) ++wraps;
        if (cr < 0 && detail::angle_less(a, b)) --wraps;
    }
    return wraps;
}

/// Floating cross-check: total turning angle over a full turn.
inline double rotation_number_float(const PlanarFlatDiagram& p) {
    const auto& v = p.strand;
    detail::check_segments(v);
    const int m = static_cast<int>(v.size());
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        const Point a = detail::segment_dir(v, i);
        const Point b = detail::segment_dir(v, (i + 1) % m);
        total += std::atan2(static_cast<double>(cross(a, b)), static_cast<double>(dot(a, b)));
    }
    return total / (2.0 * M_PI);
}

/// (rotation number + virtual crossings) mod 2.
inline int rho(const PlanarFlatDiagram& p) {
    const int r = rotation_number(p);
    const int v = crossing_counts(p).second;
    return ((r + v) % 2 + 2) % 2;
}

enum class KinkSide { Left, Right };

namespace detail {

// Loop around a point P on segment `seg`, drawn in the frame of a short
// integer vector t roughly along the segment.
inline bool try_kink(const PlanarFlatDiagram& p, int seg, int num, int den, std::int64_t k, KinkSide side,
                     PlanarFlatDiagram& out) {
    const auto& v = p.strand;
    const Point A = v[static_cast<std::size_t>(seg)];
    const Point d = segment_dir(v, seg);
    const double len = std::hypot(static_cast<double>(d.x), static_cast<double>(d.y));
    if (len < 12.0 * static_cast<double>(k)) return false;
    const Point t{std::llround(static_cast<double>(d.x) * static_cast<double>(k) / len),
                  std::llround(static_cast<double>(d.y) * static_cast<double>(k) / len)};
    if (t.x == 0 && t.y == 0) return false;
    const Point nrm = side == KinkSide::Left ? rot90(t) : -rot90(t);
    const Point P{A.x + d.x * num / den, A.y + d.y * num / den};
    const Fraction f{num, den};
    auto at = [&](std::int64_t x, std::int64_t y) { return P + x * t + y * nrm; };
    const Point loop[5] = {at(-2, 0), at(2, 0), at(1, 2), at(0, -1), at(3, 0)};

    const auto old = analyze_polyline(v);
    const double window = 8.0 * static_cast<double>(k) / len;
    for (const auto& c : old) {
        for (const auto& [s, tt] : {std::pair{c.a, c.ta}, std::pair{c.b, c.tb}}) {
            const double x = static_cast<double>(tt.num) / static_cast<double>(tt.den);
            if (s == seg && std::abs(x - static_cast<double>(num) / den) <= window) return false;
        }
    }
    PlanarFlatDiagram q;
    q.strand.assign(v.begin(), v.begin() + seg + 1);
    q.strand.insert(q.strand.end(), std::begin(loop), std::end(loop));
    q.strand.insert(q.strand.end(), v.begin() + seg + 1, v.end());
    // Segment seg splits into seg (before the loop) and seg+5 (after it).
    auto remap = [&](int s, const Fraction& t_on) {
        if (s < seg) return s;
        if (s > seg) return s + 5;
        return compare(t_on, f) > 0 ? seg + 5 : seg;
    };
    std::set<CrossingId> expected{{seg + 1, seg + 3}};
    for (const auto& c : old) {
        int a = remap(c.a, c.ta), b = remap(c.b, c.tb);
        if (a > b) std::swap(a, b);
        expected.insert({a, b});
        if (p.virtual_crossings.count({c.a, c.b})) q.virtual_crossings.insert({a, b});
    }
    std::vector<SegmentCrossing> fresh;
    try {
        fresh = analyze_polyline(q.strand);
    } catch (const Error&) {
        return false;
    }
    std::set<CrossingId> got;
    for (const auto& c : fresh) got.insert({c.a, c.b});
    if (fresh.size() != expected.size() || got != expected) return false;
    out = std::move(q);
    return true;
}

} // namespace detail

/// Inserts a small loop on a straight stretch: Left turns once more
/// counter-clockwise (+1), Right once more clockwise (-1). The drawing is
/// scaled up when no segment has room.
inline PlanarFlatDiagram add_kink(const PlanarFlatDiagram& p, KinkSide side) {
    analyze_polyline(p.strand);
    for (std::int64_t scale = 1; scale <= (std::int64_t{1} << 20); scale *= 4) {
        PlanarFlatDiagram s = p;
        bool fits = true;
        for (Point& pt : s.strand) {
            if (std::llabs(pt.x) * scale >= kCoordLimit || std::llabs(pt.y) * scale >= kCoordLimit) fits = false;
            pt = scale * pt;
        }
        if (!fits) break;
        const int m = static_cast<int>(s.strand.size());
        for (int seg = 0; seg < m; ++seg) {
            for (const auto& [num, den] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}}) {
                for (const std::int64_t k : {16, 4, 1}) {
                    PlanarFlatDiagram out;
                    if (detail::try_kink(s, seg, num, den, k, side, out)) return out;
                }
            }
        }
    }
    throw Error(ErrorCode::NoRoomForKink, "no straight stretch can hold a kink");
}

struct InvariantVector {
    int maslov = 0;
    int positive_cusps = 0;
    int negative_cusps = 0;
    int arrow_count = 0;
    CanonicalCode string_code;
    int rho = 0;
    int genus = 0;

    friend bool operator==(const InvariantVector&, const InvariantVector&) = default;
};

/// rho is taken on the flat realization of the underlying string.
inline InvariantVector invariant_vector(const LegendrianGaussDiagram& d, const LayoutOptions& opt = {}) {
    validate(d);
    const auto s = underlying_string(d);
    InvariantVector iv;
    iv.maslov = maslov(d);
    iv.positive_cusps = d.positive_cusps();
    iv.negative_cusps = d.negative_cusps();
    iv.arrow_count = d.arrow_count();
    iv.string_code = canonical_code(s);
    iv.rho = rho(planar_flat_of_string(s, opt));
    iv.genus = genus(s);
    return iv;
}

} // namespace legknot
