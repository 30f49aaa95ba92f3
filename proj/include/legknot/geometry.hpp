#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "legknot/error.hpp"

namespace legknot {

using i128 = __int128;

/// Integer lattice point. Coordinates stay below 2^28 in magnitude so every
/// predicate below is exact in 128-bit arithmetic.
struct Point {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend auto operator<=>(const Point&, const Point&) = default;
    friend bool operator==(const Point&, const Point&) = default;
    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(std::int64_t k, Point a) { return {k * a.x, k * a.y}; }
    friend Point operator-(Point a) { return {-a.x, -a.y}; }
};

inline constexpr std::int64_t kCoordLimit = std::int64_t{1} << 28;

inline i128 cross(Point a, Point b) { return i128(a.x) * b.y - i128(a.y) * b.x; }
inline i128 dot(Point a, Point b) { return i128(a.x) * b.x + i128(a.y) * b.y; }
inline Point rot90(Point a) { return {-a.y, a.x}; }
inline int sign(i128 v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

/// Exact fraction num/den with den > 0.
struct Fraction {
    i128 num = 0;
    i128 den = 1;
};

inline int compare(const Fraction& a, const Fraction& b) { return sign(a.num * b.den - b.num * a.den); }

/// Crossing of two non-adjacent segments a < b at interior parameters.
struct SegmentCrossing {
    int a = 0;
    int b = 0;
    Fraction ta;  // parameter along segment a
    Fraction tb;
};

namespace detail {

inline bool in_open_unit(const Fraction& f) { return f.num > 0 && f.num < f.den; }
inline bool in_closed_unit(const Fraction& f) { return f.num >= 0 && f.num <= f.den; }

} // namespace detail

/// Checks genericity of a closed polyline and returns its transverse double
/// points. Throws DegenerateSegment for zero-length edges and
/// NonGenericInput for overlaps, touchings, reversals and triple points.
inline std::vector<SegmentCrossing> analyze_polyline(const std::vector<Point>& v) {
    const int m = static_cast<int>(v.size());
    if (m < 3) throw Error(ErrorCode::NonGenericInput, "closed polyline needs at least 3 vertices", m);
    for (const Point& p : v) {
        if (std::llabs(p.x) >= kCoordLimit || std::llabs(p.y) >= kCoordLimit)
            throw Error(ErrorCode::InvalidArgument, "coordinate out of range");
    }
    auto seg = [&](int i) { return v[static_cast<std::size_t>((i + 1) % m)] - v[static_cast<std::size_t>(i)]; };
    for (int i = 0; i < m; ++i) {
        const Point r = seg(i);
        if (r.x == 0 && r.y == 0) throw Error(ErrorCode::DegenerateSegment, "zero-length segment", i);
    }
    for (int i = 0; i < m; ++i) {
        const Point r = seg(i), s = seg((i + 1) % m);
        if (cross(r, s) == 0 && dot(r, s) < 0)
            throw Error(ErrorCode::NonGenericInput, "segments fold back on each other", (i + 1) % m);
    }
    std::vector<SegmentCrossing> out;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const bool adjacent = j == i + 1 || (i == 0 && j == m - 1);
            if (adjacent) continue;
            const Point p = v[static_cast<std::size_t>(i)], r = seg(i);
            const Point q = v[static_cast<std::size_t>(j)], s = seg(j);
            const i128 den = cross(r, s);
            const Point qp = q - p;
            if (den == 0) {
                if (cross(qp, r) != 0) continue;
                // collinear: overlap or touch of parameter ranges
                const i128 rr = dot(r, r);
                i128 t0 = dot(qp, r), t1 = dot(qp + s, r);
                if (t0 > t1) std::swap(t0, t1);
                if (t1 >= 0 && t0 <= rr)
                    throw Error(ErrorCode::NonGenericInput, "collinear segments overlap", i);
                continue;
            }
            Fraction t{cross(qp, s), den}, u{cross(qp, r), den};
            if (den < 0) {
                t = {-t.num, -den};
                u = {-u.num, -den};
            }
            if (!detail::in_closed_unit(t) || !detail::in_closed_unit(u)) continue;
            if (!detail::in_open_unit(t) || !detail::in_open_unit(u))
                throw Error(ErrorCode::NonGenericInput, "a vertex touches another segment", i);
            out.push_back({i, j, t, u});
        }
    }
    // Triple points: two crossings at the same parameter of one segment.
    std::vector<std::vector<Fraction>> on(static_cast<std::size_t>(m));
    for (const auto& c : out) {
        on[static_cast<std::size_t>(c.a)].push_back(c.ta);
        on[static_cast<std::size_t>(c.b)].push_back(c.tb);
    }
    for (int i = 0; i < m; ++i) {
        auto& ts = on[static_cast<std::size_t>(i)];
        std::sort(ts.begin(), ts.end(), [](const Fraction& a, const Fraction& b) { return compare(a, b) < 0; });
        for (std::size_t k = 1; k < ts.size(); ++k) {
            if (compare(ts[k - 1], ts[k]) == 0) throw Error(ErrorCode::NonGenericInput, "triple point", i);
        }
    }
    return out;
}

} // namespace legknot
