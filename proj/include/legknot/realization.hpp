#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "legknot/canonical.hpp"
#include "legknot/planar.hpp"

namespace legknot {

/// Polyline fragment in template coordinates, drawn inside a window away
/// from the gadget circle. Crossings among template segments are real.
struct TemplatePiece {
    std::vector<Point> pts;
    std::vector<int> cusp_vertices;
};

struct LayoutItem {
    enum class Kind { SiteItem, Piece, Waypoint };
    Kind kind = Kind::SiteItem;
    Site site;
    int piece = -1;

    static LayoutItem of_site(const Site& s) { return {Kind::SiteItem, s, -1}; }
    static LayoutItem of_piece(int i) { return {Kind::Piece, Site{}, i}; }
    static LayoutItem waypoint() { return {Kind::Waypoint, Site{}, -1}; }
};

struct LayoutOptions {
    std::uint64_t seed = 1;
    bool shuffle = false;  // permute gadget slots on the circle
    int max_attempts = 64;
};

struct BuiltLayout {
    PlanarFrontDiagram front;
    std::vector<int> piece_first_vertex;  // per piece, index into strand
};

namespace detail {

inline constexpr double kCircleRadius = 16777216.0;  // 2^24

inline Point polar(double r, double ang) {
    return {static_cast<std::int64_t>(std::llround(r * std::cos(ang))),
            static_cast<std::int64_t>(std::llround(r * std::sin(ang)))};
}

inline Point random_dir(std::mt19937_64& rng, double len) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    Point p;
    do {
        p = polar(len, ang(rng));
    } while (p.x == 0 && p.y == 0);
    return p;
}

// One attempt; throws NonGenericInput when the random placement is not generic.
inline BuiltLayout build_layout_once(const std::vector<LayoutItem>& items_in,
                                     const std::vector<TemplatePiece>& pieces, Coorientation base,
                                     std::uint64_t seed, bool shuffle) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<LayoutItem> items = items_in;
    if (items.empty()) {
        items.assign(3, LayoutItem::waypoint());
    } else if (items.size() == 1) {
        items.push_back(LayoutItem::waypoint());
    }

    // Gadget slots in order of first appearance.
    std::map<int, int> arrow_slot;
    std::vector<int> item_slot(items.size(), -1);
    int slots = 0;
    for (std::size_t k = 0; k < items.size(); ++k) {
        const auto& it = items[k];
        if (it.kind == LayoutItem::Kind::SiteItem && it.site.is_arrow()) {
            auto [pos, fresh] = arrow_slot.emplace(it.site.id, slots);
            if (fresh) ++slots;
            item_slot[k] = pos->second;
        } else if (it.kind != LayoutItem::Kind::Piece) {
            item_slot[k] = slots++;
        }
    }
    std::vector<int> order(static_cast<std::size_t>(slots));
    std::iota(order.begin(), order.end(), 0);
    if (shuffle) std::shuffle(order.begin(), order.end(), rng);
    const double step = slots > 0 ? 2.0 * M_PI / slots : 0.0;
    std::vector<Point> centre(static_cast<std::size_t>(slots));
    for (int s = 0; s < slots; ++s) {
        const double ang = step * (order[static_cast<std::size_t>(s)] + 0.3 * unit(rng)) + 0.1;
        const double r = kCircleRadius * (1.0 + 0.05 * unit(rng));
        centre[static_cast<std::size_t>(s)] = polar(r, ang);
    }

    // Crossing directions for every arrow.
    std::map<int, std::pair<Point, Point>> arrow_dirs;
    std::map<int, bool> seen;
    for (const auto& it : items) {
        if (it.kind != LayoutItem::Kind::SiteItem || !it.site.is_arrow() || seen.count(it.site.id)) continue;
        seen[it.site.id] = true;
        const bool head_first = it.site.is_head();
        const Point u1 = random_dir(rng, 1024.0);
        const double a1 = std::atan2(static_cast<double>(u1.y), static_cast<double>(u1.x));
        const double turn = (M_PI / 6.0 + unit(rng) * 2.0 * M_PI / 3.0) * (head_first ? 1.0 : -1.0);
        const Point u2 = polar(1024.0, a1 + turn);
        arrow_dirs[it.site.id] = {u1, u2};
    }
    std::map<int, int> visits;

    // Template window.
    const Point window = Point{0, -2 * static_cast<std::int64_t>(kCircleRadius)} + random_dir(rng, 4096.0);
    const Point rot = random_dir(rng, 200.0 + 100.0 * unit(rng));
    auto place = [&](Point t) { return window + Point{t.x * rot.x - t.y * rot.y, t.x * rot.y + t.y * rot.x}; };

    BuiltLayout out;
    out.piece_first_vertex.assign(pieces.size(), -1);
    auto& strand = out.front.strand;
    std::vector<int> group;  // segment group: >0 arrow gadget, -1 template, unique below
    int unique = -2;
    std::vector<int> cusp_vertices;
    Coorientation label = base;
    std::vector<int> item_last_vertex;
    auto add_vertex = [&](Point p, int grp) {
        strand.push_back(p);
        group.push_back(grp);
    };
    for (std::size_t k = 0; k < items.size(); ++k) {
        const auto& it = items[k];
        switch (it.kind) {
        case LayoutItem::Kind::Waypoint:
            add_vertex(centre[static_cast<std::size_t>(item_slot[k])], unique--);
            break;
        case LayoutItem::Kind::Piece: {
            const auto& pc = pieces[static_cast<std::size_t>(it.piece)];
            out.piece_first_vertex[static_cast<std::size_t>(it.piece)] = static_cast<int>(strand.size());
            for (std::size_t j = 0; j < pc.pts.size(); ++j) {
                if (std::find(pc.cusp_vertices.begin(), pc.cusp_vertices.end(), static_cast<int>(j)) != pc.cusp_vertices.end()) {
                    cusp_vertices.push_back(static_cast<int>(strand.size()));
                    label = flip(label);
                }
                add_vertex(place(pc.pts[j]), j + 1 < pc.pts.size() ? -1 : unique--);
            }
            break;
        }
        case LayoutItem::Kind::SiteItem: {
            const Point c = centre[static_cast<std::size_t>(item_slot[k])];
            if (it.site.is_cusp()) {
                const Point t0 = random_dir(rng, 128.0);
                const int sigma = it.site.sign == CuspSign::Positive ? 1 : -1;
                const int m = sigma * normal_sign(label);
                const Point w = -8 * t0 + m * rot90(t0);
                add_vertex(c - 8 * t0, unique--);
                cusp_vertices.push_back(static_cast<int>(strand.size()));
                add_vertex(c, unique--);
                add_vertex(c + w, unique--);
                label = flip(label);
            } else if (it.site.is_arrow()) {
                const auto& dirs = arrow_dirs[it.site.id];
                const Point u = visits[it.site.id]++ == 0 ? dirs.first : dirs.second;
                add_vertex(c - u, it.site.id);
                add_vertex(c + u, unique--);
            } else {
                throw Error(ErrorCode::SingularNotAllowed, "cannot draw a singular mark");
            }
            break;
        }
        }
    }
    if (label != base) throw Error(ErrorCode::OddCuspCount, "coorientation does not close up");

    const auto xs = analyze_polyline(strand);
    for (const auto& x : xs) {
        const int ga = group[static_cast<std::size_t>(x.a)], gb = group[static_cast<std::size_t>(x.b)];
        const bool real = ga == gb && (ga > 0 || ga == -1);
        if (!real) out.front.virtual_crossings.insert({x.a, x.b});
    }
    out.front.coorientation_seed = base;
    for (int v : cusp_vertices) out.front.cusp_tags.push_back({v, CuspSign::Positive});
    if (!cusp_vertices.empty() && cusp_vertices.front() == 0)
        throw Error(ErrorCode::NonGenericInput, "layout starts at a cusp");
    assign_cusp_signs(out.front);
    return out;
}

} // namespace detail

/// Draws the items with retries over seeds until the layout is generic.
inline BuiltLayout build_layout(const std::vector<LayoutItem>& items, const std::vector<TemplatePiece>& pieces,
                                Coorientation base, const LayoutOptions& opt = {}) {
    for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
        try {
            return detail::build_layout_once(items, pieces, base, opt.seed + 7919u * static_cast<unsigned>(attempt),
                                             opt.shuffle);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NonGenericInput) throw;
        }
    }
    throw Error(ErrorCode::NonGenericInput, "no generic layout found");
}

/// Planar front whose Gauss diagram is d read from the same starting site.
inline PlanarFrontDiagram realize_planar(const LegendrianGaussDiagram& d, const LayoutOptions& opt = {}) {
    validate(d);
    std::vector<LayoutItem> items;
    items.reserve(d.size());
    for (const Site& s : d.sites()) items.push_back(LayoutItem::of_site(s));
    auto built = build_layout(items, {}, d.base(), opt);
    return std::move(built.front);
}

inline PlanarFlatDiagram planar_flat_of_string(const FlatVirtualString& s, const LayoutOptions& opt = {}) {
    validate(s);
    return realize_planar(s.as_diagram(), opt).flat();
}

} // namespace legknot
