#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "legknot/diagram.hpp"
#include "legknot/geometry.hpp"

namespace legknot {

/// Double point addressed by the pair of segment indices (a < b).
struct CrossingId {
    int a = 0;
    int b = 0;

    friend auto operator<=>(const CrossingId&, const CrossingId&) = default;
    friend bool operator==(const CrossingId&, const CrossingId&) = default;
};

struct CuspTag {
    int vertex = 0;
    CuspSign sign = CuspSign::Positive;

    friend bool operator==(const CuspTag&, const CuspTag&) = default;
};

/// Closed polyline; segment i runs from vertex i to vertex i+1.
struct PlanarFlatDiagram {
    std::vector<Point> strand;
    std::set<CrossingId> virtual_crossings;
};

struct PlanarFrontDiagram {
    std::vector<Point> strand;
    std::vector<CuspTag> cusp_tags;
    std::set<CrossingId> virtual_crossings;
    Coorientation coorientation_seed = Coorientation::L;  // label of segment 0

    PlanarFlatDiagram flat() const { return {strand, virtual_crossings}; }
};

namespace detail {

inline Point segment_dir(const std::vector<Point>& v, int i) {
    const int m = static_cast<int>(v.size());
    return v[static_cast<std::size_t>((i + 1) % m)] - v[static_cast<std::size_t>(i)];
}

struct Traversal {
    std::vector<Site> sites;
    std::vector<SegmentCrossing> crossings;
};

// Walks the strand once. Real crossings become arrows; head at the branch h
// with (u_h, u_other) a positive frame. cusp_sign_of(vertex) yields the
// sign for tagged vertices.
template <class CuspFn>
Traversal traverse(const std::vector<Point>& v, const std::set<CrossingId>& virt,
                   const std::vector<bool>& is_cusp, CuspFn&& cusp_sign_of) {
    Traversal tr;
    tr.crossings = analyze_polyline(v);
    const int m = static_cast<int>(v.size());
    for (const CrossingId& c : virt) {
        const bool found = std::any_of(tr.crossings.begin(), tr.crossings.end(),
                                       [&](const SegmentCrossing& x) { return x.a == c.a && x.b == c.b; });
        if (!found) throw Error(ErrorCode::InvalidArgument, "virtual tag names no crossing", c.a);
    }
    struct Event {
        Fraction t;
        int crossing;
        bool first;
    };
    std::vector<std::vector<Event>> on(static_cast<std::size_t>(m));
    for (std::size_t k = 0; k < tr.crossings.size(); ++k) {
        const auto& c = tr.crossings[k];
        if (virt.count({c.a, c.b})) continue;
        on[static_cast<std::size_t>(c.a)].push_back({c.ta, static_cast<int>(k), true});
        on[static_cast<std::size_t>(c.b)].push_back({c.tb, static_cast<int>(k), false});
    }
    std::map<int, int> ids;
    for (int i = 0; i < m; ++i) {
        if (is_cusp[static_cast<std::size_t>(i)]) tr.sites.push_back(Site::cusp(cusp_sign_of(i)));
        auto& evs = on[static_cast<std::size_t>(i)];
        std::sort(evs.begin(), evs.end(), [](const Event& x, const Event& y) { return compare(x.t, y.t) < 0; });
        for (const Event& e : evs) {
            const auto& c = tr.crossings[static_cast<std::size_t>(e.crossing)];
            const Point ua = segment_dir(v, c.a), ub = segment_dir(v, c.b);
            const bool head_on_a = cross(ua, ub) > 0;
            const bool head_here = e.first ? head_on_a : !head_on_a;
            auto [it, fresh] = ids.emplace(e.crossing, static_cast<int>(ids.size()) + 1);
            tr.sites.push_back(head_here ? Site::head(it->second) : Site::tail(it->second));
        }
    }
    return tr;
}

} // namespace detail

/// Labels of every segment: seed on segment 0, flipped at each cusp vertex.
inline std::vector<Coorientation> segment_labels(const PlanarFrontDiagram& p) {
    const std::size_t m = p.strand.size();
    std::vector<bool> cusp(m, false);
    for (const auto& t : p.cusp_tags) cusp[static_cast<std::size_t>(t.vertex)] = true;
    std::vector<Coorientation> lab(m);
    Coorientation c = p.coorientation_seed;
    for (std::size_t i = 0; i < m; ++i) {
        if (i > 0 && cusp[i]) c = flip(c);
        lab[i] = c;
    }
    return lab;
}

/// Sign of the cusp at a vertex from the outgoing-branch rule: positive iff
/// the outgoing direction points into the coorienting side of the incoming
/// branch.
inline CuspSign geometric_cusp_sign(const std::vector<Point>& v, int vertex, Coorientation incoming) {
    const int m = static_cast<int>(v.size());
    const Point uin = detail::segment_dir(v, (vertex + m - 1) % m);
    const Point uout = detail::segment_dir(v, vertex);
    const Point nrm = incoming == Coorientation::L ? rot90(uin) : -rot90(uin);
    const i128 s = dot(uout, nrm);
    if (s == 0) throw Error(ErrorCode::NonGenericInput, "cusp branch is tangent to its normal", vertex);
    return s > 0 ? CuspSign::Positive : CuspSign::Negative;
}

namespace detail {

inline std::vector<bool> cusp_mask(const PlanarFrontDiagram& p) {
    std::vector<bool> cusp(p.strand.size(), false);
    for (const auto& t : p.cusp_tags) {
        if (t.vertex < 0 || static_cast<std::size_t>(t.vertex) >= p.strand.size())
            throw Error(ErrorCode::InvalidArgument, "cusp tag outside the strand", t.vertex);
        if (cusp[static_cast<std::size_t>(t.vertex)])
            throw Error(ErrorCode::InvalidArgument, "duplicate cusp tag", t.vertex);
        cusp[static_cast<std::size_t>(t.vertex)] = true;
    }
    if (p.cusp_tags.size() % 2 != 0)
        throw Error(ErrorCode::OddCuspCount, "coorientation does not close up", static_cast<long>(p.cusp_tags.size()));
    return cusp;
}

} // namespace detail

/// Overwrites the stored cusp signs with the geometric ones.
inline void assign_cusp_signs(PlanarFrontDiagram& p) {
    detail::cusp_mask(p);
    const auto lab = segment_labels(p);
    const int m = static_cast<int>(p.strand.size());
    for (auto& t : p.cusp_tags) t.sign = geometric_cusp_sign(p.strand, t.vertex, lab[static_cast<std::size_t>((t.vertex + m - 1) % m)]);
}

/// Gauss diagram of a generic planar front. Stored cusp signs must agree
/// with the geometric rule.
inline LegendrianGaussDiagram gauss_of_planar(const PlanarFrontDiagram& p) {
    const auto cusp = detail::cusp_mask(p);
    const auto lab = segment_labels(p);
    const int m = static_cast<int>(p.strand.size());
    std::map<int, CuspSign> stored;
    for (const auto& t : p.cusp_tags) stored[t.vertex] = t.sign;
    auto tr = detail::traverse(p.strand, p.virtual_crossings, cusp, [&](int vtx) {
        const CuspSign s = geometric_cusp_sign(p.strand, vtx, lab[static_cast<std::size_t>((vtx + m - 1) % m)]);
        if (s != stored[vtx]) throw Error(ErrorCode::InvalidArgument, "cusp tag sign disagrees with geometry", vtx);
        return s;
    });
    const Coorientation base = cusp[0] ? flip(p.coorientation_seed) : p.coorientation_seed;
    return {std::move(tr.sites), base};
}

inline FlatVirtualString string_of_planar(const PlanarFlatDiagram& p) {
    const std::vector<bool> none(p.strand.size(), false);
    auto tr = detail::traverse(p.strand, p.virtual_crossings, none, [](int) { return CuspSign::Positive; });
    return FlatVirtualString(std::move(tr.sites));
}

/// Real and virtual double points of a planar diagram.
inline std::pair<int, int> crossing_counts(const PlanarFlatDiagram& p) {
    const auto xs = analyze_polyline(p.strand);
    int virt = 0;
    for (const auto& c : xs) virt += p.virtual_crossings.count({c.a, c.b}) ? 1 : 0;
    return {static_cast<int>(xs.size()) - virt, virt};
}

} // namespace legknot
