#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "legknot/error.hpp"

namespace legknot {

enum class Coorientation : std::uint8_t { L, R };

inline Coorientation flip(Coorientation c) {
    return c == Coorientation::L ? Coorientation::R : Coorientation::L;
}

inline char to_char(Coorientation c) { return c == Coorientation::L ? 'L' : 'R'; }

/// +1 for the left normal, -1 for the right normal.
inline int normal_sign(Coorientation c) { return c == Coorientation::L ? 1 : -1; }

enum class CuspSign : std::int8_t { Negative = -1, Positive = 1 };

inline CuspSign opposite(CuspSign s) {
    return s == CuspSign::Positive ? CuspSign::Negative : CuspSign::Positive;
}

enum class SiteKind : std::uint8_t { ArrowHead, ArrowTail, Cusp, SingularMark };

/// One marked point on the core circle.
struct Site {
    SiteKind kind = SiteKind::Cusp;
    int id = 0;                          // arrow or mark id; unused for cusps
    CuspSign sign = CuspSign::Positive;  // cusps only

    static Site head(int id) { return {SiteKind::ArrowHead, id, CuspSign::Positive}; }
    static Site tail(int id) { return {SiteKind::ArrowTail, id, CuspSign::Positive}; }
    static Site cusp(CuspSign s) { return {SiteKind::Cusp, 0, s}; }
    static Site mark(int id) { return {SiteKind::SingularMark, id, CuspSign::Positive}; }

    bool is_arrow() const { return kind == SiteKind::ArrowHead || kind == SiteKind::ArrowTail; }
    bool is_cusp() const { return kind == SiteKind::Cusp; }
    bool is_mark() const { return kind == SiteKind::SingularMark; }
    bool is_head() const { return kind == SiteKind::ArrowHead; }
    bool is_tail() const { return kind == SiteKind::ArrowTail; }

    friend bool operator==(const Site& a, const Site& b) {
        if (a.kind != b.kind) return false;
        return a.kind == SiteKind::Cusp ? a.sign == b.sign : a.id == b.id;
    }
    friend bool operator!=(const Site& a, const Site& b) { return !(a == b); }
};

inline std::string to_token(const Site& s) {
    switch (s.kind) {
    case SiteKind::ArrowHead: return "A" + std::to_string(s.id) + "h";
    case SiteKind::ArrowTail: return "A" + std::to_string(s.id) + "t";
    case SiteKind::Cusp: return s.sign == CuspSign::Positive ? "C+" : "C-";
    case SiteKind::SingularMark: return "S" + std::to_string(s.id);
    }
    return "?";
}

/// Legendrian Gauss diagram: cyclic word of sites plus the coorientation
/// label of the arc that ends at site 0 (the gap before index 0).
///
/// Gap g is the arc between site g-1 and site g; gap 0 wraps around.
class LegendrianGaussDiagram {
public:
    LegendrianGaussDiagram() = default;
    LegendrianGaussDiagram(std::vector<Site> sites, Coorientation base)
        : sites_(std::move(sites)), base_(base) {}

    const std::vector<Site>& sites() const { return sites_; }
    Coorientation base() const { return base_; }
    std::size_t size() const { return sites_.size(); }
    bool empty() const { return sites_.empty(); }
    const Site& operator[](std::size_t i) const { return sites_[i]; }

    /// Number of distinct gaps: one per site, and one for the bare circle.
    std::size_t gap_count() const { return sites_.empty() ? 1 : sites_.size(); }

    int arrow_count() const { return count_kind(SiteKind::ArrowHead); }
    int mark_count() const { return count_kind(SiteKind::SingularMark) / 2; }
    int cusp_count() const { return count_kind(SiteKind::Cusp); }
    int positive_cusps() const { return count_cusps(CuspSign::Positive); }
    int negative_cusps() const { return count_cusps(CuspSign::Negative); }

    friend bool operator==(const LegendrianGaussDiagram& a, const LegendrianGaussDiagram& b) {
        return a.base_ == b.base_ && a.sites_ == b.sites_;
    }

private:
    int count_kind(SiteKind k) const {
        return static_cast<int>(std::count_if(sites_.begin(), sites_.end(),
                                              [k](const Site& s) { return s.kind == k; }));
    }
    int count_cusps(CuspSign sg) const {
        return static_cast<int>(std::count_if(sites_.begin(), sites_.end(), [sg](const Site& s) {
            return s.is_cusp() && s.sign == sg;
        }));
    }

    std::vector<Site> sites_;
    Coorientation base_ = Coorientation::L;
};

/// Virtual string: arrows only.
class FlatVirtualString {
public:
    FlatVirtualString() = default;
    explicit FlatVirtualString(std::vector<Site> sites) : sites_(std::move(sites)) {}

    const std::vector<Site>& sites() const { return sites_; }
    std::size_t size() const { return sites_.size(); }
    bool empty() const { return sites_.empty(); }
    const Site& operator[](std::size_t i) const { return sites_[i]; }
    int arrow_count() const { return static_cast<int>(sites_.size() / 2); }

    /// The same word read as a cusp-free Legendrian diagram with base L.
    LegendrianGaussDiagram as_diagram() const { return {sites_, Coorientation::L}; }

    friend bool operator==(const FlatVirtualString& a, const FlatVirtualString& b) {
        return a.sites_ == b.sites_;
    }

private:
    std::vector<Site> sites_;
};

namespace detail {

inline void check_pairing(const std::vector<Site>& sites, bool require_contiguous) {
    std::map<int, std::pair<int, int>> arrows;  // id -> (heads, tails)
    std::map<int, int> marks;
    int cusps = 0;
    for (const Site& s : sites) {
        switch (s.kind) {
        case SiteKind::ArrowHead:
            if (s.id <= 0) throw Error(ErrorCode::NonContiguousIds, "arrow ids must be positive", s.id);
            ++arrows[s.id].first;
            break;
        case SiteKind::ArrowTail:
            if (s.id <= 0) throw Error(ErrorCode::NonContiguousIds, "arrow ids must be positive", s.id);
            ++arrows[s.id].second;
            break;
        case SiteKind::SingularMark:
            if (s.id <= 0) throw Error(ErrorCode::NonContiguousIds, "mark ids must be positive", s.id);
            ++marks[s.id];
            break;
        case SiteKind::Cusp:
            ++cusps;
            break;
        }
    }
    for (const auto& [id, ht] : arrows) {
        if (ht.first != 1 || ht.second != 1)
            throw Error(ErrorCode::UnpairedArrow,
                        "arrow " + std::to_string(id) + " needs exactly one head and one tail", id);
    }
    for (const auto& [id, n] : marks) {
        if (n != 2)
            throw Error(ErrorCode::BadMarkMultiplicity,
                        "mark " + std::to_string(id) + " must appear exactly twice", id);
    }
    if (cusps % 2 != 0) throw Error(ErrorCode::OddCuspCount, "cusp count must be even", cusps);
    if (require_contiguous) {
        int expect = 1;
        for (const auto& [id, ht] : arrows) {
            if (id != expect++)
                throw Error(ErrorCode::NonContiguousIds, "arrow ids must be 1..n", id);
        }
        expect = 1;
        for (const auto& [id, n] : marks) {
            if (id != expect++)
                throw Error(ErrorCode::NonContiguousIds, "mark ids must be 1..s", id);
        }
    }
}

} // namespace detail

/// Throws legknot::Error when an invariant of the diagram type is violated.
inline void validate(const LegendrianGaussDiagram& d) { detail::check_pairing(d.sites(), true); }

/// Pairing and parity only; ids may have gaps.
inline void validate_structure(const LegendrianGaussDiagram& d) {
    detail::check_pairing(d.sites(), false);
}

inline void validate(const FlatVirtualString& s) {
    for (const Site& site : s.sites()) {
        if (!site.is_arrow())
            throw Error(ErrorCode::InvalidArgument, "virtual strings carry arrow endpoints only");
    }
    detail::check_pairing(s.sites(), true);
}

/// Label of gap `position`: the base flipped once per cusp among sites [0, position).
inline Coorientation arc_coorientation(const LegendrianGaussDiagram& d, std::size_t position) {
    Coorientation c = d.base();
    const std::size_t n = d.size();
    const std::size_t stop = n == 0 ? 0 : position % (n + 1);
    for (std::size_t i = 0; i < stop && i < n; ++i) {
        if (d[i].is_cusp()) c = flip(c);
    }
    return c;
}

/// All gap labels at once; entry g is the label of gap g.
inline std::vector<Coorientation> gap_labels(const LegendrianGaussDiagram& d) {
    std::vector<Coorientation> out(d.gap_count());
    Coorientation c = d.base();
    for (std::size_t g = 0; g < out.size(); ++g) {
        out[g] = c;
        if (g < d.size() && d[g].is_cusp()) c = flip(c);
    }
    return out;
}

inline FlatVirtualString underlying_string(const LegendrianGaussDiagram& d) {
    std::vector<Site> out;
    out.reserve(d.size());
    for (const Site& s : d.sites()) {
        if (s.is_mark())
            throw Error(ErrorCode::SingularNotAllowed, "underlying string of a singular diagram");
        if (s.is_arrow()) out.push_back(s);
    }
    return FlatVirtualString(std::move(out));
}

/// Same cyclic diagram read from site k onwards.
inline LegendrianGaussDiagram rotated(const LegendrianGaussDiagram& d, std::size_t k) {
    if (d.empty()) return d;
    k %= d.size();
    std::vector<Site> out(d.sites().begin() + static_cast<long>(k), d.sites().end());
    out.insert(out.end(), d.sites().begin(), d.sites().begin() + static_cast<long>(k));
    return {std::move(out), arc_coorientation(d, k)};
}

/// Renumbers arrows and marks to 1..n by first occurrence.
inline std::vector<Site> relabel_by_first_occurrence(const std::vector<Site>& sites) {
    int max_id = 0;
    for (const Site& s : sites) {
        if (!s.is_cusp()) max_id = std::max(max_id, s.id);
    }
    std::vector<Site> out = sites;
    if (static_cast<std::size_t>(max_id) <= 4 * sites.size() + 16) {
        std::vector<int> arrow_map(static_cast<std::size_t>(max_id) + 1, 0), mark_map(arrow_map.size(), 0);
        int na = 0, nm = 0;
        for (Site& s : out) {
            if (s.is_arrow()) {
                int& m = arrow_map[static_cast<std::size_t>(s.id)];
                if (m == 0) m = ++na;
                s.id = m;
            } else if (s.is_mark()) {
                int& m = mark_map[static_cast<std::size_t>(s.id)];
                if (m == 0) m = ++nm;
                s.id = m;
            }
        }
        return out;
    }
    std::map<int, int> arrow_map, mark_map;
    for (Site& s : out) {
        if (s.is_arrow()) {
            auto [it, fresh] = arrow_map.emplace(s.id, static_cast<int>(arrow_map.size()) + 1);
            s.id = it->second;
        } else if (s.is_mark()) {
            auto [it, fresh] = mark_map.emplace(s.id, static_cast<int>(mark_map.size()) + 1);
            s.id = it->second;
        }
    }
    return out;
}

inline LegendrianGaussDiagram relabeled(const LegendrianGaussDiagram& d) {
    return {relabel_by_first_occurrence(d.sites()), d.base()};
}

/// Positions of both endpoints of every arrow, indexed by arrow id.
struct ArrowIndex {
    std::vector<int> head;  // head[id] = site index, -1 when absent
    std::vector<int> tail;

    explicit ArrowIndex(const std::vector<Site>& sites) {
        int max_id = 0;
        for (const Site& s : sites) {
            if (s.is_arrow()) max_id = std::max(max_id, s.id);
        }
        head.assign(static_cast<std::size_t>(max_id) + 1, -1);
        tail.assign(static_cast<std::size_t>(max_id) + 1, -1);
        for (std::size_t i = 0; i < sites.size(); ++i) {
            const Site& s = sites[i];
            if (s.is_head()) head[static_cast<std::size_t>(s.id)] = static_cast<int>(i);
            if (s.is_tail()) tail[static_cast<std::size_t>(s.id)] = static_cast<int>(i);
        }
    }

    /// Index of the other endpoint of the arrow sitting at `site`.
    int partner(const std::vector<Site>& sites, int site) const {
        const Site& s = sites[static_cast<std::size_t>(site)];
        return s.is_head() ? tail[static_cast<std::size_t>(s.id)] : head[static_cast<std::size_t>(s.id)];
    }
};

inline std::string to_string(const LegendrianGaussDiagram& d) {
    std::string out = "@";
    out += to_char(d.base());
    for (const Site& s : d.sites()) {
        out += ' ';
        out += to_token(s);
    }
    return out;
}

inline std::string to_string(const FlatVirtualString& s) {
    std::string out;
    for (const Site& site : s.sites()) {
        if (!out.empty()) out += ' ';
        out += to_token(site);
    }
    return out;
}

} // namespace legknot
