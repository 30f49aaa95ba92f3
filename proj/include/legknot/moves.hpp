#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "legknot/canonical.hpp"

namespace legknot {

enum class MoveFamily : std::uint8_t { MV1, MV2, MV3, MV4, KINK_PAIR };
enum class MoveSense : std::uint8_t { Create, Delete, Slide };
enum class MoveMode : std::uint8_t { LegendrianIsotopy, LegendrianHomotopy, FlatFramedHomotopy };

inline const char* to_string(MoveFamily f) {
    switch (f) {
    case MoveFamily::MV1: return "MV1";
    case MoveFamily::MV2: return "MV2";
    case MoveFamily::MV3: return "MV3";
    case MoveFamily::MV4: return "MV4";
    case MoveFamily::KINK_PAIR: return "KINK_PAIR";
    }
    return "?";
}

inline const char* to_string(MoveSense s) {
    switch (s) {
    case MoveSense::Create: return "create";
    case MoveSense::Delete: return "delete";
    case MoveSense::Slide: return "slide";
    }
    return "?";
}

inline const char* to_string(MoveMode m) {
    switch (m) {
    case MoveMode::LegendrianIsotopy: return "isotopy";
    case MoveMode::LegendrianHomotopy: return "homotopy";
    case MoveMode::FlatFramedHomotopy: return "flat";
    }
    return "?";
}

inline std::optional<MoveMode> parse_mode(std::string_view s) {
    if (s == "isotopy" || s == "legendrian_isotopy") return MoveMode::LegendrianIsotopy;
    if (s == "homotopy" || s == "legendrian_homotopy") return MoveMode::LegendrianHomotopy;
    if (s == "flat" || s == "flat_framed" || s == "flat_framed_homotopy") return MoveMode::FlatFramedHomotopy;
    return std::nullopt;
}

inline bool is_legendrian(MoveMode m) { return m != MoveMode::FlatFramedHomotopy; }

// Variant bit layouts.
//   MV1:  bit0 first endpoint is a head, bit1 arc label is R
//   MV2:  bit0 antiparallel strands, bit1 first pair starts with a head,
//         bit2 the two arcs carry different labels
//   MV3:  bits0-2 order of pairs P0,P1,P2 (set when the later-shared arrow
//         comes first), bits3-5 head of arrows a01,a12,a02 sits on the
//         higher-indexed pair
//   MV4:  bit0 branch endpoint before the cusp is a head, bit1 cusp is
//         positive, bit2 label before the cusp is R
//   KINK_PAIR: bit0 first kink clockwise, bit1 second kink clockwise
namespace mv2 {
inline constexpr int antiparallel = 1;
inline constexpr int first_head = 2;
inline constexpr int labels_differ = 4;
inline bool dangerous(int v) { return ((v & antiparallel) != 0) == ((v & labels_differ) != 0); }
} // namespace mv2

struct MoveKind {
    MoveFamily family = MoveFamily::MV1;
    MoveSense sense = MoveSense::Create;
    int variant = 0;
    bool dangerous = false;

    friend auto operator<=>(const MoveKind&, const MoveKind&) = default;
    friend bool operator==(const MoveKind&, const MoveKind&) = default;
};

struct MoveInstance {
    MoveKind kind;
    std::vector<int> anchors;

    friend auto operator<=>(const MoveInstance&, const MoveInstance&) = default;
    friend bool operator==(const MoveInstance&, const MoveInstance&) = default;
};

inline std::string to_string(const MoveKind& k) {
    std::string out = to_string(k.family);
    out += '/';
    out += to_string(k.sense);
    out += "/v" + std::to_string(k.variant);
    if (k.dangerous) out += '!';
    return out;
}

inline std::string to_string(const MoveInstance& m) {
    std::string out = to_string(m.kind) + "@";
    for (std::size_t i = 0; i < m.anchors.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(m.anchors[i]);
    }
    return out;
}

namespace detail {

inline bool mv3_realizable(int variant);

inline MoveKind make_kind(MoveFamily f, MoveSense s, int v) {
    return {f, s, v, f == MoveFamily::MV2 && mv2::dangerous(v)};
}

} // namespace detail

/// Parses the text written by to_string(MoveInstance).
inline MoveInstance parse_move_instance(std::string_view text) {
    auto fail = [&](const char* why) {
        return Error(ErrorCode::SyntaxError, std::string(why) + " in move '" + std::string(text) + "'");
    };
    const auto s1 = text.find('/');
    const auto s2 = s1 == std::string_view::npos ? s1 : text.find('/', s1 + 1);
    const auto at = text.find('@');
    if (s1 == std::string_view::npos || s2 == std::string_view::npos || at == std::string_view::npos || at < s2)
        throw fail("expected FAMILY/sense/vN@anchors");
    const auto fam = text.substr(0, s1);
    const auto sense = text.substr(s1 + 1, s2 - s1 - 1);
    auto var = text.substr(s2 + 1, at - s2 - 1);
    MoveInstance m;
    if (fam == "MV1") m.kind.family = MoveFamily::MV1;
    else if (fam == "MV2") m.kind.family = MoveFamily::MV2;
    else if (fam == "MV3") m.kind.family = MoveFamily::MV3;
    else if (fam == "MV4") m.kind.family = MoveFamily::MV4;
    else if (fam == "KINK_PAIR") m.kind.family = MoveFamily::KINK_PAIR;
    else throw fail("unknown family");
    if (sense == "create") m.kind.sense = MoveSense::Create;
    else if (sense == "delete") m.kind.sense = MoveSense::Delete;
    else if (sense == "slide") m.kind.sense = MoveSense::Slide;
    else throw fail("unknown sense");
    if (!var.empty() && var.back() == '!') var.remove_suffix(1);
    if (var.size() < 2 || var.front() != 'v') throw fail("bad variant");
    try {
        m.kind.variant = std::stoi(std::string(var.substr(1)));
    } catch (const std::exception&) {
        throw fail("bad variant");
    }
    m.kind = detail::make_kind(m.kind.family, m.kind.sense, m.kind.variant);
    std::string_view rest = text.substr(at + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto part = rest.substr(0, comma);
        try {
            std::size_t used = 0;
            m.anchors.push_back(std::stoi(std::string(part), &used));
            if (used != part.size()) throw fail("bad anchor");
        } catch (const std::invalid_argument&) {
            throw fail("bad anchor");
        } catch (const std::out_of_range&) {
            throw fail("bad anchor");
        }
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return m;
}

/// The full local-pattern table for a mode.
inline std::vector<MoveKind> move_schemas(MoveMode mode) {
    using detail::make_kind;
    std::vector<MoveKind> out;
    if (is_legendrian(mode)) {
        for (int v = 0; v < 4; ++v) {
            out.push_back(make_kind(MoveFamily::MV1, MoveSense::Create, v));
            out.push_back(make_kind(MoveFamily::MV1, MoveSense::Delete, v));
        }
    }
    for (int v = 0; v < 8; ++v) {
        if (mode == MoveMode::LegendrianIsotopy && mv2::dangerous(v)) continue;
        if (mode == MoveMode::FlatFramedHomotopy && (v & mv2::labels_differ)) continue;
        out.push_back(make_kind(MoveFamily::MV2, MoveSense::Create, v));
        out.push_back(make_kind(MoveFamily::MV2, MoveSense::Delete, v));
    }
    for (int v = 0; v < 64; ++v) {
        if (detail::mv3_realizable(v)) out.push_back(make_kind(MoveFamily::MV3, MoveSense::Slide, v));
    }
    if (is_legendrian(mode)) {
        for (int v = 0; v < 8; ++v) {
            out.push_back(make_kind(MoveFamily::MV4, MoveSense::Create, v));
            out.push_back(make_kind(MoveFamily::MV4, MoveSense::Delete, v));
        }
    } else {
        for (int v = 0; v < 4; ++v) {
            out.push_back(make_kind(MoveFamily::KINK_PAIR, MoveSense::Create, v));
            out.push_back(make_kind(MoveFamily::KINK_PAIR, MoveSense::Delete, v));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline bool mode_allows(MoveMode mode, const MoveKind& k) {
    switch (k.family) {
    case MoveFamily::MV1:
    case MoveFamily::MV4: return is_legendrian(mode);
    case MoveFamily::KINK_PAIR: return !is_legendrian(mode);
    case MoveFamily::MV3: return true;
    case MoveFamily::MV2:
        if (mode == MoveMode::LegendrianIsotopy) return !k.dangerous;
        if (mode == MoveMode::FlatFramedHomotopy) return (k.variant & mv2::labels_differ) == 0;
        return true;
    }
    return false;
}

namespace detail {

inline int mod(int a, int n) { return ((a % n) + n) % n; }

inline int max_arrow_id(const std::vector<Site>& s) {
    int m = 0;
    for (const Site& x : s) {
        if (x.is_arrow()) m = std::max(m, x.id);
    }
    return m;
}

inline Site endpoint(bool head, int id) { return head ? Site::head(id) : Site::tail(id); }

// MV3 variant semantics. Pairs P0,P1,P2 sorted by start; P0={a01,a02},
// P1={a01,a12}, P2={a02,a12}. Order bit i set when pair i starts with its
// "second" arrow (P0: a02, P1: a12, P2: a12). Head bits: a01 head on P1,
// a12 head on P2, a02 head on P2.
struct Mv3Local {
    std::array<bool, 3> order{};  // per pair
    std::array<bool, 3> head_hi{};  // per arrow a01, a12, a02
};

inline Mv3Local mv3_decode(int v) {
    Mv3Local l;
    for (int i = 0; i < 3; ++i) {
        l.order[static_cast<std::size_t>(i)] = (v >> i) & 1;
        l.head_hi[static_cast<std::size_t>(i)] = (v >> (3 + i)) & 1;
    }
    return l;
}

inline bool mv3_realizable(int variant) {
    const Mv3Local l = mv3_decode(variant);
    // arrows: 0 = a01, 1 = a12, 2 = a02. arrow_of[p][q] for pair p, q.
    const int arrow_of[3][3] = {{-1, 0, 2}, {0, -1, 1}, {2, 1, -1}};
    // first arrow met on each pair
    const int first_arrow[3] = {l.order[0] ? 2 : 0, l.order[1] ? 1 : 0, l.order[2] ? 1 : 2};
    // head pair of each arrow
    const int head_pair[3] = {l.head_hi[0] ? 1 : 0, l.head_hi[1] ? 2 : 1, l.head_hi[2] ? 2 : 0};
    const int labelings[2][3] = {{0, 1, 2}, {0, 2, 1}};
    for (const auto& lab : labelings) {
        int eps[3];
        for (int k = 0; k < 3; ++k) {
            const int cur = lab[k];
            const int prev = lab[(k + 2) % 3];
            eps[k] = first_arrow[cur] == arrow_of[cur][prev] ? 1 : -1;
        }
        bool ok = true;
        for (int k = 0; k < 3 && ok; ++k) {
            const int cur = lab[k];
            const int next = lab[(k + 1) % 3];
            const int a = arrow_of[cur][next];
            const bool head_here = head_pair[a] == cur;
            ok = head_here == (eps[k] * eps[(k + 1) % 3] == 1);
        }
        if (ok) return true;
    }
    return false;
}

inline bool mv1_first_cusp_positive(Coorientation label, bool head_first) {
    return (label == Coorientation::L) == !head_first;
}

inline bool mv4_b_reversed(bool cusp_positive, Coorientation label, bool first_head) {
    const bool s = cusp_positive == (label == Coorientation::L);
    const bool first_tail = !first_head;
    return s ? first_tail : !first_tail;
}

inline LegendrianGaussDiagram erase_sites(const LegendrianGaussDiagram& d, std::vector<int> idx) {
    const int n = static_cast<int>(d.size());
    std::vector<bool> drop(d.size(), false);
    for (int i : idx) drop[static_cast<std::size_t>(mod(i, n))] = true;
    std::vector<Site> out;
    out.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!drop[i]) out.push_back(d[i]);
    }
    return {relabel_by_first_occurrence(out), d.base()};
}

struct Scan {
    const std::vector<Site>& s;
    int n;
    ArrowIndex idx;
    std::vector<Coorientation> lab;

    explicit Scan(const LegendrianGaussDiagram& d)
        : s(d.sites()), n(static_cast<int>(d.size())), idx(d.sites()), lab(gap_labels(d)) {}

    const Site& at(int i) const { return s[static_cast<std::size_t>(mod(i, n))]; }
    int partner(int i) const { return idx.partner(s, mod(i, n)); }
    Coorientation label(int g) const { return lab[static_cast<std::size_t>(mod(g, n == 0 ? 1 : n))]; }
};

// Adjacent pair (i, i+1) of endpoints of two different arrows.
inline bool mixed_pair(const Scan& sc, int i) {
    const Site& a = sc.at(i);
    const Site& b = sc.at(i + 1);
    return sc.n >= 2 && a.is_arrow() && b.is_arrow() && a.id != b.id;
}

inline bool pairs_disjoint(int i, int j, int n) {
    return mod(i - j, n) >= 2 && mod(j - i, n) >= 2;
}

} // namespace detail

struct EnumerateOptions {
    /// Create moves whose result would exceed this many sites are skipped.
    std::size_t max_length = static_cast<std::size_t>(-1);
};

/// All applicable instances, sorted by (family, sense, variant, anchors).
inline std::vector<MoveInstance> enumerate_moves(const LegendrianGaussDiagram& d, MoveMode mode,
                                                 const EnumerateOptions& opt = {}) {
    using namespace detail;
    if (mode == MoveMode::FlatFramedHomotopy && (d.cusp_count() != 0 || d.base() != Coorientation::L))
        throw Error(ErrorCode::InvalidArgument, "flat mode works on cusp-free words with base L");
    for (const Site& s : d.sites()) {
        if (s.is_mark()) throw Error(ErrorCode::SingularNotAllowed, "moves on a singular diagram");
    }
    const Scan sc(d);
    const int n = sc.n;
    const int gaps = static_cast<int>(d.gap_count());
    std::vector<MoveInstance> out;
    auto push = [&](MoveFamily f, MoveSense s, int v, std::vector<int> anchors) {
        MoveInstance m{make_kind(f, s, v), std::move(anchors)};
        if (mode_allows(mode, m.kind)) out.push_back(std::move(m));
    };
    const bool room4 = d.size() + 4 <= opt.max_length;

    if (is_legendrian(mode)) {
        // MV1
        if (room4) {
            for (int g = 0; g < gaps; ++g) {
                const int lb = sc.label(g) == Coorientation::R ? 2 : 0;
                push(MoveFamily::MV1, MoveSense::Create, 0 | lb, {g});
                push(MoveFamily::MV1, MoveSense::Create, 1 | lb, {g});
            }
        }
        if (n >= 4) {
            for (int i = 0; i < n; ++i) {
                const Site& e1 = sc.at(i);
                const Site& c1 = sc.at(i + 1);
                const Site& c2 = sc.at(i + 2);
                const Site& e2 = sc.at(i + 3);
                if (!e1.is_arrow() || !e2.is_arrow() || e1.id != e2.id) continue;
                if (!c1.is_cusp() || !c2.is_cusp() || c1.sign == c2.sign) continue;
                const bool head_first = e1.is_head();
                const Coorientation lb = sc.label(i);
                if ((c1.sign == CuspSign::Positive) != mv1_first_cusp_positive(lb, head_first)) continue;
                push(MoveFamily::MV1, MoveSense::Delete, (head_first ? 1 : 0) | (lb == Coorientation::R ? 2 : 0), {i});
            }
        }
    }

    // MV2
    if (room4) {
        for (int ga = 0; ga < gaps; ++ga) {
            for (int gb = ga; gb < gaps; ++gb) {
                const int ld = sc.label(ga) != sc.label(gb) ? mv2::labels_differ : 0;
                for (int v = 0; v < 4; ++v) push(MoveFamily::MV2, MoveSense::Create, v | ld, {ga, gb});
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (!mixed_pair(sc, i)) continue;
        const Site& a0 = sc.at(i);
        const Site& a1 = sc.at(i + 1);
        if (a0.kind == a1.kind) continue;
        const int pa0 = sc.partner(i);
        const int pa1 = sc.partner(i + 1);
        // The other pair: partners adjacent, in either order, starting after i.
        int j = -1;
        bool anti = false;
        if (mod(pa1 - pa0, n) == 1) { j = pa0; anti = false; }
        else if (mod(pa0 - pa1, n) == 1) { j = pa1; anti = true; }
        if (j < 0 || j <= i || !pairs_disjoint(i, j, n)) continue;
        int v = (anti ? mv2::antiparallel : 0) | (a0.is_head() ? mv2::first_head : 0);
        if (sc.label(i) != sc.label(j)) v |= mv2::labels_differ;
        push(MoveFamily::MV2, MoveSense::Delete, v, {i, j});
    }

    // MV3
    {
        std::vector<int> pairs;
        for (int i = 0; i < n; ++i) {
            if (mixed_pair(sc, i)) pairs.push_back(i);
        }
        const std::size_t np = pairs.size();
        for (std::size_t x = 0; x < np; ++x) {
            for (std::size_t y = x + 1; y < np; ++y) {
                const int i = pairs[x], j = pairs[y];
                if (!pairs_disjoint(i, j, n)) continue;
                for (std::size_t z = y + 1; z < np; ++z) {
                    const int k = pairs[z];
                    if (!pairs_disjoint(i, k, n) || !pairs_disjoint(j, k, n)) continue;
                    const int A[2] = {sc.at(i).id, sc.at(i + 1).id};
                    const int B[2] = {sc.at(j).id, sc.at(j + 1).id};
                    const int C[2] = {sc.at(k).id, sc.at(k + 1).id};
                    auto shared = [](const int* p, const int* q) {
                        int c = 0, id = -1;
                        for (int u = 0; u < 2; ++u)
                            for (int w = 0; w < 2; ++w)
                                if (p[u] == q[w]) { ++c; id = p[u]; }
                        return c == 1 ? id : -1;
                    };
                    const int a01 = shared(A, B);
                    const int a12 = shared(B, C);
                    const int a02 = shared(A, C);
                    if (a01 < 0 || a12 < 0 || a02 < 0 || a01 == a12 || a12 == a02 || a01 == a02) continue;
                    int v = 0;
                    if (A[0] == a02) v |= 1;
                    if (B[0] == a12) v |= 2;
                    if (C[0] == a12) v |= 4;
                    auto head_in = [&](int arrow, int start) {
                        return (sc.at(start).id == arrow && sc.at(start).is_head()) ||
                               (sc.at(start + 1).id == arrow && sc.at(start + 1).is_head());
                    };
                    if (head_in(a01, j)) v |= 8;
                    if (head_in(a12, k)) v |= 16;
                    if (head_in(a02, k)) v |= 32;
                    if (!mv3_realizable(v)) continue;
                    push(MoveFamily::MV3, MoveSense::Slide, v, {i, j, k});
                }
            }
        }
    }

    if (is_legendrian(mode)) {
        // MV4
        for (int c = 0; c < n; ++c) {
            const Site& cs = sc.at(c);
            if (!cs.is_cusp()) continue;
            const bool pos = cs.sign == CuspSign::Positive;
            const Coorientation lb = sc.label(c);
            const int base_v = (pos ? 2 : 0) | (lb == Coorientation::R ? 4 : 0);
            if (room4) {
                for (int gb = 0; gb < gaps; ++gb) {
                    push(MoveFamily::MV4, MoveSense::Create, base_v, {c, gb});
                    push(MoveFamily::MV4, MoveSense::Create, base_v | 1, {c, gb});
                }
            }
            if (n < 5) continue;
            const Site& e1 = sc.at(c - 1);
            const Site& e2 = sc.at(c + 1);
            if (!e1.is_arrow() || !e2.is_arrow() || e1.id == e2.id || e1.kind == e2.kind) continue;
            const int pp = sc.partner(c - 1);
            const int qq = sc.partner(c + 1);
            int bstart = -1;
            bool reversed = false;
            if (mod(qq - pp, n) == 1) { bstart = pp; reversed = false; }
            else if (mod(pp - qq, n) == 1) { bstart = qq; reversed = true; }
            if (bstart < 0) continue;
            const bool first_head = e1.is_head();
            if (reversed != mv4_b_reversed(pos, lb, first_head)) continue;
            push(MoveFamily::MV4, MoveSense::Delete, base_v | (first_head ? 1 : 0), {c, bstart});
        }
    } else {
        // KINK_PAIR
        if (room4) {
            for (int g = 0; g < gaps; ++g) {
                for (int v = 0; v < 4; ++v) push(MoveFamily::KINK_PAIR, MoveSense::Create, v, {g});
            }
        }
        if (n >= 4) {
            for (int i = 0; i < n; ++i) {
                auto kink = [&](int p) { return sc.at(p).id == sc.at(p + 1).id; };
                if (!kink(i) || !kink(i + 2)) continue;
                const int v = (sc.at(i).is_head() ? 1 : 0) | (sc.at(i + 2).is_head() ? 2 : 0);
                push(MoveFamily::KINK_PAIR, MoveSense::Delete, v, {i});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<MoveInstance> enumerate_moves(const FlatVirtualString& s, const EnumerateOptions& opt = {}) {
    return enumerate_moves(s.as_diagram(), MoveMode::FlatFramedHomotopy, opt);
}

/// Rewrites without checking legality; the instance must come from
/// enumerate_moves on the same diagram.
inline LegendrianGaussDiagram apply_move_unchecked(const LegendrianGaussDiagram& d, const MoveInstance& m) {
    using namespace detail;
    const Scan sc(d);
    const int n = sc.n;
    const int v = m.kind.variant;
    const int next = max_arrow_id(d.sites()) + 1;
    std::vector<Site> s = d.sites();
    auto at_gap = [&](int g) { return n == 0 ? 0 : mod(g, n); };

    switch (m.kind.family) {
    case MoveFamily::MV1: {
        if (m.kind.sense == MoveSense::Create) {
            const int g = at_gap(m.anchors[0]);
            const bool head_first = v & 1;
            const bool pos = mv1_first_cusp_positive(sc.label(g), head_first);
            const CuspSign c1 = pos ? CuspSign::Positive : CuspSign::Negative;
            const std::array<Site, 4> block{endpoint(head_first, next), Site::cusp(c1),
                                            Site::cusp(opposite(c1)), endpoint(!head_first, next)};
            s.insert(s.begin() + g, block.begin(), block.end());
            return {std::move(s), d.base()};
        }
        const auto r = rotated(d, static_cast<std::size_t>(m.anchors[0]));
        std::vector<Site> rest(r.sites().begin() + 4, r.sites().end());
        return {relabel_by_first_occurrence(rest), r.base()};
    }
    case MoveFamily::MV2: {
        if (m.kind.sense == MoveSense::Create) {
            const int ga = at_gap(m.anchors[0]);
            const int gb = at_gap(m.anchors[1]);
            const bool fh = v & mv2::first_head;
            const int a1 = next, a2 = next + 1;
            const std::array<Site, 2> apair{endpoint(fh, a1), endpoint(!fh, a2)};
            std::array<Site, 2> bpair{endpoint(!fh, a1), endpoint(fh, a2)};
            if (v & mv2::antiparallel) std::swap(bpair[0], bpair[1]);
            s.insert(s.begin() + gb, bpair.begin(), bpair.end());
            s.insert(s.begin() + ga, apair.begin(), apair.end());
            return {std::move(s), d.base()};
        }
        return erase_sites(d, {m.anchors[0], m.anchors[0] + 1, m.anchors[1], m.anchors[1] + 1});
    }
    case MoveFamily::MV3: {
        for (int a : m.anchors) std::swap(s[static_cast<std::size_t>(mod(a, n))], s[static_cast<std::size_t>(mod(a + 1, n))]);
        return {std::move(s), d.base()};
    }
    case MoveFamily::MV4: {
        const int c = mod(m.anchors[0], n);
        if (m.kind.sense == MoveSense::Delete)
            return erase_sites(d, {c - 1, c + 1, m.anchors[1], m.anchors[1] + 1});
        const int gb = mod(m.anchors[1], n);
        const bool fh = v & 1;
        const bool pos = d[static_cast<std::size_t>(c)].sign == CuspSign::Positive;
        const int p = next, q = next + 1;
        const Site e1 = endpoint(fh, p), e2 = endpoint(!fh, q);
        std::array<Site, 2> bpair{endpoint(!fh, p), endpoint(fh, q)};
        if (mv4_b_reversed(pos, sc.label(c), fh)) std::swap(bpair[0], bpair[1]);
        const bool before = gb == c;
        const bool after = gb == mod(c + 1, n);
        std::vector<Site> out;
        out.reserve(s.size() + 4);
        for (int i = 0; i < n; ++i) {
            if (i == gb && !before && !after) out.insert(out.end(), bpair.begin(), bpair.end());
            if (i == c) {
                if (before) out.insert(out.end(), bpair.begin(), bpair.end());
                out.push_back(e1);
                out.push_back(s[static_cast<std::size_t>(i)]);
                out.push_back(e2);
                if (after) out.insert(out.end(), bpair.begin(), bpair.end());
            } else {
                out.push_back(s[static_cast<std::size_t>(i)]);
            }
        }
        return {std::move(out), d.base()};
    }
    case MoveFamily::KINK_PAIR: {
        if (m.kind.sense == MoveSense::Delete) {
            const int i = m.anchors[0];
            return erase_sites(d, {i, i + 1, i + 2, i + 3});
        }
        const int g = at_gap(m.anchors[0]);
        const bool cw1 = v & 1, cw2 = v & 2;
        const std::array<Site, 4> block{endpoint(cw1, next), endpoint(!cw1, next), endpoint(cw2, next + 1),
                                        endpoint(!cw2, next + 1)};
        s.insert(s.begin() + g, block.begin(), block.end());
        return {std::move(s), d.base()};
    }
    }
    throw Error(ErrorCode::IllegalMove, "unknown family");
}

/// Checked application: the instance must be enumerated for d in mode.
inline LegendrianGaussDiagram apply_move(const LegendrianGaussDiagram& d, const MoveInstance& m,
                                         MoveMode mode = MoveMode::LegendrianHomotopy) {
    if (!mode_allows(mode, m.kind))
        throw Error(ErrorCode::IllegalMove, to_string(m) + " not allowed in " + to_string(mode) + " mode");
    const auto all = enumerate_moves(d, mode);
    if (!std::binary_search(all.begin(), all.end(), m))
        throw Error(ErrorCode::IllegalMove, to_string(m) + " does not match the diagram");
    return apply_move_unchecked(d, m);
}

inline FlatVirtualString apply_move(const FlatVirtualString& s, const MoveInstance& m) {
    auto d = apply_move(s.as_diagram(), m, MoveMode::FlatFramedHomotopy);
    return FlatVirtualString(d.sites());
}

/// An instance on apply_move(d, m) that leads back to d's canonical code.
inline MoveInstance inverse_move(const LegendrianGaussDiagram& d, const MoveInstance& m,
                                 MoveMode mode = MoveMode::LegendrianHomotopy) {
    const auto r = apply_move(d, m, mode);
    const auto target = canonical_key(d);
    for (const auto& back : enumerate_moves(r, mode)) {
        if (canonical_key(apply_move_unchecked(r, back)) == target) return back;
    }
    throw Error(ErrorCode::IllegalMove, "no inverse for " + to_string(m));
}

/// Inserts min(n1,n2) blocks C+ C+ C- C-, then the remaining same-sign pairs.
inline LegendrianGaussDiagram stabilize(const LegendrianGaussDiagram& d, int n1, int n2, int position) {
    if (n1 < 0 || n2 < 0) throw Error(ErrorCode::InvalidArgument, "stabilization counts must be nonnegative");
    for (const Site& s : d.sites()) {
        if (s.is_mark()) throw Error(ErrorCode::SingularNotAllowed, "stabilizing a singular diagram");
    }
    const int gaps = static_cast<int>(d.gap_count());
    if (position < 0 || position >= gaps) throw Error(ErrorCode::InvalidArgument, "position is not a gap", position);
    const Site P = Site::cusp(CuspSign::Positive), N = Site::cusp(CuspSign::Negative);
    std::vector<Site> block;
    const int both = std::min(n1, n2);
    for (int i = 0; i < both; ++i) block.insert(block.end(), {P, P, N, N});
    for (int i = both; i < n1; ++i) block.insert(block.end(), {P, P});
    for (int i = both; i < n2; ++i) block.insert(block.end(), {N, N});
    std::vector<Site> s = d.sites();
    s.insert(s.begin() + (d.empty() ? 0 : position), block.begin(), block.end());
    return {std::move(s), d.base()};
}

/// Adds one singular mark as an adjacent pair at the gap.
inline LegendrianGaussDiagram insert_singular(const LegendrianGaussDiagram& d, int position) {
    const int gaps = static_cast<int>(d.gap_count());
    if (position < 0 || position >= gaps) throw Error(ErrorCode::InvalidArgument, "position is not a gap", position);
    int next = 0;
    for (const Site& s : d.sites()) {
        if (s.is_mark()) next = std::max(next, s.id);
    }
    ++next;
    std::vector<Site> s = d.sites();
    const Site mk = Site::mark(next);
    s.insert(s.begin() + (d.empty() ? 0 : position), {mk, mk});
    return {std::move(s), d.base()};
}

} // namespace legknot
