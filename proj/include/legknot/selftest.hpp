#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "legknot/enumerate.hpp"
#include "legknot/moves.hpp"
#include "legknot/realization.hpp"

namespace legknot {

struct SelftestEntry {
    std::string diagram;
    std::string move;       // family/sense
    std::string footprint;  // anchors in the diagram's coordinates
    std::string detail;
};

struct SelftestReport {
    std::size_t diagrams = 0;
    std::size_t footprints = 0;
    std::size_t instances_checked = 0;
    std::size_t dangerous_attempts = 0;
    std::size_t dangerous_rejected = 0;
    std::map<std::string, std::size_t> kinds_seen;  // MoveKind text -> matched instances
    std::vector<std::string> kinds_unseen;
    std::vector<SelftestEntry> mismatches;

    bool ok() const {
        return mismatches.empty() && kinds_unseen.empty() && dangerous_attempts == dangerous_rejected;
    }
};

struct SelftestOptions {
    std::size_t max_length = 8;  // word length bound for before and after pictures
    std::uint64_t seed = 11;
};

namespace oracle {

using Result = std::pair<std::string, bool>;  // canonical code, dangerous
using ResultSet = std::set<Result>;

// Part of the word replaced by a template piece: `len` sites starting at
// `start`, or an insertion at gap `start` when len == 0.
struct Slot {
    int start = 0;
    int len = 0;
};

struct Scenario {
    std::vector<TemplatePiece> before;
    std::vector<TemplatePiece> after;
    // MV2 only: template tangent directions of the two strands at the
    // tangency and which pieces carry them.
    bool has_tangency = false;
    Point dir_a, dir_b;
    int piece_a = 0, piece_b = 1;
};

inline TemplatePiece piece(std::vector<Point> pts, std::vector<int> cusps = {}) { return {std::move(pts), std::move(cusps)}; }

inline std::vector<LayoutItem> items_for(const LegendrianGaussDiagram& d, const std::vector<Slot>& slots) {
    std::vector<LayoutItem> items;
    const int n = static_cast<int>(d.size());
    std::vector<int> cover(static_cast<std::size_t>(n), -1);
    for (std::size_t k = 0; k < slots.size(); ++k) {
        for (int j = 0; j < slots[k].len; ++j) cover[static_cast<std::size_t>(slots[k].start + j)] = static_cast<int>(k);
    }
    for (int i = 0; i <= n; ++i) {
        for (std::size_t k = 0; k < slots.size(); ++k) {
            if (slots[k].len == 0 && slots[k].start == i) items.push_back(LayoutItem::of_piece(static_cast<int>(k)));
        }
        if (i == n) break;
        const int c = cover[static_cast<std::size_t>(i)];
        if (c < 0) {
            items.push_back(LayoutItem::of_site(d[static_cast<std::size_t>(i)]));
        } else if (slots[static_cast<std::size_t>(c)].start == i) {
            items.push_back(LayoutItem::of_piece(c));
        }
    }
    return items;
}

inline bool same_word(const LegendrianGaussDiagram& x, const LegendrianGaussDiagram& y) {
    return x.base() == y.base() && relabel_by_first_occurrence(x.sites()) == relabel_by_first_occurrence(y.sites());
}

// Runs every scenario on the rotated word; keeps those whose before picture
// reproduces it and collects the after pictures.
inline ResultSet geometric(const LegendrianGaussDiagram& d, const std::vector<Slot>& slots,
                           const std::vector<Scenario>& scenarios, std::uint64_t seed) {
    ResultSet out;
    const auto items = items_for(d, slots);
    LayoutOptions opt;
    opt.seed = seed;
    for (const auto& sc : scenarios) {
        const auto before = build_layout(items, sc.before, d.base(), opt);
        if (!same_word(gauss_of_planar(before.front), d)) continue;
        const auto after = build_layout(items, sc.after, d.base(), opt);
        bool danger = false;
        if (sc.has_tangency) {
            const auto lab = segment_labels(after.front);
            const auto la = lab[static_cast<std::size_t>(after.piece_first_vertex[static_cast<std::size_t>(sc.piece_a)])];
            const auto lb = lab[static_cast<std::size_t>(after.piece_first_vertex[static_cast<std::size_t>(sc.piece_b)])];
            const Point na = normal_sign(la) * rot90(sc.dir_a);
            const Point nb = normal_sign(lb) * rot90(sc.dir_b);
            danger = cross(na, nb) == 0 && dot(na, nb) > 0;
        }
        out.insert({canonical_code(gauss_of_planar(after.front)).text, danger});
    }
    return out;
}

// --- templates -----------------------------------------------------------

inline std::vector<Scenario> mv1_create() {
    std::vector<Scenario> out;
    for (int s : {1, -1}) {
        Scenario sc;
        sc.before = {piece({{-4, 0}, {4, 0}})};
        sc.after = {piece({{-4, 0}, {2, 2 * s}, {-2, 2 * s}, {4, 0}}, {1, 2})};
        out.push_back(sc);
    }
    return out;
}

inline std::vector<Scenario> reversed(std::vector<Scenario> v) {
    for (auto& sc : v) std::swap(sc.before, sc.after);
    return v;
}

// a runs along +x; b sits at height y0 running along sx and dips across a.
inline std::vector<Scenario> mv2_create(bool swap_roles) {
    std::vector<Scenario> out;
    for (int y0 : {2, -2}) {
        for (int sx : {1, -1}) {
            Scenario sc;
            const TemplatePiece a = piece({{-4, 0}, {4, 0}});
            const TemplatePiece b0 = piece({{-4 * sx, y0}, {4 * sx, y0}});
            const TemplatePiece b1 = piece({{-4 * sx, y0}, {-sx, -y0 / 2}, {sx, -y0 / 2}, {4 * sx, y0}});
            sc.before = swap_roles ? std::vector<TemplatePiece>{b0, a} : std::vector<TemplatePiece>{a, b0};
            sc.after = swap_roles ? std::vector<TemplatePiece>{b1, a} : std::vector<TemplatePiece>{a, b1};
            sc.has_tangency = true;
            sc.dir_a = {1, 0};
            sc.dir_b = {sx, 0};
            sc.piece_a = swap_roles ? 1 : 0;
            sc.piece_b = swap_roles ? 0 : 1;
            out.push_back(sc);
        }
    }
    return out;
}

// Three lines at 0, 60 and 120 degrees; the third one is offset by +-h,
// which flips the small triangle.
inline std::vector<Scenario> mv3_slide() {
    const Point dirs[3] = {{1000, 0}, {500, 866}, {-500, 866}};
    const int h = 200;
    std::vector<Scenario> out;
    int perm[3] = {0, 1, 2};
    do {
        for (int mask = 0; mask < 8; ++mask) {
            for (int hs : {1, -1}) {
                Scenario sc;
                for (int slot = 0; slot < 3; ++slot) {
                    const int line = perm[slot];
                    const int s = (mask >> slot) & 1 ? -1 : 1;
                    const Point u = s * dirs[line];
                    auto mk = [&](int off) {
                        const Point c = line == 2 ? Point{0, off} : Point{0, 0};
                        return piece({c - 4 * u, c + 4 * u});
                    };
                    sc.before.push_back(mk(hs * h));
                    sc.after.push_back(mk(-hs * h));
                }
                out.push_back(sc);
            }
        }
    } while (std::next_permutation(perm, perm + 3));
    return out;
}

// "<" cusp with a vertical strand moving from x=-3 to x=+3 through it.
// Piece 0 replaces the cusp, piece 1 is the passing strand.
inline std::vector<Scenario> mv4_create() {
    std::vector<Scenario> out;
    for (int o : {1, -1}) {
        for (int up : {1, -1}) {
            Scenario sc;
            const TemplatePiece cusp = piece({{6, 3 * o}, {0, 0}, {6, -3 * o}}, {1});
            sc.before = {cusp, piece({{-3, -5 * up}, {-3, 5 * up}})};
            sc.after = {cusp, piece({{3, -5 * up}, {3, 5 * up}})};
            out.push_back(sc);
        }
    }
    return out;
}

inline std::vector<Point> kink_points(int o, int h) { return {{o - 2, 0}, {o + 2, 0}, {o + 1, 2 * h}, {o, -h}, {o + 3, 0}}; }

inline std::vector<Scenario> kink_pair_create() {
    std::vector<Scenario> out;
    for (int h1 : {1, -1}) {
        for (int h2 : {1, -1}) {
            std::vector<Point> pts{{-4, 0}};
            for (const Point& p : kink_points(0, h1)) pts.push_back(p);
            for (const Point& p : kink_points(8, h2)) pts.push_back(p);
            pts.push_back({15, 0});
            Scenario sc;
            sc.before = {piece({{-4, 0}, {15, 0}})};
            sc.after = {piece(pts)};
            out.push_back(sc);
        }
    }
    return out;
}

// --- Gauss side ----------------------------------------------------------

inline ResultSet gauss_side(const LegendrianGaussDiagram& d, const std::vector<MoveInstance>& moves, MoveFamily f,
                            MoveSense s, const std::vector<int>& anchors, std::vector<MoveInstance>* used) {
    ResultSet out;
    for (const auto& m : moves) {
        if (m.kind.family != f || m.kind.sense != s || m.anchors != anchors) continue;
        out.insert({canonical_code(apply_move_unchecked(d, m)).text, m.kind.dangerous});
        if (used) used->push_back(m);
    }
    return out;
}

inline std::string describe(const ResultSet& r) {
    std::string out = "{";
    for (const auto& [code, danger] : r) out += (out.size() > 1 ? "; " : "") + code + (danger ? " !" : "");
    return out + "}";
}

inline std::string anchors_text(const std::vector<int>& a) {
    std::string out;
    for (int x : a) out += (out.empty() ? "" : ",") + std::to_string(x);
    return out;
}

} // namespace oracle

/// Compares every enumerated move with the planar front move drawn inside a
/// template window, over all diagrams of bounded length.
inline SelftestReport move_table_selftest(const SelftestOptions& opt = {}) {
    using namespace oracle;
    SelftestReport rep;
    const auto s_mv1c = mv1_create();
    const auto s_mv1d = reversed(s_mv1c);
    std::vector<Scenario> s_mv2c = mv2_create(false);
    for (auto& x : mv2_create(true)) s_mv2c.push_back(x);
    const auto s_mv2d = reversed(s_mv2c);
    const auto s_mv3 = mv3_slide();
    const auto s_mv4c = mv4_create();
    const auto s_mv4d = reversed(s_mv4c);
    const auto s_kc = kink_pair_create();
    const auto s_kd = reversed(s_kc);

    EnumerationLimits lim;
    lim.max_length = opt.max_length;
    lim.max_arrows = static_cast<int>(opt.max_length / 2);
    lim.max_cusps = static_cast<int>(opt.max_length);
    const auto corpus = all_diagrams(lim);

    for (const auto& d : corpus) {
        ++rep.diagrams;
        const int n = static_cast<int>(d.size());
        const int gaps = static_cast<int>(d.gap_count());
        const bool small = d.size() + 4 <= opt.max_length;
        const bool flat_ok = d.cusp_count() == 0 && d.base() == Coorientation::L;
        EnumerateOptions eo;
        eo.max_length = opt.max_length;
        std::vector<std::pair<MoveMode, std::vector<MoveInstance>>> modes;
        modes.push_back({MoveMode::LegendrianHomotopy, enumerate_moves(d, MoveMode::LegendrianHomotopy, eo)});
        if (flat_ok) modes.push_back({MoveMode::FlatFramedHomotopy, enumerate_moves(d, MoveMode::FlatFramedHomotopy, eo)});

        // Isotopy mode keeps exactly the safe instances; dangerous ones are refused.
        {
            const auto iso = enumerate_moves(d, MoveMode::LegendrianIsotopy, eo);
            std::vector<MoveInstance> safe;
            for (const auto& m : modes[0].second) {
                if (!m.kind.dangerous) {
                    safe.push_back(m);
                    continue;
                }
                ++rep.dangerous_attempts;
                try {
                    apply_move(d, m, MoveMode::LegendrianIsotopy);
                } catch (const Error& e) {
                    if (e.code() == ErrorCode::IllegalMove) ++rep.dangerous_rejected;
                }
            }
            if (safe != iso)
                rep.mismatches.push_back({to_string(d), "isotopy", "", "isotopy table differs from safe homotopy moves"});
        }

        for (const auto& [mode, moves] : modes) {
            std::vector<MoveInstance> used;
            const std::uint64_t seed = opt.seed + rep.footprints;
            auto check = [&](MoveFamily f, MoveSense s, std::vector<int> anchors, const LegendrianGaussDiagram& rd,
                             const std::vector<Slot>& slots, const std::vector<Scenario>& scen) {
                ++rep.footprints;
                const auto want = gauss_side(d, moves, f, s, anchors, &used);
                const auto got = geometric(rd, slots, scen, seed);
                if (want.empty() && got.empty()) return;
                rep.instances_checked += want.size();
                if (want != got) {
                    rep.mismatches.push_back({to_string(d), std::string(to_string(f)) + "/" + to_string(s),
                                              anchors_text(anchors),
                                              std::string(to_string(mode)) + " gauss " + describe(want) + " planar " + describe(got)});
                }
            };
            auto rot = [&](int r) { return rotated(d, static_cast<std::size_t>(((r % n) + n) % n)); };
            auto rel = [&](int i, int r) { return ((i - r) % n + n) % n; };
            const bool leg = is_legendrian(mode);

            if (small) {
                for (int g = 0; g < gaps; ++g) {
                    if (leg) check(MoveFamily::MV1, MoveSense::Create, {g}, d, {{g, 0}}, s_mv1c);
                    else check(MoveFamily::KINK_PAIR, MoveSense::Create, {g}, d, {{g, 0}}, s_kc);
                    for (int g2 = g; g2 < gaps; ++g2) {
                        check(MoveFamily::MV2, MoveSense::Create, {g, g2}, d, {{g, 0}, {g2, 0}}, s_mv2c);
                    }
                }
                if (leg) {
                    for (int c = 0; c < n; ++c) {
                        if (!d[static_cast<std::size_t>(c)].is_cusp()) continue;
                        for (int gb = 0; gb < gaps; ++gb) {
                            check(MoveFamily::MV4, MoveSense::Create, {c, gb}, d, {{c, 1}, {gb, 0}}, s_mv4c);
                        }
                    }
                }
            }
            if (n == 0) continue;
            auto at = [&](int i) -> const Site& { return d[static_cast<std::size_t>(((i % n) + n) % n)]; };
            auto mixed = [&](int i) { return at(i).is_arrow() && at(i + 1).is_arrow() && at(i).id != at(i + 1).id; };
            auto apart = [&](int i, int j) { return ((i - j) % n + n) % n >= 2 && ((j - i) % n + n) % n >= 2; };
            auto ids = [&](int i) { return std::minmax(at(i).id, at(i + 1).id); };

            for (int i = 0; i < n && n >= 4; ++i) {
                // four-site blocks
                const bool kinks = at(i).is_arrow() && at(i + 1).is_arrow() && at(i).id == at(i + 1).id &&
                                   at(i + 2).is_arrow() && at(i + 3).is_arrow() && at(i + 2).id == at(i + 3).id;
                if (!leg && kinks) check(MoveFamily::KINK_PAIR, MoveSense::Delete, {i}, rot(i), {{0, 4}}, s_kd);
                const bool swallow = at(i).is_arrow() && at(i + 3).is_arrow() && at(i).id == at(i + 3).id &&
                                     at(i + 1).is_cusp() && at(i + 2).is_cusp();
                if (leg && swallow) check(MoveFamily::MV1, MoveSense::Delete, {i}, rot(i), {{0, 4}}, s_mv1d);
            }
            for (int i = 0; i < n; ++i) {
                if (!mixed(i)) continue;
                for (int j = i + 1; j < n; ++j) {
                    if (!mixed(j) || !apart(i, j) || ids(i) != ids(j)) continue;
                    check(MoveFamily::MV2, MoveSense::Delete, {i, j}, rot(i), {{0, 2}, {rel(j, i), 2}}, s_mv2d);
                }
            }
            for (int i = 0; i < n; ++i) {
                if (!mixed(i)) continue;
                for (int j = i + 1; j < n; ++j) {
                    if (!mixed(j) || !apart(i, j)) continue;
                    for (int k = j + 1; k < n; ++k) {
                        if (!mixed(k) || !apart(i, k) || !apart(j, k)) continue;
                        std::set<int> all{at(i).id, at(i + 1).id, at(j).id, at(j + 1).id, at(k).id, at(k + 1).id};
                        const auto a = ids(i), b = ids(j), c = ids(k);
                        if (all.size() != 3 || a == b || b == c || a == c) continue;
                        check(MoveFamily::MV3, MoveSense::Slide, {i, j, k}, rot(i),
                              {{0, 2}, {rel(j, i), 2}, {rel(k, i), 2}}, s_mv3);
                    }
                }
            }
            if (leg && n >= 5) {
                ArrowIndex idx(d.sites());
                for (int c = 0; c < n; ++c) {
                    if (!at(c).is_cusp() || !at(c - 1).is_arrow() || !at(c + 1).is_arrow()) continue;
                    if (at(c - 1).id == at(c + 1).id) continue;
                    const int pp = idx.partner(d.sites(), ((c - 1) % n + n) % n);
                    const int qq = idx.partner(d.sites(), (c + 1) % n);
                    int j = -1;
                    if ((qq - pp + n) % n == 1) j = pp;
                    if ((pp - qq + n) % n == 1) j = qq;
                    if (j < 0) continue;
                    const int r = c - 1;
                    check(MoveFamily::MV4, MoveSense::Delete, {c, j}, rot(r), {{0, 3}, {rel(j, r), 2}}, s_mv4d);
                }
            }
            // Every enumerated instance must have been compared.
            std::sort(used.begin(), used.end());
            for (const auto& m : moves) {
                if (!std::binary_search(used.begin(), used.end(), m)) {
                    rep.mismatches.push_back({to_string(d), to_string(m.kind), anchors_text(m.anchors),
                                              std::string(to_string(mode)) + " instance outside every oracle footprint"});
                } else {
                    ++rep.kinds_seen[to_string(m.kind)];
                }
            }
        }
    }
    for (MoveMode mode : {MoveMode::LegendrianHomotopy, MoveMode::FlatFramedHomotopy}) {
        for (const auto& k : move_schemas(mode)) {
            const auto text = to_string(k);
            if (!rep.kinds_seen.count(text) &&
                std::find(rep.kinds_unseen.begin(), rep.kinds_unseen.end(), text) == rep.kinds_unseen.end())
                rep.kinds_unseen.push_back(text);
        }
    }
    return rep;
}

} // namespace legknot
