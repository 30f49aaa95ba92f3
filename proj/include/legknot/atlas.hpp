#pragma once

#include <algorithm>
#include <deque>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "legknot/enumerate.hpp"
#include "legknot/gauss_code.hpp"
#include "legknot/invariants.hpp"
#include "legknot/search.hpp"

namespace legknot {

struct AtlasRecord {
    CanonicalCode code;
    InvariantVector invariants;
    int orbit_id = 0;  // index of the least record in the orbit
};

/// One move joining two explored diagrams; ids below the record count are
/// records, the rest index Atlas::extra_nodes.
struct AtlasLink {
    int from = 0;
    int to = 0;
    MoveInstance move;  // applies to canonical_form(from)
};

struct Atlas {
    MoveMode mode = MoveMode::LegendrianHomotopy;
    int max_word_length = 0;
    SearchBudget budget;
    bool complete = true;  // false when the node budget stopped exploration
    std::vector<AtlasRecord> records;
    std::vector<CanonicalCode> extra_nodes;
    std::vector<AtlasLink> links;

    const CanonicalCode& node_code(int id) const {
        return id < static_cast<int>(records.size()) ? records[static_cast<std::size_t>(id)].code
                                                     : extra_nodes[static_cast<std::size_t>(id) - records.size()];
    }
    /// Record index by code, or -1.
    int find(const CanonicalCode& c) const {
        auto it = std::lower_bound(records.begin(), records.end(), c,
                                   [](const AtlasRecord& r, const CanonicalCode& x) { return r.code < x; });
        return it != records.end() && it->code == c ? static_cast<int>(it - records.begin()) : -1;
    }
};

struct AtlasOptions {
    int max_arrows = 3;
    int max_cusps = 4;
    bool progress = false;  // statistics on standard error
    LayoutOptions layout;
};

namespace detail {

struct UnionFind {
    std::vector<int> parent;
    int add() {
        parent.push_back(static_cast<int>(parent.size()));
        return parent.back();
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent[static_cast<std::size_t>(b)] = a;
        return true;
    }
};

inline std::vector<LegendrianGaussDiagram> atlas_corpus(int max_word_length, MoveMode mode, const AtlasOptions& opt) {
    EnumerationLimits lim;
    lim.max_length = static_cast<std::size_t>(max_word_length);
    lim.max_arrows = opt.max_arrows;
    lim.max_cusps = is_legendrian(mode) ? opt.max_cusps : 0;
    lim.cusp_free_base_l_only = !is_legendrian(mode);
    return all_diagrams(lim);
}

} // namespace detail

/// Enumerates the corpus, computes invariants and merges orbits. Each root
/// runs a breadth-first search of depth budget.max_depth over diagrams of at
/// most budget.max_word_length sites (default: max_word_length); every node
/// is expanded once overall and every merge is witnessed by one move.
inline Atlas atlas_build(int max_word_length, MoveMode mode, const SearchBudget& budget = {},
                         const AtlasOptions& opt = {}) {
    detail::check_budget(budget, true);
    if (max_word_length < 0) throw Error(ErrorCode::InvalidArgument, "negative word length", max_word_length);
    Atlas atlas;
    atlas.mode = mode;
    atlas.max_word_length = max_word_length;
    atlas.budget = budget;
    const std::size_t cap = budget.max_word_length ? budget.max_word_length : static_cast<std::size_t>(max_word_length);
    atlas.budget.max_word_length = cap;

    const auto corpus = detail::atlas_corpus(max_word_length, mode, opt);
    const std::size_t R = corpus.size();
    atlas.records.resize(R);
    detail::parallel_for(R, [&](std::size_t i) {
        atlas.records[i].code = {to_string(corpus[i])};
        atlas.records[i].invariants = invariant_vector(corpus[i], opt.layout);
    });
    if (opt.progress) std::cerr << "atlas: " << R << " records, invariants done\n";

    std::unordered_map<std::string, int> ids;
    std::vector<LegendrianGaussDiagram> reps;
    std::vector<bool> expanded;
    std::vector<int> stamp;
    detail::UnionFind uf;
    // Records always get a node; the budget caps the rest.
    auto intern = [&](const std::string& key, LegendrianGaussDiagram&& rep) -> int {
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        if (reps.size() >= R && reps.size() >= budget.max_nodes) return -1;
        const int id = uf.add();
        ids.emplace(key, id);
        reps.push_back(std::move(rep));
        expanded.push_back(false);
        stamp.push_back(-1);
        return id;
    };
    for (const auto& d : corpus) intern(canonical_key(d), LegendrianGaussDiagram(d));
    std::size_t expansions = 0;
    for (std::size_t r = 0; r < R; ++r) {
        if (expanded[r]) continue;
        std::deque<std::pair<int, int>> queue{{static_cast<int>(r), 0}};
        stamp[r] = static_cast<int>(r);
        while (!queue.empty()) {
            const auto [x, dx] = queue.front();
            queue.pop_front();
            if (expanded[static_cast<std::size_t>(x)] || dx >= budget.max_depth) continue;
            expanded[static_cast<std::size_t>(x)] = true;
            ++expansions;
            for (auto& e : detail::expand(reps[static_cast<std::size_t>(x)], mode, cap)) {
                const int y = intern(e.key, std::move(e.rep));
                if (y < 0) {
                    atlas.complete = false;
                    continue;
                }
                if (uf.unite(x, y)) atlas.links.push_back({x, y, std::move(e.move)});
                if (stamp[static_cast<std::size_t>(y)] != static_cast<int>(r) && !expanded[static_cast<std::size_t>(y)]) {
                    stamp[static_cast<std::size_t>(y)] = static_cast<int>(r);
                    queue.push_back({y, dx + 1});
                }
            }
            if (opt.progress && expansions % 20000 == 0)
                std::cerr << "atlas: " << expansions << " expanded, " << reps.size() << " nodes\n";
        }
    }
    if (opt.progress) std::cerr << "atlas: " << expansions << " expanded, " << reps.size() << " nodes, " << atlas.links.size() << " links\n";

    // Orbit id = least record index in the component.
    std::unordered_map<int, int> least;
    for (std::size_t i = 0; i < R; ++i) least.try_emplace(uf.find(static_cast<int>(i)), static_cast<int>(i));
    for (std::size_t i = 0; i < R; ++i) atlas.records[i].orbit_id = least.at(uf.find(static_cast<int>(i)));
    for (std::size_t i = R; i < reps.size(); ++i) atlas.extra_nodes.push_back({to_string(reps[i])});
    return atlas;
}

/// Move path from record a's canonical form to record b's, through the
/// stored links. Empty optional when they are in different orbits.
inline std::optional<std::vector<MoveInstance>> atlas_witness(const Atlas& atlas, int a, int b) {
    const int n = static_cast<int>(atlas.records.size() + atlas.extra_nodes.size());
    if (a < 0 || b < 0 || a >= n || b >= n) throw Error(ErrorCode::InvalidArgument, "node index out of range");
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));  // (neighbor, link index)
    for (std::size_t k = 0; k < atlas.links.size(); ++k) {
        const auto& l = atlas.links[k];
        adj[static_cast<std::size_t>(l.from)].push_back({l.to, static_cast<int>(k)});
        adj[static_cast<std::size_t>(l.to)].push_back({l.from, static_cast<int>(k)});
    }
    std::vector<int> via(static_cast<std::size_t>(n), -2);
    std::deque<int> q{a};
    via[static_cast<std::size_t>(a)] = -1;
    while (!q.empty() && via[static_cast<std::size_t>(b)] == -2) {
        const int x = q.front();
        q.pop_front();
        for (const auto& [y, k] : adj[static_cast<std::size_t>(x)]) {
            if (via[static_cast<std::size_t>(y)] != -2) continue;
            via[static_cast<std::size_t>(y)] = k;
            q.push_back(y);
        }
    }
    if (via[static_cast<std::size_t>(b)] == -2) return std::nullopt;
    std::vector<int> nodes{b};
    std::vector<int> edges;
    for (int x = b; x != a;) {
        const auto& l = atlas.links[static_cast<std::size_t>(via[static_cast<std::size_t>(x)])];
        edges.push_back(via[static_cast<std::size_t>(x)]);
        x = l.from == x ? l.to : l.from;
        nodes.push_back(x);
    }
    std::reverse(nodes.begin(), nodes.end());
    std::reverse(edges.begin(), edges.end());
    std::vector<MoveInstance> path;
    for (std::size_t s = 0; s < edges.size(); ++s) {
        const auto& l = atlas.links[static_cast<std::size_t>(edges[s])];
        if (l.from == nodes[s]) {
            path.push_back(l.move);
        } else {
            const auto from = parse_gauss_code(atlas.node_code(nodes[s]).text);
            const auto to = parse_gauss_code(atlas.node_code(nodes[s + 1]).text);
            path.push_back(detail::edge_between(from, canonical_key(to), atlas.mode));
        }
    }
    return path;
}

struct OrbitPair {
    int orbit_a = 0;
    int orbit_b = 0;
    std::size_t pairs = 0;
};

struct ClassificationReport {
    std::size_t equal_invariant_pairs = 0;   // equal maslov, flat-homotopic strings
    std::size_t connected_pairs = 0;
    std::size_t unresolved_pairs = 0;
    std::vector<OrbitPair> unresolved;       // grouped by homotopy orbit, truncated
    std::size_t maslov_violations = 0;       // connected pairs with different maslov
    std::size_t unknown_string_records = 0;  // underlying string missing from the flat atlas
};

/// Probes the classification statement on a homotopy atlas, using a flat
/// atlas to decide which underlying strings are flat-homotopic.
inline ClassificationReport classification_probe(const Atlas& homotopy, const Atlas& flat,
                                                 std::size_t max_listed = 1000) {
    if (homotopy.mode != MoveMode::LegendrianHomotopy || flat.mode != MoveMode::FlatFramedHomotopy)
        throw Error(ErrorCode::InvalidArgument, "probe needs a homotopy atlas and a flat atlas");
    ClassificationReport rep;
    // Soundness over every orbit.
    std::map<int, std::map<int, std::size_t>> maslov_by_orbit;
    for (const auto& r : homotopy.records) ++maslov_by_orbit[r.orbit_id][r.invariants.maslov];
    for (const auto& [orbit, by] : maslov_by_orbit) {
        std::size_t total = 0, same = 0;
        for (const auto& [m, c] : by) {
            total += c;
            same += c * (c - 1) / 2;
        }
        rep.maslov_violations += total * (total - 1) / 2 - same;
    }
    // Buckets of (maslov, flat orbit), split by homotopy orbit.
    std::map<std::pair<int, int>, std::map<int, std::size_t>> buckets;
    for (const auto& r : homotopy.records) {
        const auto s = parse_gauss_code("@L" + std::string(r.invariants.string_code.text.empty() ? "" : " ") +
                                        r.invariants.string_code.text);
        const int idx = flat.find(canonical_code(s));
        if (idx < 0) {
            ++rep.unknown_string_records;
            continue;
        }
        ++buckets[{r.invariants.maslov, flat.records[static_cast<std::size_t>(idx)].orbit_id}][r.orbit_id];
    }
    for (const auto& [key, orbits] : buckets) {
        std::size_t total = 0;
        for (const auto& [o, c] : orbits) {
            total += c;
            rep.connected_pairs += c * (c - 1) / 2;
        }
        rep.equal_invariant_pairs += total * (total - 1) / 2;
        for (auto i = orbits.begin(); i != orbits.end() && rep.unresolved.size() < max_listed; ++i) {
            for (auto j = std::next(i); j != orbits.end() && rep.unresolved.size() < max_listed; ++j)
                rep.unresolved.push_back({i->first, j->first, i->second * j->second});
        }
    }
    rep.unresolved_pairs = rep.equal_invariant_pairs - rep.connected_pairs;
    return rep;
}

/// Pairs in one orbit whose values of `inv` differ; 0 for a sound atlas.
template <class Inv>
std::size_t orbit_invariant_violations(const Atlas& atlas, Inv inv) {
    std::map<int, std::map<long, std::size_t>> by;
    for (const auto& r : atlas.records) ++by[r.orbit_id][static_cast<long>(inv(r))];
    std::size_t v = 0;
    for (const auto& [o, m] : by) {
        std::size_t total = 0, same = 0;
        for (const auto& [val, c] : m) {
            total += c;
            same += c * (c - 1) / 2;
        }
        v += total * (total - 1) / 2 - same;
    }
    return v;
}

} // namespace legknot
