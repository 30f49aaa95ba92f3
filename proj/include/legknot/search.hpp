#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "legknot/canonical.hpp"
#include "legknot/invariants.hpp"
#include "legknot/moves.hpp"

namespace legknot {

namespace config {
/// Extra sites allowed beyond the larger endpoint when no cap is given.
inline constexpr std::size_t kDefaultLengthSlack = 6;
inline constexpr int kDefaultDepth = 16;
inline constexpr std::size_t kDefaultNodes = 1000000;
} // namespace config

struct SearchBudget {
    int max_depth = config::kDefaultDepth;
    std::size_t max_nodes = config::kDefaultNodes;
    std::size_t max_word_length = 0;  // 0 = max(|a|, |b|) + slack
};

enum class Verdict { Connected, Distinguished, Exhausted };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Connected: return "connected";
    case Verdict::Distinguished: return "distinguished";
    case Verdict::Exhausted: return "exhausted";
    }
    return "?";
}

struct SearchStats {
    int depth_reached = 0;
    std::size_t frontier_forward = 0;
    std::size_t frontier_backward = 0;
    bool node_limit_hit = false;
};

/// Path moves apply in turn, each to the canonical form of the previous
/// diagram, starting from canonical_form(a).
struct SearchResult {
    Verdict verdict = Verdict::Exhausted;
    std::vector<MoveInstance> path;
    std::string distinguished_by;
    std::size_t nodes_visited = 0;
    SearchStats stats;
};

/// Worker count from LEGKNOT_THREADS (0 or unset = hardware concurrency).
inline unsigned worker_count() {
    unsigned n = 0;
    if (const char* env = std::getenv("LEGKNOT_THREADS")) n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

namespace detail {

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

struct Node {
    LegendrianGaussDiagram rep;  // canonical form
    std::string parent;          // key of the predecessor, empty at the root
    MoveInstance move;           // applied to parent's rep
    int depth = 0;
};

struct Expansion {
    std::string key;
    LegendrianGaussDiagram rep;
    MoveInstance move;
};

inline std::vector<Expansion> expand(const LegendrianGaussDiagram& rep, MoveMode mode, std::size_t cap) {
    std::vector<Expansion> out;
    EnumerateOptions opt;
    opt.max_length = cap;
    for (auto& m : enumerate_moves(rep, mode, opt)) {
        auto [next, key] = canonical_form_and_key(apply_move_unchecked(rep, m));
        out.push_back({std::move(key), std::move(next), std::move(m)});
    }
    return out;
}

inline void check_budget(const SearchBudget& b, bool allow_zero_depth) {
    if ((!allow_zero_depth && b.max_depth <= 0) || b.max_depth < 0 || b.max_nodes == 0)
        throw Error(ErrorCode::BudgetZero, "search budget fields must be positive");
}

inline LegendrianGaussDiagram as_mode_input(const LegendrianGaussDiagram& d, MoveMode mode) {
    validate(d);
    for (const Site& s : d.sites()) {
        if (s.is_mark()) throw Error(ErrorCode::SingularNotAllowed, "search over a singular diagram");
    }
    if (mode == MoveMode::FlatFramedHomotopy) return underlying_string(d).as_diagram();
    return d;
}

inline int flat_rho(const LegendrianGaussDiagram& d) { return rho(planar_flat_of_string(underlying_string(d))); }

// Move on `from` whose result has canonical key `to`.
inline MoveInstance edge_between(const LegendrianGaussDiagram& from, const std::string& to, MoveMode mode) {
    for (const auto& m : enumerate_moves(from, mode)) {
        if (canonical_key(apply_move_unchecked(from, m)) == to) return m;
    }
    throw Error(ErrorCode::IllegalMove, "search graph edge has no inverse");
}

} // namespace detail

/// Replays a path; returns the final diagram.
inline LegendrianGaussDiagram replay(const LegendrianGaussDiagram& a, const std::vector<MoveInstance>& path,
                                     MoveMode mode) {
    auto cur = canonical_form(a);
    for (const auto& m : path) cur = canonical_form(apply_move(cur, m, mode));
    return cur;
}

/// Bidirectional breadth-first search over canonical keys.
inline SearchResult search_equivalence(const LegendrianGaussDiagram& a_in, const LegendrianGaussDiagram& b_in,
                                       MoveMode mode, const SearchBudget& budget = {}) {
    detail::check_budget(budget, false);
    const auto a = detail::as_mode_input(a_in, mode);
    const auto b = detail::as_mode_input(b_in, mode);
    SearchResult res;
    if (is_legendrian(mode) && maslov(a) != maslov(b)) {
        res.verdict = Verdict::Distinguished;
        res.distinguished_by = "maslov";
        return res;
    }
    if (mode == MoveMode::FlatFramedHomotopy && detail::flat_rho(a) != detail::flat_rho(b)) {
        res.verdict = Verdict::Distinguished;
        res.distinguished_by = "rho";
        return res;
    }
    const std::size_t cap = budget.max_word_length ? budget.max_word_length
                                                   : std::max(a.size(), b.size()) + config::kDefaultLengthSlack;
    const auto ka = canonical_key(a), kb = canonical_key(b);
    if (ka == kb) {
        res.verdict = Verdict::Connected;
        res.nodes_visited = 1;
        return res;
    }
    using Table = std::unordered_map<std::string, detail::Node>;
    Table fwd, bwd;
    fwd.reserve(std::min<std::size_t>(budget.max_nodes, 1 << 16));
    bwd.reserve(std::min<std::size_t>(budget.max_nodes, 1 << 16));
    fwd.emplace(ka, detail::Node{canonical_form(a), {}, {}, 0});
    bwd.emplace(kb, detail::Node{canonical_form(b), {}, {}, 0});
    std::vector<std::string> ffront{ka}, bfront{kb};
    int df = 0, db = 0;
    std::string meet;
    while (meet.empty() && df + db < budget.max_depth && !ffront.empty() && !bfront.empty()) {
        const bool forward = ffront.size() <= bfront.size();
        Table& mine = forward ? fwd : bwd;
        Table& other = forward ? bwd : fwd;
        auto& front = forward ? ffront : bfront;
        std::vector<std::string> next;
        const int depth = (forward ? df : db) + 1;
        // Chunks keep the insertion order fixed while stopping early on a meet.
        const std::size_t chunk = std::max<std::size_t>(1, 4 * static_cast<std::size_t>(worker_count()));
        bool full = false;
        for (std::size_t lo = 0; lo < front.size() && meet.empty() && !full; lo += chunk) {
            const std::size_t hi = std::min(front.size(), lo + chunk);
            std::vector<std::vector<detail::Expansion>> kids(hi - lo);
            detail::parallel_for(hi - lo, [&](std::size_t i) { kids[i] = detail::expand(mine.at(front[lo + i]).rep, mode, cap); });
            for (std::size_t i = lo; i < hi && meet.empty() && !full; ++i) {
                for (auto& e : kids[i - lo]) {
                    auto [it, fresh] = mine.try_emplace(e.key);
                    if (!fresh) continue;
                    it->second = detail::Node{std::move(e.rep), front[i], std::move(e.move), depth};
                    if (other.count(e.key)) {
                        meet = e.key;
                        break;
                    }
                    next.push_back(e.key);
                    if (fwd.size() + bwd.size() >= budget.max_nodes) {
                        full = true;
                        break;
                    }
                }
            }
        }
        (forward ? df : db) = depth;
        front = std::move(next);
        if (meet.empty() && fwd.size() + bwd.size() >= budget.max_nodes) {
            res.stats.node_limit_hit = true;
            break;
        }
    }
    res.nodes_visited = fwd.size() + bwd.size();
    res.stats.depth_reached = df + db;
    res.stats.frontier_forward = ffront.size();
    res.stats.frontier_backward = bfront.size();
    if (meet.empty()) {
        res.verdict = Verdict::Exhausted;
        return res;
    }
    // Forward half: root ... meet.
    std::vector<MoveInstance> head;
    for (std::string k = meet; !fwd.at(k).parent.empty(); k = fwd.at(k).parent) head.push_back(fwd.at(k).move);
    std::reverse(head.begin(), head.end());
    // Backward half: meet ... b, each edge inverted.
    std::vector<MoveInstance> tail;
    for (std::string k = meet; !bwd.at(k).parent.empty(); k = bwd.at(k).parent) {
        const auto& node = bwd.at(k);
        const auto& from = fwd.count(k) ? fwd.at(k).rep : node.rep;
        tail.push_back(detail::edge_between(from, node.parent, mode));
    }
    res.path = std::move(head);
    res.path.insert(res.path.end(), tail.begin(), tail.end());
    if (canonical_key(replay(a, res.path, mode)) != kb)
        throw Error(ErrorCode::IllegalMove, "search path failed to replay");
    res.verdict = Verdict::Connected;
    return res;
}

/// Canonical codes reachable from a within the budget (depth 0 allowed).
inline std::vector<CanonicalCode> orbit(const LegendrianGaussDiagram& a_in, MoveMode mode, const SearchBudget& budget) {
    detail::check_budget(budget, true);
    const auto a = detail::as_mode_input(a_in, mode);
    const std::size_t cap = budget.max_word_length ? budget.max_word_length : a.size() + config::kDefaultLengthSlack;
    std::unordered_map<std::string, LegendrianGaussDiagram> seen;
    const auto ka = canonical_key(a);
    seen.emplace(ka, canonical_form(a));
    std::vector<std::string> front{ka};
    for (int depth = 0; depth < budget.max_depth && !front.empty() && seen.size() < budget.max_nodes; ++depth) {
        std::vector<std::vector<detail::Expansion>> kids(front.size());
        detail::parallel_for(front.size(), [&](std::size_t i) { kids[i] = detail::expand(seen.at(front[i]), mode, cap); });
        std::vector<std::string> next;
        for (auto& ks : kids) {
            for (auto& e : ks) {
                if (seen.size() >= budget.max_nodes) break;
                if (seen.emplace(e.key, std::move(e.rep)).second) next.push_back(e.key);
            }
        }
        front = std::move(next);
    }
    std::vector<CanonicalCode> out;
    out.reserve(seen.size());
    for (const auto& [k, rep] : seen) out.push_back({to_string(rep)});
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace legknot
