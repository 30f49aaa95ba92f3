#include <gtest/gtest.h>

#include <random>
#include <unordered_map>
#include <unordered_set>

#include "legknot/enumerate.hpp"
#include "legknot/gauss_code.hpp"
#include "legknot/search.hpp"

using namespace legknot;

namespace {

// Plain breadth-first distance over canonical codes, or -1 beyond depth.
int oracle_distance(const LegendrianGaussDiagram& a, const LegendrianGaussDiagram& b, MoveMode mode, int depth,
                    std::size_t cap) {
    const auto target = canonical_code(b).text;
    std::unordered_set<std::string> seen{canonical_code(a).text};
    std::vector<LegendrianGaussDiagram> front{a};
    if (*seen.begin() == target) return 0;
    for (int d = 1; d <= depth; ++d) {
        std::vector<LegendrianGaussDiagram> next;
        for (const auto& x : front) {
            for (const auto& m : enumerate_moves(x, mode)) {
                const auto y = apply_move_unchecked(x, m);
                if (y.size() > cap) continue;
                const auto c = canonical_code(y).text;
                if (!seen.insert(c).second) continue;
                if (c == target) return d;
                next.push_back(y);
            }
        }
        front = std::move(next);
    }
    return -1;
}

std::vector<LegendrianGaussDiagram> corpus(int len) {
    EnumerationLimits lim;
    lim.max_length = len;
    lim.max_arrows = 3;
    lim.max_cusps = 4;
    return all_diagrams(lim);
}

} // namespace

TEST(Search, StabilizationUnderHomotopy) {
    for (const auto& d : corpus(4)) {
        const auto s = stabilize(d, 1, 1, 0);
        const auto r = search_equivalence(d, s, MoveMode::LegendrianHomotopy);
        ASSERT_EQ(r.verdict, Verdict::Connected) << to_string(d);
        EXPECT_LE(r.path.size(), 16u);
        EXPECT_EQ(canonical_code(replay(d, r.path, MoveMode::LegendrianHomotopy)), canonical_code(s));
    }
}

TEST(Search, MaslovDistinguishes) {
    const auto r = search_equivalence(parse_gauss_code("@L"), parse_gauss_code("@L C+ C+"), MoveMode::LegendrianHomotopy);
    EXPECT_EQ(r.verdict, Verdict::Distinguished);
    EXPECT_EQ(r.distinguished_by, "maslov");
    EXPECT_TRUE(r.path.empty());
}

TEST(Search, RhoDistinguishesFlat) {
    // one classical kink changes rho
    const auto r = search_equivalence(parse_gauss_code("@L"), parse_gauss_code("@L A1h A1t"), MoveMode::FlatFramedHomotopy);
    const auto ra = rho(planar_flat_of_string(FlatVirtualString{}));
    const auto rb = rho(planar_flat_of_string(FlatVirtualString(parse_gauss_code("@L A1h A1t").sites())));
    if (ra != rb) {
        EXPECT_EQ(r.verdict, Verdict::Distinguished);
        EXPECT_EQ(r.distinguished_by, "rho");
    } else {
        EXPECT_NE(r.verdict, Verdict::Distinguished);
    }
}

TEST(Search, IsotopyPathsAreSafe) {
    for (const auto& d : corpus(4)) {
        for (const auto& m : enumerate_moves(d, MoveMode::LegendrianIsotopy)) {
            const auto e = apply_move(d, m, MoveMode::LegendrianIsotopy);
            const auto r = search_equivalence(e, d, MoveMode::LegendrianIsotopy);
            ASSERT_EQ(r.verdict, Verdict::Connected);
            EXPECT_LE(r.path.size(), 1u);
            for (const auto& x : r.path) EXPECT_FALSE(x.kind.dangerous);
        }
    }
}

TEST(Search, Deterministic) {
    const auto a = parse_gauss_code("@L A1h A2t A1t A2h");
    const auto b = stabilize(a, 1, 1, 2);
    const auto r1 = search_equivalence(a, b, MoveMode::LegendrianHomotopy);
    const auto r2 = search_equivalence(a, b, MoveMode::LegendrianHomotopy);
    EXPECT_EQ(r1.verdict, r2.verdict);
    EXPECT_EQ(r1.path, r2.path);
    EXPECT_EQ(r1.nodes_visited, r2.nodes_visited);
}

TEST(Search, AgreesWithUnidirectionalOracle) {
    std::mt19937_64 rng(41);
    const auto all = corpus(4);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    int connected = 0;
    for (int i = 0; i < 150; ++i) {
        const auto& a = all[pick(rng)];
        const auto& b = all[pick(rng)];
        for (auto mode : {MoveMode::LegendrianIsotopy, MoveMode::LegendrianHomotopy}) {
            SearchBudget budget;
            budget.max_depth = 3;
            budget.max_word_length = 6;
            const auto r = search_equivalence(a, b, mode, budget);
            if (r.verdict == Verdict::Distinguished) {
                EXPECT_NE(maslov(a), maslov(b));
                continue;
            }
            const int dist = oracle_distance(a, b, mode, 3, 6);
            EXPECT_EQ(r.verdict == Verdict::Connected, dist >= 0) << to_string(a) << " | " << to_string(b);
            if (dist >= 0) {
                ++connected;
                EXPECT_LE(r.path.size(), 3u);
                EXPECT_GE(r.path.size(), static_cast<std::size_t>(dist));
            }
        }
    }
    EXPECT_GT(connected, 5);
}

TEST(Search, BudgetErrorsAndExhaustion) {
    const auto a = parse_gauss_code("@L A1h A1t");
    SearchBudget b;
    b.max_depth = 0;
    EXPECT_THROW(search_equivalence(a, a, MoveMode::LegendrianHomotopy, b), Error);
    b.max_depth = 2;
    b.max_nodes = 0;
    EXPECT_THROW(search_equivalence(a, a, MoveMode::LegendrianHomotopy, b), Error);
    b.max_nodes = 50;
    b.max_depth = 16;
    const auto r = search_equivalence(a, stabilize(a, 2, 2, 0), MoveMode::LegendrianHomotopy, b);
    EXPECT_EQ(r.verdict, Verdict::Exhausted);
    EXPECT_TRUE(r.stats.node_limit_hit);
    EXPECT_THROW(search_equivalence(parse_gauss_code("@L S1 S1"), a, MoveMode::LegendrianHomotopy), Error);
}

TEST(Orbit, ContainsNeighbours) {
    const auto a = parse_gauss_code("@L C+ C-");
    SearchBudget b;
    b.max_depth = 1;
    const auto o = orbit(a, MoveMode::LegendrianIsotopy, b);
    EXPECT_TRUE(std::find(o.begin(), o.end(), canonical_code(a)) != o.end());
    for (const auto& m : enumerate_moves(a, MoveMode::LegendrianIsotopy, {a.size() + config::kDefaultLengthSlack})) {
        const auto c = canonical_code(apply_move_unchecked(a, m));
        EXPECT_TRUE(std::find(o.begin(), o.end(), c) != o.end()) << c.text;
    }
    b.max_depth = 0;
    EXPECT_EQ(orbit(a, MoveMode::LegendrianIsotopy, b).size(), 1u);
}

TEST(Search, ThreadCountDoesNotChangeResults) {
    const auto a = parse_gauss_code("@L A1h C+ A1t C-");
    const auto b = stabilize(a, 1, 1, 1);
    setenv("LEGKNOT_THREADS", "1", 1);
    const auto r1 = search_equivalence(a, b, MoveMode::LegendrianHomotopy);
    setenv("LEGKNOT_THREADS", "4", 1);
    const auto r4 = search_equivalence(a, b, MoveMode::LegendrianHomotopy);
    unsetenv("LEGKNOT_THREADS");
    EXPECT_EQ(r1.path, r4.path);
    EXPECT_EQ(r1.nodes_visited, r4.nodes_visited);
}
