#include <gtest/gtest.h>

#include "legknot/enumerate.hpp"
#include "legknot/gauss_code.hpp"
#include "legknot/invariants.hpp"
#include "legknot/moves.hpp"
#include "legknot/selftest.hpp"

using namespace legknot;

namespace {

std::vector<LegendrianGaussDiagram> corpus(int len) {
    EnumerationLimits lim;
    lim.max_length = len;
    lim.max_arrows = 3;
    lim.max_cusps = 4;
    return all_diagrams(lim);
}

} // namespace

TEST(Moves, SelftestAgainstPlanarOracle) {
    SelftestOptions opt;
    opt.max_length = 8;
    const auto r = move_table_selftest(opt);
    EXPECT_TRUE(r.mismatches.empty()) << r.mismatches.front().diagram << " " << r.mismatches.front().detail;
    EXPECT_TRUE(r.kinds_unseen.empty());
    EXPECT_GT(r.dangerous_attempts, 0u);
    EXPECT_EQ(r.dangerous_attempts, r.dangerous_rejected);
    EXPECT_TRUE(r.ok());
}

TEST(Moves, InstanceTextRoundTrips) {
    for (const auto& d : corpus(4)) {
        for (const auto& m : enumerate_moves(d, MoveMode::LegendrianHomotopy)) {
            EXPECT_EQ(parse_move_instance(to_string(m)), m);
        }
    }
    for (const char* bad : {"", "MV9/create/v0@0", "MV1/create/v0", "MV1/bogus/v0@0", "MV1/create/vx@0", "MV1/create/v0@a"}) {
        EXPECT_THROW(parse_move_instance(bad), Error) << bad;
    }
}

TEST(Moves, EveryInstanceHasAnInverse) {
    for (auto mode : {MoveMode::LegendrianIsotopy, MoveMode::LegendrianHomotopy}) {
        for (const auto& d : corpus(4)) {
            for (const auto& m : enumerate_moves(d, mode)) {
                const auto back = inverse_move(d, m, mode);
                EXPECT_EQ(canonical_code(apply_move(apply_move(d, m, mode), back, mode)), canonical_code(d))
                    << to_string(d) << " " << to_string(m);
            }
        }
    }
}

TEST(Moves, IsotopyRejectsDangerousMoves) {
    std::size_t tried = 0;
    for (const auto& d : corpus(6)) {
        for (const auto& m : enumerate_moves(d, MoveMode::LegendrianHomotopy)) {
            if (!m.kind.dangerous) continue;
            ++tried;
            try {
                apply_move(d, m, MoveMode::LegendrianIsotopy);
                ADD_FAILURE() << to_string(m);
            } catch (const Error& e) {
                EXPECT_EQ(e.code(), ErrorCode::IllegalMove);
            }
        }
    }
    EXPECT_GT(tried, 100u);
}

TEST(Moves, IsotopyTableIsTheSafePart) {
    for (const auto& d : corpus(6)) {
        std::vector<MoveInstance> safe;
        for (const auto& m : enumerate_moves(d, MoveMode::LegendrianHomotopy)) {
            if (!m.kind.dangerous) safe.push_back(m);
        }
        EXPECT_EQ(enumerate_moves(d, MoveMode::LegendrianIsotopy), safe) << to_string(d);
    }
}

TEST(Moves, FlatModeIsCuspFree) {
    EXPECT_THROW(enumerate_moves(parse_gauss_code("@L C+ C-"), MoveMode::FlatFramedHomotopy), Error);
    EXPECT_THROW(enumerate_moves(parse_gauss_code("@R A1h A1t"), MoveMode::FlatFramedHomotopy), Error);
    const auto s = FlatVirtualString(parse_gauss_code("@L A1h A2h A1t A2t").sites());
    for (const auto& m : enumerate_moves(s)) {
        const auto r = apply_move(s, m);
        EXPECT_EQ(r.as_diagram().cusp_count(), 0);
    }
}

TEST(Moves, ApplyRejectsForeignInstances) {
    const auto d = parse_gauss_code("@L A1h A1t");
    EXPECT_THROW(apply_move(d, parse_move_instance("MV3/slide/v0@0,1,2")), Error);
    EXPECT_THROW(apply_move(d, parse_move_instance("MV1/delete/v0@0")), Error);
}

TEST(Stabilize, AddsCuspPairsAndKeepsMaslov) {
    const auto d = parse_gauss_code("@L A1h A2t A1t A2h C+ C-");
    for (int a = 0; a <= 3; ++a) {
        for (int b = 0; b <= 3; ++b) {
            const auto s = stabilize(d, a, b, 2);
            EXPECT_EQ(s.positive_cusps(), d.positive_cusps() + 2 * a);
            EXPECT_EQ(s.negative_cusps(), d.negative_cusps() + 2 * b);
            EXPECT_EQ(maslov(s), maslov(d) + 2 * (a - b));
            EXPECT_EQ(s.arrow_count(), d.arrow_count());
        }
    }
    EXPECT_EQ(stabilize(parse_gauss_code("@L"), 1, 1, 0), parse_gauss_code("@L C+ C+ C- C-"));
    EXPECT_THROW(stabilize(d, -1, 0, 0), Error);
}

TEST(Stabilize, SingularMarksStayTogether) {
    const auto d = parse_gauss_code("@L A1h A1t");
    const auto s = insert_singular(insert_singular(d, 1), 1);
    EXPECT_EQ(s.mark_count(), 2);
    EXPECT_EQ(s.size(), 6u);
    EXPECT_NO_THROW(validate(s));
}
