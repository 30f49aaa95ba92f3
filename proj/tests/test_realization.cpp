#include <gtest/gtest.h>

#include "legknot/enumerate.hpp"
#include "legknot/gauss_code.hpp"
#include "legknot/invariants.hpp"
#include "legknot/io.hpp"
#include "legknot/planar.hpp"
#include "legknot/realization.hpp"

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

TEST(Realization, GaussOfPlanarInvertsRealize) {
    for (const auto& d : corpus(8)) {
        const auto p = realize_planar(d);
        EXPECT_EQ(gauss_of_planar(p), d) << to_string(d);
    }
}

TEST(Realization, ShuffledLayoutsAgree) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const auto d = random_diagram(rng, 4, 4);
        LayoutOptions opt;
        opt.seed = static_cast<std::uint64_t>(i) + 1;
        opt.shuffle = true;
        EXPECT_EQ(canonical_code(gauss_of_planar(realize_planar(d, opt))), canonical_code(d)) << to_string(d);
    }
}

TEST(Realization, FlatStringRoundTrip) {
    EnumerationLimits lim;
    lim.max_length = 10;
    lim.max_arrows = 5;
    lim.max_cusps = 0;
    lim.cusp_free_base_l_only = true;
    const auto all = all_diagrams(lim);
    EXPECT_EQ(all.size(), 3274u);
    for (const auto& d : all) {
        const FlatVirtualString s(d.sites());
        EXPECT_EQ(string_of_planar(planar_flat_of_string(s)), s) << to_string(d);
    }
}

TEST(Realization, CrossingCountsMatchTheWord) {
    const auto d = parse_gauss_code("@L A1h A2h A1t C+ A2t C-");
    const auto p = realize_planar(d);
    const auto [real, virt] = crossing_counts(p.flat());
    EXPECT_EQ(real, 2);
    EXPECT_EQ(virt + real, static_cast<int>(analyze_polyline(p.strand).size()));
}

TEST(Realization, CuspTagsMatchGeometry) {
    const auto d = parse_gauss_code("@R C+ A1h C+ A1t C- C-");
    auto p = realize_planar(d);
    const auto tags = p.cusp_tags;
    assign_cusp_signs(p);
    EXPECT_EQ(p.cusp_tags, tags);
}

TEST(PlanarFile, RoundTrip) {
    for (const auto& d : corpus(6)) {
        const auto p = realize_planar(d);
        const auto text = emit_planar(p);
        const auto q = parse_planar(text);
        EXPECT_EQ(emit_planar(q), text);
        EXPECT_EQ(gauss_of_planar(q), d);
    }
}

TEST(PlanarFile, RationalAndDecimalCoordinates) {
    const auto p = parse_planar(
        "# a square\n"
        "vertices: (0, 0) (1/2, 0) (0.5, 1/2) (0, 0.5)\n"
        "coorientation_seed: R\n");
    ASSERT_EQ(p.strand.size(), 4u);
    EXPECT_EQ(p.strand[1], (Point{1, 0}));
    EXPECT_EQ(p.strand[2], (Point{1, 1}));
    EXPECT_EQ(p.coorientation_seed, Coorientation::R);
    EXPECT_EQ(rotation_number(p.flat()), 1);
    const auto q = parse_planar("vertices: (0,0) (-3/4,0) (-0.75,-1.25)");
    EXPECT_EQ(q.strand[2], (Point{-3, -5}));
}

TEST(PlanarFile, ErrorsNameLineAndColumn) {
    auto line_of = [](const std::string& t) -> long {
        try {
            parse_planar(t);
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::SyntaxError) << e.what();
            return e.detail();
        }
        ADD_FAILURE() << t;
        return -1;
    };
    EXPECT_EQ(line_of("vertices: (0 0) (1 0)\ncusps: (0 *)\n"), 2);
    EXPECT_EQ(line_of("vertices: (0 0) (1/0 0)"), 1);
    EXPECT_EQ(line_of("\n\nbogus: (1 2)"), 3);
    EXPECT_EQ(line_of("(0 0)"), 1);
    EXPECT_EQ(line_of("vertices: (0 0 (1 0)"), 1);
    EXPECT_EQ(line_of("vertices: (1.2.3 0)"), 1);
    EXPECT_EQ(line_of("cusps: (0 +)"), 1);
    EXPECT_EQ(line_of("vertices: (0 0)\ncoorientation_seed: Q"), 2);
    try {
        parse_planar("vertices:\n  (0 0) (1 x)");
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("line 2, column"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_planar("vertices: (0 0) (1 0) (0 1)\ncusps: (5 +)"), Error);
    EXPECT_THROW(parse_planar("vertices: (0 0) (300000000 0) (0 1)"), Error);
}

TEST(PlanarFile, NonGenericInputIsRejected) {
    // two segments overlap along a line
    PlanarFrontDiagram p;
    p.strand = {{0, 0}, {4, 0}, {2, 0}, {2, 3}};
    EXPECT_THROW(gauss_of_planar(p), Error);
    // a segment passes through a vertex
    p.strand = {{0, 0}, {4, 0}, {4, 4}, {2, 0}, {2, -4}};
    EXPECT_THROW(gauss_of_planar(p), Error);
}
