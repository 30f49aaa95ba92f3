#include <gtest/gtest.h>

#include <set>

#include "legknot/atlas.hpp"
#include "legknot/gauss_code.hpp"
#include "legknot/io.hpp"

using namespace legknot;

namespace {

const Atlas& homotopy6() {
    static const Atlas a = [] {
        SearchBudget b;
        b.max_word_length = 8;
        return atlas_build(6, MoveMode::LegendrianHomotopy, b);
    }();
    return a;
}

const Atlas& flat8() {
    static const Atlas a = atlas_build(8, MoveMode::FlatFramedHomotopy);
    return a;
}

} // namespace

TEST(Atlas, RecordsAreTheCorpus) {
    const auto& a = homotopy6();
    EXPECT_EQ(a.records.size(), 494u);
    EXPECT_TRUE(a.complete);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        const auto& r = a.records[i];
        EXPECT_EQ(a.find(r.code), static_cast<int>(i));
        EXPECT_LE(r.orbit_id, static_cast<int>(i));
        EXPECT_EQ(a.records[static_cast<std::size_t>(r.orbit_id)].orbit_id, r.orbit_id);
        EXPECT_EQ(r.invariants, invariant_vector(parse_gauss_code(r.code.text)));
    }
    EXPECT_EQ(a.find(CanonicalCode{"@L C+ C+ C+ C+ C+ C+ C+ C+"}), -1);
}

TEST(Atlas, OrbitsRespectInvariants) {
    for (auto mode : {MoveMode::LegendrianIsotopy, MoveMode::LegendrianHomotopy}) {
        const auto a = atlas_build(6, mode);
        EXPECT_EQ(orbit_invariant_violations(a, [](const AtlasRecord& r) { return r.invariants.maslov; }), 0u);
    }
    EXPECT_EQ(orbit_invariant_violations(flat8(), [](const AtlasRecord& r) { return r.invariants.rho; }), 0u);
}

TEST(Atlas, IsotopyRefinesHomotopy) {
    const auto iso = atlas_build(6, MoveMode::LegendrianIsotopy);
    const auto& hom = homotopy6();
    ASSERT_EQ(iso.records.size(), hom.records.size());
    for (std::size_t i = 0; i < iso.records.size(); ++i) {
        const auto& ri = iso.records[i];
        EXPECT_EQ(hom.records[static_cast<std::size_t>(ri.orbit_id)].orbit_id, hom.records[i].orbit_id);
    }
}

TEST(Atlas, WitnessesReplay) {
    const auto& a = homotopy6();
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        const int o = a.records[i].orbit_id;
        const auto path = atlas_witness(a, o, static_cast<int>(i));
        ASSERT_TRUE(path.has_value()) << a.records[i].code.text;
        const auto end = replay(parse_gauss_code(a.records[static_cast<std::size_t>(o)].code.text), *path,
                                MoveMode::LegendrianHomotopy);
        EXPECT_EQ(canonical_code(end), a.records[i].code);
    }
    // different orbits have no witness
    std::set<int> orbits;
    for (const auto& r : a.records) orbits.insert(r.orbit_id);
    ASSERT_GE(orbits.size(), 2u);
    EXPECT_FALSE(atlas_witness(a, *orbits.begin(), *std::next(orbits.begin())).has_value());
}

TEST(Atlas, CuspRelocationIsConnected) {
    const auto& a = homotopy6();
    auto same_orbit = [&](const char* x, const char* y) {
        const int i = a.find(canonical_code(parse_gauss_code(x))), j = a.find(canonical_code(parse_gauss_code(y)));
        EXPECT_GE(i, 0);
        EXPECT_GE(j, 0);
        return i >= 0 && j >= 0 &&
               a.records[static_cast<std::size_t>(i)].orbit_id == a.records[static_cast<std::size_t>(j)].orbit_id;
    };
    const auto d = parse_gauss_code("@L A1h A1t");
    for (const auto& m : enumerate_moves(d, MoveMode::LegendrianHomotopy)) {
        if (m.kind.family != MoveFamily::MV1) continue;
        const auto e = emit_gauss_code(apply_move(d, m));
        EXPECT_TRUE(same_orbit("@L A1h A1t", e.c_str())) << e;
    }
    // needs words of 8 sites on the way
    EXPECT_TRUE(same_orbit("@L A1h A1t C+ C-", "@L A1h C+ C- A1t"));
}

TEST(Atlas, ClassificationProbe) {
    const auto& h = homotopy6();
    const auto rep = classification_probe(h, flat8());
    EXPECT_EQ(rep.maslov_violations, 0u);
    EXPECT_EQ(rep.unknown_string_records, 0u);
    EXPECT_EQ(rep.connected_pairs + rep.unresolved_pairs, rep.equal_invariant_pairs);
    EXPECT_GT(rep.connected_pairs, 0u);
    std::size_t listed = 0;
    for (const auto& u : rep.unresolved) {
        EXPECT_NE(u.orbit_a, u.orbit_b);
        listed += u.pairs;
    }
    EXPECT_LE(listed, rep.unresolved_pairs);
    EXPECT_THROW(classification_probe(flat8(), h), Error);
}

TEST(Atlas, NodeBudgetMarksIncomplete) {
    SearchBudget b;
    b.max_nodes = 60;
    b.max_word_length = 8;
    const auto a = atlas_build(4, MoveMode::LegendrianHomotopy, b);
    EXPECT_FALSE(a.complete);
    EXPECT_EQ(a.records.size(), 50u);
    EXPECT_LE(a.records.size() + a.extra_nodes.size(), 60u);
    b.max_nodes = 10;
    EXPECT_EQ(atlas_build(4, MoveMode::LegendrianHomotopy, b).records.size(), 50u);
}

TEST(AtlasFile, RoundTripIsByteStable) {
    const auto& a = homotopy6();
    const auto text = atlas_to_text(a);
    const auto b = atlas_from_text(text);
    EXPECT_EQ(atlas_to_text(b), text);
    ASSERT_EQ(b.records.size(), a.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        EXPECT_EQ(b.records[i].code, a.records[i].code);
        EXPECT_EQ(b.records[i].invariants, a.records[i].invariants);
        EXPECT_EQ(b.records[i].orbit_id, a.records[i].orbit_id);
    }
    EXPECT_EQ(b.mode, a.mode);
    EXPECT_EQ(b.budget.max_depth, a.budget.max_depth);
    const auto w = atlas_witness(b, 0, static_cast<int>(b.records.size()) - 1);
    EXPECT_EQ(w.has_value(), atlas_witness(a, 0, static_cast<int>(a.records.size()) - 1).has_value());
    const auto j = nlohmann::json::parse(text);
    EXPECT_EQ(j["format_version"], 1);
    EXPECT_EQ(j["mode"], "homotopy");
    for (const char* key : {"code", "maslov", "arrows", "cusps", "genus", "rho", "orbit_id"})
        EXPECT_TRUE(j["records"][0].contains(key)) << key;
}

TEST(AtlasFile, RejectsBadInput) {
    const auto good = atlas_to_json(atlas_build(2, MoveMode::LegendrianHomotopy));
    auto expect_error = [](const nlohmann::json& j) { EXPECT_THROW(atlas_from_json(j), Error) << j.dump(); };
    auto j = good;
    j["format_version"] = 2;
    expect_error(j);
    j = good;
    j["mode"] = "sideways";
    expect_error(j);
    j = good;
    for (auto& r : j["records"]) {
        const auto d = parse_gauss_code(r["code"].get<std::string>());
        const auto raw = emit_raw(rotated(d, 1));
        if (raw == emit_gauss_code(d)) continue;
        r["code"] = raw;
        break;
    }
    expect_error(j);
    j = good;
    std::swap(j["records"][0], j["records"][1]);
    expect_error(j);
    j = good;
    j["records"][1]["cusps"] = 1;
    expect_error(j);
    j = good;
    j["records"][0].erase("maslov");
    expect_error(j);
    EXPECT_THROW(atlas_from_text("{ not json"), Error);
    EXPECT_THROW(atlas_from_text("[]"), Error);
}
