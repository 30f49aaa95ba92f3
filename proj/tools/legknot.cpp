#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "legknot/atlas.hpp"
#include "legknot/enumerate.hpp"
#include "legknot/gauss_code.hpp"
#include "legknot/invariants.hpp"
#include "legknot/io.hpp"
#include "legknot/moves.hpp"
#include "legknot/realization.hpp"
#include "legknot/search.hpp"
#include "legknot/selftest.hpp"
#include "legknot/surface.hpp"
#include "legknot/vassiliev.hpp"

using namespace legknot;
using nlohmann::json;

namespace {

struct Failed {};  // verification did not hold; exit 1 without a diagnostic

bool g_json = false;

LegendrianGaussDiagram read_diagram(const std::string& src) {
    std::string text = src;
    if (src.empty() || src[0] != '@') text = read_text(src);
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' ')) text.pop_back();
    return parse_gauss_code(text);
}

MoveMode mode_of(const std::string& s) {
    auto m = parse_mode(s);
    if (!m) throw CLI::ValidationError("--mode", "unknown mode " + s);
    return *m;
}

void emit(const json& j, const std::string& text) {
    if (g_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

json sum_json(const FormalSum& s) {
    json out = json::array();
    for (const auto& [c, k] : s.terms()) out.push_back({{"code", c.text}, {"coefficient", k.str()}});
    return out;
}

json path_json(const std::vector<MoveInstance>& path) {
    json out = json::array();
    for (const auto& m : path) out.push_back(to_string(m));
    return out;
}

std::string path_text(const std::vector<MoveInstance>& path) {
    std::string out;
    for (const auto& m : path) out += "  " + to_string(m) + "\n";
    return out;
}

ResolutionConvention convention(bool flip) {
    return flip ? ResolutionConvention::PositiveStabilized : ResolutionConvention::PositivePlain;
}

SearchBudget budget_of(int depth, std::size_t nodes, std::size_t max_length) {
    SearchBudget b;
    b.max_depth = depth;
    b.max_nodes = nodes;
    b.max_word_length = max_length;
    return b;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Virtual Legendrian knot diagrams: canonical codes, moves, invariants and finite type checks"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "text";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

    std::string d1, d2, mode_name = "homotopy", move_text, file;
    int pos_n = 0, neg_n = 0, at = 0, z = 1, p = 1, depth = config::kDefaultDepth, length = 8, order = 1;
    long upto = 10;
    std::size_t nodes = config::kDefaultNodes, max_length = 0, samples = 100;
    std::uint64_t seed = 1;
    bool flip_sign = false, search_hyp = false, progress = false;
    std::vector<std::string> values;

    auto* canon = app.add_subcommand("canon", "Print the canonical code");
    canon->add_option("diagram", d1, "Gauss code, file, or - for stdin")->required();

    auto* inv = app.add_subcommand("invariants", "Maslov number, cusp counts, rho and genus");
    inv->add_option("diagram", d1)->required();

    auto* moves = app.add_subcommand("moves", "List applicable move instances");
    moves->add_option("diagram", d1)->required();
    moves->add_option("--mode", mode_name, "isotopy, homotopy or flat");

    auto* apply = app.add_subcommand("apply", "Apply one move instance");
    apply->add_option("diagram", d1)->required();
    apply->add_option("move", move_text, "e.g. MV1/create/v0@0")->required();
    apply->add_option("--mode", mode_name);

    auto* stab = app.add_subcommand("stabilize", "Insert stabilizations at a gap");
    stab->add_option("diagram", d1)->required();
    stab->add_option("--pos", pos_n)->required();
    stab->add_option("--neg", neg_n)->required();
    stab->add_option("--at", at, "Gap index");

    auto* sing = app.add_subcommand("singular", "Insert z singular marks at a gap");
    sing->add_option("diagram", d1)->required();
    sing->add_option("--z", z)->required();
    sing->add_option("--at", at);

    auto* res = app.add_subcommand("resolve", "Signed sum of all resolutions");
    res->add_option("diagram", d1)->required();
    res->add_flag("--flip-sign", flip_sign, "Give the stabilizing resolution sign +1");

    auto* rp = app.add_subcommand("realize-planar", "Planar front realization");
    rp->add_option("diagram", d1)->required();
    rp->add_option("--seed", seed);

    auto* rs = app.add_subcommand("realize-surface", "Disk-band surface of the underlying string");
    rs->add_option("diagram", d1)->required();

    auto* rh = app.add_subcommand("rho", "Rotation invariant of a diagram or planar file");
    rh->add_option("diagram", d1);
    rh->add_option("--planar", file, "Planar front file");

    auto* srch = app.add_subcommand("search", "Look for a move sequence between two diagrams");
    srch->add_option("a", d1)->required();
    srch->add_option("b", d2)->required();
    srch->add_option("--mode", mode_name);
    srch->add_option("--depth", depth);
    srch->add_option("--nodes", nodes);
    srch->add_option("--max-length", max_length, "Word length cap (0 = default slack)");

    auto* atlas = app.add_subcommand("atlas", "Build or query an atlas");
    atlas->require_subcommand(1);
    auto* ab = atlas->add_subcommand("build", "Enumerate diagrams and merge them into orbits");
    ab->add_option("--length", length, "Maximum record length");
    ab->add_option("--mode", mode_name);
    ab->add_option("--depth", depth);
    ab->add_option("--nodes", nodes);
    ab->add_option("--cap", max_length, "Exploration word length cap (0 = --length)");
    ab->add_option("-o,--output", file, "Output file (default stdout)");
    ab->add_flag("--progress", progress);
    auto* aq = atlas->add_subcommand("query", "Look up a diagram in an atlas file");
    aq->add_option("file", file)->required();
    aq->add_option("diagram", d1)->required();
    aq->add_option("--witness", d2, "Print a move path to this diagram when in the same orbit");

    auto* vl = app.add_subcommand("verify-lemma", "Check the binomial vanishing lemma");
    vl->add_option("--p", p)->required();
    vl->add_option("--z", z)->required();

    auto* ve = app.add_subcommand("verify-expansion", "Check resolve(K^z) against the binomial expansion");
    ve->add_option("diagram", d1, "Single diagram (default: random corpus)");
    ve->add_option("--z", z)->required();
    ve->add_option("--samples", samples);
    ve->add_option("--seed", seed);
    ve->add_flag("--flip-sign", flip_sign);

    auto* vc = app.add_subcommand("verify-chain", "Check the finite type chain for K and L");
    vc->add_option("dK", d1)->required();
    vc->add_option("dL", d2, "Defaults to dK");
    vc->add_option("--p", p)->required();
    vc->add_option("--z", z)->required();
    vc->add_flag("--search", search_hyp, "Search for an isotopy when the stabilized codes differ");
    vc->add_option("--depth", depth);
    vc->add_option("--nodes", nodes);
    vc->add_flag("--flip-sign", flip_sign);

    auto* pe = app.add_subcommand("psi-extend", "Continue a table of values by the order recursion");
    pe->add_option("--n", order)->required();
    pe->add_option("--upto", upto)->required();
    pe->add_option("--values", values, "Base values for j = 0, 1, ... (default j^n)")->delimiter(',');

    auto* sm = app.add_subcommand("selftest-moves", "Compare the move table with the planar oracle");
    sm->add_option("--length", length);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    g_json = format == "json";

    try {
        if (*canon) {
            const auto c = canonical_code(read_diagram(d1));
            emit({{"code", c.text}}, c.text + "\n");
        } else if (*inv) {
            const auto d = read_diagram(d1);
            const int m = maslov(d);
            json j{{"maslov", m},
                   {"positive_cusps", d.positive_cusps()},
                   {"negative_cusps", d.negative_cusps()},
                   {"arrows", d.arrow_count()},
                   {"marks", d.mark_count()}};
            std::ostringstream t;
            t << "maslov " << m << "\npositive_cusps " << d.positive_cusps() << "\nnegative_cusps "
              << d.negative_cusps() << "\narrows " << d.arrow_count() << "\n";
            if (d.mark_count() == 0) {
                const auto iv = invariant_vector(d);
                j["string"] = iv.string_code.text;
                j["rho"] = iv.rho;
                j["genus"] = iv.genus;
                t << "string " << iv.string_code.text << "\nrho " << iv.rho << "\ngenus " << iv.genus << "\n";
            } else {
                t << "marks " << d.mark_count() << "\n";
            }
            emit(j, t.str());
        } else if (*moves) {
            const auto d = read_diagram(d1);
            const auto list = enumerate_moves(d, mode_of(mode_name));
            emit({{"moves", path_json(list)}}, [&] {
                std::string s;
                for (const auto& m : list) s += to_string(m) + "\n";
                return s;
            }());
        } else if (*apply) {
            const auto d = read_diagram(d1);
            const auto r = apply_move(d, parse_move_instance(move_text), mode_of(mode_name));
            const auto c = canonical_code(r);
            emit({{"code", c.text}, {"raw", emit_raw(r)}}, c.text + "\n");
        } else if (*stab) {
            const auto c = canonical_code(stabilize(read_diagram(d1), pos_n, neg_n, at));
            emit({{"code", c.text}}, c.text + "\n");
        } else if (*sing) {
            const auto r = singular_power(read_diagram(d1), z, at);
            emit({{"code", canonical_code(r).text}}, canonical_code(r).text + "\n");
        } else if (*res) {
            const auto s = resolve(read_diagram(d1), convention(flip_sign));
            emit({{"terms", sum_json(s)}}, to_text(s));
        } else if (*rp) {
            LayoutOptions lo;
            lo.seed = seed;
            const auto pf = realize_planar(read_diagram(d1), lo);
            const auto text = emit_planar(pf);
            emit({{"planar", text}, {"roundtrip", canonical_code(gauss_of_planar(pf)).text}}, text);
        } else if (*rs) {
            const auto d = read_diagram(d1);
            const auto surf = realize_surface(underlying_string(d));
            json ends = json::array();
            std::string order_text;
            for (const auto& e : surf.band_end_order) {
                ends.push_back({{"band", e.band}, {"end", e.head ? "h" : "t"}});
                order_text += " " + std::to_string(e.band) + (e.head ? "h" : "t");
            }
            const int g = surface_genus(surf), b = boundary_components(surf);
            std::ostringstream t;
            t << "bands " << surf.band_count() << "\nband_ends" << order_text << "\nboundary_components " << b
              << "\ngenus " << g << "\n";
            emit({{"bands", surf.band_count()}, {"band_ends", ends}, {"boundary_components", b}, {"genus", g}},
                 t.str());
        } else if (*rh) {
            int r = 0;
            if (!file.empty()) {
                r = rho(parse_planar(read_text(file)).flat());
            } else if (!d1.empty()) {
                r = rho(planar_flat_of_string(underlying_string(read_diagram(d1))));
            } else {
                throw CLI::RequiredError("diagram or --planar");
            }
            emit({{"rho", r}}, std::to_string(r) + "\n");
        } else if (*srch) {
            const auto mode = mode_of(mode_name);
            const auto r = search_equivalence(read_diagram(d1), read_diagram(d2), mode,
                                              budget_of(depth, nodes, max_length));
            std::cerr << "nodes " << r.nodes_visited << " depth " << r.stats.depth_reached << "\n";
            json j{{"verdict", to_string(r.verdict)}, {"path", path_json(r.path)}, {"nodes", r.nodes_visited}};
            std::string t = std::string(to_string(r.verdict)) + "\n";
            if (r.verdict == Verdict::Connected) t += path_text(r.path);
            if (r.verdict == Verdict::Distinguished) {
                j["distinguished_by"] = r.distinguished_by;
                t += "by " + r.distinguished_by + "\n";
            }
            emit(j, t);
        } else if (*ab) {
            AtlasOptions ao;
            ao.progress = progress;
            const auto a = atlas_build(length, mode_of(mode_name), budget_of(depth, nodes, max_length), ao);
            const auto text = atlas_to_text(a);
            if (file.empty() || file == "-") {
                std::cout << text;
            } else {
                std::ofstream out(file);
                if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + file);
                out << text;
            }
            std::cerr << "records " << a.records.size() << " complete " << (a.complete ? "yes" : "no") << "\n";
        } else if (*aq) {
            const auto a = atlas_from_text(read_text(file));
            const auto code = canonical_code(read_diagram(d1));
            const int idx = a.find(code);
            if (idx < 0) throw Error(ErrorCode::InvalidArgument, "diagram not in the atlas: " + code.text);
            const auto& r = a.records[static_cast<std::size_t>(idx)];
            const auto& rep = a.records[static_cast<std::size_t>(r.orbit_id)].code.text;
            json j{{"code", r.code.text},       {"orbit_id", r.orbit_id},          {"orbit_code", rep},
                   {"maslov", r.invariants.maslov}, {"rho", r.invariants.rho}, {"genus", r.invariants.genus}};
            std::ostringstream t;
            t << "code " << r.code.text << "\norbit_id " << r.orbit_id << "\norbit_code " << rep << "\nmaslov "
              << r.invariants.maslov << "\nrho " << r.invariants.rho << "\ngenus " << r.invariants.genus << "\n";
            if (!d2.empty()) {
                const auto other = canonical_code(read_diagram(d2));
                const int jdx = a.find(other);
                if (jdx < 0) throw Error(ErrorCode::InvalidArgument, "diagram not in the atlas: " + other.text);
                const auto w = atlas_witness(a, idx, jdx);
                if (w) {
                    j["witness"] = path_json(*w);
                    t << "witness\n" << path_text(*w);
                } else {
                    j["witness"] = nullptr;
                    t << "witness none\n";
                }
            }
            emit(j, t.str());
        } else if (*vl) {
            if (!combo_lemma_check(p, z)) {
                emit({{"ok", false}}, "failed\n");
                throw Failed{};
            }
            emit({{"ok", true}}, "ok\n");
        } else if (*ve) {
            if (z < 0) throw Error(ErrorCode::InvalidArgument, "negative z", z);
            std::vector<LegendrianGaussDiagram> corpus;
            if (!d1.empty()) {
                corpus.push_back(read_diagram(d1));
            } else {
                std::mt19937_64 rng(seed);
                for (std::size_t i = 0; i < samples; ++i) corpus.push_back(random_diagram(rng, 5, 4));
            }
            std::size_t checked = 0;
            json bad = json::array();
            for (const auto& d : corpus) {
                for (int zz = 0; zz <= z; ++zz) {
                    ++checked;
                    if (!expansion_identity_check(d, zz, 0, convention(flip_sign)))
                        bad.push_back({{"diagram", emit_raw(d)}, {"z", zz}});
                }
            }
            std::ostringstream t;
            t << (bad.empty() ? "ok" : "failed") << " " << checked << " checks\n";
            for (const auto& b : bad) t << "  " << b["diagram"].get<std::string>() << " z=" << b["z"] << "\n";
            emit({{"ok", bad.empty()}, {"checks", checked}, {"failures", bad}}, t.str());
            if (!bad.empty()) throw Failed{};
        } else if (*vc) {
            const auto dK = read_diagram(d1);
            const auto dL = d2.empty() ? dK : read_diagram(d2);
            ChainOptions co;
            co.search_hypothesis = search_hyp;
            co.budget = budget_of(depth, nodes, 0);
            co.convention = convention(flip_sign);
            const auto r = theorem_chain_report(dK, dL, p, z, co);
            json j{{"ok", r.ok()},
                   {"hypothesis_by_code", r.hypothesis_by_code},
                   {"hypothesis_path", path_json(r.hypothesis_path)},
                   {"expansion_matches", r.expansion_matches},
                   {"low_terms_vanish", r.low_terms_vanish},
                   {"collapses_to_l", r.collapses_to_l},
                   {"k_side", sum_json(r.k_side)},
                   {"l_side", sum_json(r.l_side)}};
            std::ostringstream t;
            t << (r.ok() ? "ok" : "failed") << "\nhypothesis "
              << (r.hypothesis_by_code ? "equal codes" : "isotopy path of length " + std::to_string(r.hypothesis_path.size()))
              << "\nexpansion_matches " << r.expansion_matches << "\nlow_terms_vanish " << r.low_terms_vanish
              << "\ncollapses_to_l " << r.collapses_to_l << "\n";
            emit(j, t.str());
            if (!r.ok()) throw Failed{};
        } else if (*pe) {
            InvariantTable tab;
            tab.order = order;
            if (order < 0) throw Error(ErrorCode::InvalidArgument, "negative order", order);
            if (values.empty()) {
                for (long j = 0; j <= order; ++j) tab.values[j] = boost::multiprecision::pow(BigInt(j), static_cast<unsigned>(order));
            } else {
                long j = 0;
                for (const auto& v : values) {
                    try {
                        tab.values[j++] = BigInt(v);
                    } catch (const std::exception&) {
                        throw Error(ErrorCode::InvalidArgument, "bad value " + v);
                    }
                }
            }
            PsiExtender ext(tab);
            json arr = json::array();
            std::string t;
            for (long j = tab.values.begin()->first; j <= upto; ++j) {
                const auto v = ext.value(j).str();
                arr.push_back({{"j", j}, {"value", v}});
                t += std::to_string(j) + " " + v + "\n";
            }
            emit({{"values", arr}}, t);
        } else if (*sm) {
            SelftestOptions so;
            so.max_length = static_cast<std::size_t>(length);
            const auto r = move_table_selftest(so);
            json mism = json::array();
            std::ostringstream t;
            t << (r.ok() ? "ok" : "failed") << "\ndiagrams " << r.diagrams << "\nfootprints " << r.footprints
              << "\ninstances " << r.instances_checked << "\ndangerous_rejected " << r.dangerous_rejected << "/"
              << r.dangerous_attempts << "\nmismatches " << r.mismatches.size() << "\n";
            for (const auto& m : r.mismatches) {
                mism.push_back({{"diagram", m.diagram}, {"move", m.move}, {"footprint", m.footprint}, {"detail", m.detail}});
                t << "  " << m.diagram << " " << m.move << " " << m.footprint << ": " << m.detail << "\n";
            }
            for (const auto& k : r.kinds_unseen) t << "  unseen " << k << "\n";
            emit({{"ok", r.ok()},
                  {"diagrams", r.diagrams},
                  {"footprints", r.footprints},
                  {"instances", r.instances_checked},
                  {"dangerous_attempts", r.dangerous_attempts},
                  {"dangerous_rejected", r.dangerous_rejected},
                  {"kinds_unseen", r.kinds_unseen},
                  {"mismatches", mism}},
                 t.str());
            if (!r.ok()) throw Failed{};
        }
    } catch (const Failed&) {
        return 1;
    } catch (const CLI::Error& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        if (g_json)
            std::cout << json{{"error", to_string(e.code())}, {"message", e.what()}, {"detail", e.detail()}}.dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
