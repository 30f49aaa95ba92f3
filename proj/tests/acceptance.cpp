// Acceptance checks, one line per criterion. Arguments select criteria by
// number; no arguments runs all nine.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "legknot/atlas.hpp"
#include "legknot/enumerate.hpp"
#include "legknot/invariants.hpp"
#include "legknot/moves.hpp"
#include "legknot/planar.hpp"
#include "legknot/realization.hpp"
#include "legknot/search.hpp"
#include "legknot/selftest.hpp"
#include "legknot/surface.hpp"
#include "legknot/vassiliev.hpp"

using namespace legknot;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

EnumerationLimits atlas_limits(std::size_t len) {
    EnumerationLimits lim;
    lim.max_length = len;
    lim.max_arrows = 3;
    lim.max_cusps = 4;
    return lim;
}

EnumerationLimits flat_limits(std::size_t len) {
    EnumerationLimits lim;
    lim.max_length = len;
    lim.max_arrows = static_cast<int>(len / 2);
    lim.max_cusps = 0;
    lim.cusp_free_base_l_only = true;
    return lim;
}

constexpr int kAtlasLength = 10;

// 1 ------------------------------------------------------------------------
Outcome lemma() {
    const auto t0 = Clock::now();
    std::size_t checked = 0, nonzero = 0;
    for (long p = 1; p <= 8; ++p) {
        for (long z = 1; z <= 6; ++z) {
            for (long i = 0; i < p; ++i) {
                ++checked;
                if (combo_lemma_sum(p, z, i) != 0) ++nonzero;
            }
            if (!combo_lemma_check(p, z)) ++nonzero;
        }
    }
    const double t = since(t0);
    std::ostringstream s;
    s << checked << " sums, " << nonzero << " nonzero, " << t << " s";
    return {nonzero == 0 && t < 5.0, s.str()};
}

// 2 ------------------------------------------------------------------------
std::map<std::string, BigInt> naive_resolve(const LegendrianGaussDiagram& d) {
    std::vector<int> marks;
    for (const Site& s : d.sites())
        if (s.is_mark() && std::find(marks.begin(), marks.end(), s.id) == marks.end()) marks.push_back(s.id);
    std::map<std::string, BigInt> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << marks.size()); ++mask) {
        std::vector<Site> w;
        std::set<int> opened;
        int stabilized = 0;
        for (const Site& s : d.sites()) {
            if (!s.is_mark()) {
                w.push_back(s);
                continue;
            }
            const auto k = static_cast<std::size_t>(std::find(marks.begin(), marks.end(), s.id) - marks.begin());
            if (((mask >> k) & 1) && opened.insert(s.id).second) {
                ++stabilized;
                for (auto sg : {CuspSign::Positive, CuspSign::Positive, CuspSign::Negative, CuspSign::Negative})
                    w.push_back(Site::cusp(sg));
            }
        }
        out[canonical_code(LegendrianGaussDiagram(w, d.base())).text] += sign_power(stabilized);
    }
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

Outcome expansion() {
    std::mt19937_64 rng(2024);
    const int samples = 200;
    std::size_t checks = 0, bad = 0, oracle_bad = 0;
    for (int i = 0; i < samples; ++i) {
        const auto d = random_diagram(rng, 5, 4);
        std::uniform_int_distribution<std::size_t> gap(0, d.gap_count() - 1);
        const int pos = static_cast<int>(gap(rng));
        for (int z = 0; z <= 6; ++z) {
            ++checks;
            const auto lhs = resolve(singular_power(d, z, pos));
            const auto rhs = binomial_expansion(d, z, pos);
            if (!(lhs == rhs)) ++bad;
            std::map<std::string, BigInt> m;
            for (const auto& [c, k] : rhs.terms()) m[c.text] = k;
            if (naive_resolve(singular_power(d, z, pos)) != m) ++oracle_bad;
        }
    }
    std::ostringstream s;
    s << samples << " diagrams x z=0..6: " << checks << " identities, " << bad << " mismatches, " << oracle_bad
      << " disagreements with naive resolution";
    return {bad == 0 && oracle_bad == 0, s.str()};
}

// 3 ------------------------------------------------------------------------
Outcome move_table() {
    SelftestOptions opt;
    opt.max_length = 8;
    const auto r = move_table_selftest(opt);
    std::ostringstream s;
    s << r.diagrams << " diagrams, " << r.footprints << " footprints, " << r.instances_checked << " instances, "
      << r.mismatches.size() << " mismatches, " << r.kinds_unseen.size() << " kinds unseen, dangerous rejected "
      << r.dangerous_rejected << "/" << r.dangerous_attempts;
    for (const auto& m : r.mismatches) std::cerr << "  mismatch " << m.diagram << " " << m.move << " " << m.detail << "\n";
    return {r.ok() && r.dangerous_attempts > 0, s.str()};
}

// 4 ------------------------------------------------------------------------
int flat_rho_of(const LegendrianGaussDiagram& d) { return rho(planar_flat_of_string(FlatVirtualString(d.sites()))); }

Outcome invariance() {
    std::size_t instances = 0, maslov_bad = 0, dangerous = 0;
    for (const auto& d : all_diagrams(atlas_limits(kAtlasLength))) {
        const int m = maslov(d);
        for (const auto& mv : enumerate_moves(d, MoveMode::LegendrianHomotopy)) {
            ++instances;
            dangerous += mv.kind.dangerous;
            if (maslov(apply_move_unchecked(d, mv)) != m) ++maslov_bad;
        }
    }
    std::size_t flat_instances = 0, rho_bad = 0, kinks = 0, kink_bad = 0;
    for (const auto& d : all_diagrams(flat_limits(kAtlasLength))) {
        const int r = flat_rho_of(d);
        for (const auto& mv : enumerate_moves(d, MoveMode::FlatFramedHomotopy)) {
            ++flat_instances;
            if (flat_rho_of(apply_move_unchecked(d, mv)) != r) ++rho_bad;
        }
        const auto p = planar_flat_of_string(FlatVirtualString(d.sites()));
        for (auto side : {KinkSide::Left, KinkSide::Right}) {
            ++kinks;
            if (rho(add_kink(p, side)) != 1 - r) ++kink_bad;
        }
    }
    std::ostringstream s;
    s << "maslov: " << instances << " move instances (" << dangerous << " dangerous), " << maslov_bad
      << " violations; rho: " << flat_instances << " flat instances, " << rho_bad << " violations; " << kinks
      << " kinks, " << kink_bad << " without a flip";
    return {maslov_bad == 0 && rho_bad == 0 && kink_bad == 0 && instances > 0 && flat_instances > 0, s.str()};
}

// 5 ------------------------------------------------------------------------
Outcome round_trips() {
    const auto t0 = Clock::now();
    EnumerationLimits all12;
    all12.max_length = 12;
    all12.max_arrows = 6;
    all12.max_cusps = 12;
    std::size_t n = 0, bad = 0, atlas_n = 0;
    for_each_diagram(all12, [&](const LegendrianGaussDiagram& d) {
        ++n;
        if (d.arrow_count() <= 3 && d.cusp_count() <= 4) ++atlas_n;
        if (!(canonical_code(gauss_of_planar(realize_planar(d))) == canonical_code(d))) {
            if (++bad <= 5) std::cerr << "  planar round trip failed: " << to_string(d) << "\n";
        }
        if (n % 500000 == 0) std::cerr << "  " << n << " diagrams, " << since(t0) << " s\n";
    });
    std::size_t flat_n = 0, flat_bad = 0;
    for_each_diagram(flat_limits(12), [&](const LegendrianGaussDiagram& d) {
        ++flat_n;
        const FlatVirtualString s(d.sites());
        if (!(canonical_code(string_of_planar(planar_flat_of_string(s))) == canonical_code(s))) ++flat_bad;
    });
    std::ostringstream out;
    out << n << " diagrams up to 12 sites (" << atlas_n << " in the atlas range), " << bad << " failures; " << flat_n
        << " flat strings, " << flat_bad << " failures";
    return {bad == 0 && flat_bad == 0 && n > 0, out.str()};
}

// 6 ------------------------------------------------------------------------
Outcome stabilization() {
    auto lim = atlas_limits(kAtlasLength);
    lim.max_arrows = 2;
    const auto corpus = all_diagrams(lim);
    SearchBudget budget;
    budget.max_depth = 16;
    budget.max_nodes = 1000000;
    const auto t0 = Clock::now();
    std::size_t failed = 0, max_nodes = 0, max_path = 0, done = 0;
    for (const auto& d : corpus) {
        const auto target = stabilize(d, 1, 1, 0);
        const auto r = search_equivalence(d, target, MoveMode::LegendrianHomotopy, budget);
        const bool ok = r.verdict == Verdict::Connected &&
                        canonical_code(replay(d, r.path, MoveMode::LegendrianHomotopy)) == canonical_code(target);
        if (!ok) {
            ++failed;
            std::cerr << "  not connected: " << to_string(d) << " (" << to_string(r.verdict) << ", "
                      << r.nodes_visited << " nodes)\n";
        }
        max_nodes = std::max(max_nodes, r.nodes_visited);
        max_path = std::max(max_path, r.path.size());
        if (++done % 250 == 0)
            std::cerr << "  " << done << "/" << corpus.size() << " searched, " << since(t0) << " s\n";
    }
    std::ostringstream s;
    s << corpus.size() << " diagrams with <=2 arrows, " << failed << " not connected, longest path " << max_path
      << ", most nodes " << max_nodes << ", " << since(t0) << " s";
    return {failed == 0 && !corpus.empty(), s.str()};
}

// 7 ------------------------------------------------------------------------
Outcome classification() {
    std::ostringstream s;
    bool pass = true;
    AtlasOptions opt;
    const auto maslov_of = [](const AtlasRecord& r) { return r.invariants.maslov; };
    const auto rho_of = [](const AtlasRecord& r) { return r.invariants.rho; };
    const auto iso = atlas_build(kAtlasLength, MoveMode::LegendrianIsotopy, {}, opt);
    const auto hom = atlas_build(kAtlasLength, MoveMode::LegendrianHomotopy, {}, opt);
    const auto flat = atlas_build(kAtlasLength, MoveMode::FlatFramedHomotopy, {}, opt);
    const std::size_t vi = orbit_invariant_violations(iso, maslov_of), vh = orbit_invariant_violations(hom, maslov_of),
                      vf = orbit_invariant_violations(flat, maslov_of), rf = orbit_invariant_violations(flat, rho_of);
    // every stored link joins diagrams of equal maslov
    std::size_t link_bad = 0;
    for (const Atlas* a : {&iso, &hom, &flat}) {
        for (const auto& l : a->links) {
            const auto x = parse_gauss_code(a->node_code(l.from).text), y = parse_gauss_code(a->node_code(l.to).text);
            if (maslov(x) != maslov(y)) ++link_bad;
        }
    }
    const auto rep = classification_probe(hom, flat);
    pass = vi == 0 && vh == 0 && vf == 0 && rf == 0 && link_bad == 0 && rep.maslov_violations == 0 &&
           rep.connected_pairs + rep.unresolved_pairs == rep.equal_invariant_pairs;
    s << "records " << hom.records.size() << "/" << flat.records.size() << " (legendrian/flat); maslov-violating pairs "
      << "isotopy " << vi << ", homotopy " << vh << ", flat " << vf << ", flat rho " << rf << ", links " << link_bad
      << "; probe: " << rep.equal_invariant_pairs << " equal-invariant pairs, " << rep.connected_pairs
      << " connected, " << rep.unresolved_pairs << " unresolved, " << rep.maslov_violations << " mis-connected";
    return {pass, s.str()};
}

// 8 ------------------------------------------------------------------------
Outcome psi() {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> digit(0, 9), start(-5, 5);
    auto big = [&] {
        std::string t = digit(rng) % 2 ? "-" : "";
        t += std::to_string(1 + digit(rng));
        for (int i = 0; i < 30; ++i) t += static_cast<char>('0' + digit(rng));
        return BigInt(t);
    };
    std::size_t tables = 0, diff_bad = 0, poly_tables = 0, poly_bad = 0;
    for (int n = 0; n <= 5; ++n) {
        for (int k = 0; k < 10; ++k) {
            ++tables;
            InvariantTable t;
            t.order = n;
            const long j0 = start(rng);
            for (long j = j0; j <= j0 + n; ++j) t.values[j] = big();
            PsiExtender ext(t);
            std::vector<BigInt> seq;
            for (long l = j0; l <= j0 + 60; ++l) seq.push_back(ext.value(l));
            for (int step = 0; step <= n; ++step) {
                for (std::size_t i = 0; i + 1 < seq.size(); ++i) seq[i] = seq[i + 1] - seq[i];
                seq.pop_back();
            }
            for (const auto& x : seq) diff_bad += x != 0;
        }
        for (int deg = 0; deg <= n; ++deg) {
            ++poly_tables;
            std::vector<BigInt> c;
            for (int i = 0; i <= deg; ++i) c.push_back(big());
            auto poly = [&](long x) {
                BigInt v = 0;
                for (int i = deg; i >= 0; --i) v = v * x + c[static_cast<std::size_t>(i)];
                return v;
            };
            InvariantTable t;
            t.order = n;
            for (long j = 0; j <= n; ++j) t.values[j] = poly(j);
            PsiExtender ext(t);
            for (long l = 0; l <= 100; ++l) poly_bad += ext.value(l) != poly(l);
        }
    }
    std::ostringstream s;
    s << tables << " random tables, " << diff_bad << " nonzero high differences; " << poly_tables
      << " polynomial tables, " << poly_bad << " wrong continuations";
    return {tables >= 50 && diff_bad == 0 && poly_bad == 0, s.str()};
}

// 9 ------------------------------------------------------------------------
struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(static_cast<std::size_t>(n)) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void join(int a, int b) { p[find(a)] = find(b); }
};

// Boundary traced through the two corners of every band end.
int traced_genus(const std::vector<Site>& w) {
    const int n = static_cast<int>(w.size());
    int boundary = 1;
    if (n > 0) {
        Dsu u(2 * n);
        for (int i = 0; i < n; ++i) u.join(2 * i + 1, 2 * ((i + 1) % n));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (w[i].id == w[j].id) {
                    u.join(2 * i, 2 * j + 1);
                    u.join(2 * i + 1, 2 * j);
                }
        boundary = 0;
        for (int c = 0; c < 2 * n; ++c) boundary += u.find(c) == c;
    }
    return (1 + n / 2 - boundary) / 2;
}

Outcome genus_oracle() {
    std::size_t strings = 0, bad = 0;
    std::function<void(int, std::vector<Site>&, int, std::vector<int>&)> rec = [&](int chords, std::vector<Site>& w,
                                                                                   int next, std::vector<int>& open) {
        if (static_cast<int>(w.size()) == 2 * chords) {
            ++strings;
            if (surface_genus(realize_surface(FlatVirtualString(w))) != traced_genus(w)) ++bad;
            return;
        }
        if (next <= chords) {
            for (bool head : {true, false}) {
                w.push_back(head ? Site::head(next) : Site::tail(next));
                open.push_back(head ? next : -next);
                rec(chords, w, next + 1, open);
                open.pop_back();
                w.pop_back();
            }
        }
        for (std::size_t i = 0; i < open.size(); ++i) {
            const int o = open[i];
            w.push_back(o > 0 ? Site::tail(o) : Site::head(-o));
            open.erase(open.begin() + static_cast<long>(i));
            rec(chords, w, next, open);
            open.insert(open.begin() + static_cast<long>(i), o);
            w.pop_back();
        }
    };
    for (int chords = 0; chords <= 6; ++chords) {
        std::vector<Site> w;
        std::vector<int> open;
        rec(chords, w, 1, open);
    }
    const int nested = genus(FlatVirtualString(parse_gauss_code("@L A1h A2h A2t A1t").sites()));
    const int crossed = genus(FlatVirtualString(parse_gauss_code("@L A1h A2h A1t A2t").sites()));
    std::ostringstream s;
    s << strings << " strings with <=6 chords, " << bad << " disagreements; nested genus " << nested
      << ", interleaved genus " << crossed;
    return {bad == 0 && nested == 0 && crossed == 1, s.str()};
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"combinatorial lemma", lemma},
        {"expansion identity", expansion},
        {"move table soundness", move_table},
        {"invariance suite", invariance},
        {"bijection round trips", round_trips},
        {"homotopy stabilization", stabilization},
        {"classification soundness probe", classification},
        {"psi recursion", psi},
        {"genus oracle", genus_oracle},
    };
    std::vector<int> pick;
    for (int i = 1; i < argc; ++i) pick.push_back(std::atoi(argv[i]));
    if (pick.empty())
        for (int i = 1; i <= 9; ++i) pick.push_back(i);
    int failed = 0;
    for (int k : pick) {
        if (k < 1 || k > 9) {
            std::cerr << "no criterion " << k << "\n";
            return 2;
        }
        const auto& [name, run] = criteria[static_cast<std::size_t>(k - 1)];
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %d %s: %s - %s (%.1f s)\n", k, name, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                    since(t0));
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
