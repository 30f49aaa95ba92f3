#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <unordered_set>
#include <vector>

#include "legknot/canonical.hpp"

namespace legknot {

struct EnumerationLimits {
    std::size_t max_length = 8;
    int max_arrows = 4;
    int max_cusps = 8;
    bool cusp_free_base_l_only = false;  // flat strings
};

/// Calls visit(word) for every literal word within the limits, arrows
/// numbered by first occurrence. Rotations are not removed.
inline void for_each_word(const EnumerationLimits& lim, const std::function<void(const std::vector<Site>&)>& visit) {
    std::vector<Site> word;
    std::vector<std::pair<int, bool>> open;  // (id, first endpoint was head)
    for (std::size_t n = 0; n <= lim.max_length; ++n) {
        for (int c = 0; c <= lim.max_cusps && static_cast<std::size_t>(c) <= n; c += 2) {
            if (lim.cusp_free_base_l_only && c > 0) break;
            if ((n - static_cast<std::size_t>(c)) % 2 != 0) continue;
            const int a = static_cast<int>((n - static_cast<std::size_t>(c)) / 2);
            if (a > lim.max_arrows) continue;
            std::function<void(int, int)> rec = [&](int cusps_used, int opened) {
                const std::size_t pos = word.size();
                if (pos == n) {
                    visit(word);
                    return;
                }
                const std::size_t remaining = n - pos;
                const std::size_t need_after =
                    open.size() + static_cast<std::size_t>(c - cusps_used) + 2 * static_cast<std::size_t>(a - opened);
                if (need_after > remaining) return;
                if (cusps_used < c) {
                    for (CuspSign s : {CuspSign::Positive, CuspSign::Negative}) {
                        word.push_back(Site::cusp(s));
                        rec(cusps_used + 1, opened);
                        word.pop_back();
                    }
                }
                if (opened < a) {
                    for (bool head : {false, true}) {
                        const int id = opened + 1;
                        word.push_back(head ? Site::head(id) : Site::tail(id));
                        open.push_back({id, head});
                        rec(cusps_used, opened + 1);
                        open.pop_back();
                        word.pop_back();
                    }
                }
                for (std::size_t k = 0; k < open.size(); ++k) {
                    const auto [id, head] = open[k];
                    word.push_back(head ? Site::tail(id) : Site::head(id));
                    open.erase(open.begin() + static_cast<long>(k));
                    rec(cusps_used, opened);
                    open.insert(open.begin() + static_cast<long>(k), {id, head});
                    word.pop_back();
                }
            };
            rec(0, 0);
        }
    }
}

/// Streams each class once, as its canonical form, without storing the
/// corpus. Order follows word generation.
inline void for_each_diagram(const EnumerationLimits& lim,
                             const std::function<void(const LegendrianGaussDiagram&)>& visit) {
    for_each_word(lim, [&](const std::vector<Site>& w) {
        for (Coorientation base : {Coorientation::L, Coorientation::R}) {
            if (lim.cusp_free_base_l_only && base == Coorientation::R) continue;
            LegendrianGaussDiagram d(w, base);
            if (canonical_form(d) == d) visit(d);
        }
    });
}

/// One canonical representative per rotation/relabeling class, sorted by
/// canonical code text.
inline std::vector<LegendrianGaussDiagram> all_diagrams(const EnumerationLimits& lim) {
    std::unordered_set<std::string> seen;
    std::vector<LegendrianGaussDiagram> out;
    for_each_word(lim, [&](const std::vector<Site>& w) {
        for (Coorientation base : {Coorientation::L, Coorientation::R}) {
            if (lim.cusp_free_base_l_only && base == Coorientation::R) continue;
            LegendrianGaussDiagram d(w, base);
            if (seen.insert(canonical_key(d)).second) out.push_back(canonical_form(d));
        }
    });
    std::vector<std::pair<std::string, std::size_t>> order;
    order.reserve(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) order.emplace_back(to_string(out[i]), i);
    std::sort(order.begin(), order.end());
    std::vector<LegendrianGaussDiagram> sorted;
    sorted.reserve(out.size());
    for (const auto& [text, i] : order) sorted.push_back(std::move(out[i]));
    return sorted;
}

/// Uniform choice of arrow and cusp counts, then a uniformly shuffled word
/// with random orientations, cusp signs and base label.
inline LegendrianGaussDiagram random_diagram(std::mt19937_64& rng, int max_arrows, int max_cusps) {
    std::uniform_int_distribution<int> arrows(0, max_arrows), pairs(0, max_cusps / 2), coin(0, 1);
    const int a = arrows(rng), c = 2 * pairs(rng);
    std::vector<Site> w;
    for (int id = 1; id <= a; ++id) {
        w.push_back(Site::head(id));
        w.push_back(Site::tail(id));
    }
    for (int i = 0; i < c; ++i) w.push_back(Site::cusp(coin(rng) ? CuspSign::Positive : CuspSign::Negative));
    std::shuffle(w.begin(), w.end(), rng);
    return {relabel_by_first_occurrence(w), coin(rng) ? Coorientation::L : Coorientation::R};
}

} // namespace legknot
