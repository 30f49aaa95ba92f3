#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "legknot/formal_sum.hpp"
#include "legknot/moves.hpp"
#include "legknot/search.hpp"

namespace legknot {

/// Which resolution of a mark carries sign +1.
enum class ResolutionConvention {
    PositivePlain,       // + deletes the mark, - inserts C+ C+ C- C-
    PositiveStabilized,  // the opposite assignment
};

inline BigInt binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    BigInt r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

inline BigInt sign_power(long e) { return (e % 2 == 0) ? BigInt(1) : BigInt(-1); }

namespace detail {

inline std::vector<Site> resolve_one(const std::vector<Site>& w, int mark, bool plain) {
    std::vector<Site> out;
    out.reserve(w.size() + 2);
    bool first = true;
    for (const Site& s : w) {
        if (!(s.is_mark() && s.id == mark)) {
            out.push_back(s);
            continue;
        }
        if (first && !plain) {
            const Site P = Site::cusp(CuspSign::Positive), N = Site::cusp(CuspSign::Negative);
            out.insert(out.end(), {P, P, N, N});
        }
        first = false;
    }
    return out;
}

} // namespace detail

/// Signed sum of all 2^s resolutions. Marks are resolved one at a time and
/// equal intermediate words are merged, which leaves the sum unchanged.
inline FormalSum resolve(const LegendrianGaussDiagram& d,
                         ResolutionConvention conv = ResolutionConvention::PositivePlain) {
    validate(d);
    std::vector<int> marks;
    for (const Site& s : d.sites()) {
        if (s.is_mark() && std::find(marks.begin(), marks.end(), s.id) == marks.end()) marks.push_back(s.id);
    }
    const BigInt plain_sign = conv == ResolutionConvention::PositivePlain ? 1 : -1;
    using Layer = std::map<std::string, std::pair<std::vector<Site>, BigInt>>;
    auto key = [](const std::vector<Site>& w) {
        std::string k;
        for (const Site& s : w) k += to_token(s) + ' ';
        return k;
    };
    auto bump = [&](Layer& l, std::vector<Site> w, const BigInt& k) {
        auto [it, fresh] = l.try_emplace(key(w), std::move(w), BigInt(0));
        it->second.second += k;
    };
    Layer layer;
    bump(layer, d.sites(), 1);
    for (int m : marks) {
        Layer next;
        for (const auto& [text, term] : layer) {
            const auto& [w, k] = term;
            bump(next, detail::resolve_one(w, m, true), k * plain_sign);
            bump(next, detail::resolve_one(w, m, false), -k * plain_sign);
        }
        layer = std::move(next);
    }
    FormalSum out;
    for (const auto& [text, term] : layer) out.add(canonical_code(LegendrianGaussDiagram(term.first, d.base())), term.second);
    return out;
}

/// K with z marks inserted at one gap.
inline LegendrianGaussDiagram singular_power(const LegendrianGaussDiagram& d, int z, int position = 0) {
    if (z < 0) throw Error(ErrorCode::InvalidArgument, "negative mark count", z);
    auto out = d;
    for (int i = 0; i < z; ++i) out = insert_singular(out, position);
    return out;
}

/// Sum_j (-1)^j C(z,j) K^{j,j}, all stabilizations at one gap.
inline FormalSum binomial_expansion(const LegendrianGaussDiagram& d, int z, int position = 0) {
    FormalSum out;
    for (int j = 0; j <= z; ++j) out.add(canonical_code(stabilize(d, j, j, position)), sign_power(j) * binomial(z, j));
    return out;
}

inline bool expansion_identity_check(const LegendrianGaussDiagram& d, int z, int position = 0,
                                     ResolutionConvention conv = ResolutionConvention::PositivePlain) {
    for (const Site& s : d.sites()) {
        if (s.is_mark()) throw Error(ErrorCode::SingularNotAllowed, "expansion of a singular diagram");
    }
    const BigInt flip = conv == ResolutionConvention::PositivePlain ? BigInt(1) : sign_power(z);
    return resolve(singular_power(d, z, position), conv) == binomial_expansion(d, z, position).scaled(flip);
}

/// Sum_{k=ceil(i/(z+1))}^{p} (-1)^{k+1} C(p,k) C(k(z+1), i).
inline BigInt combo_lemma_sum(long p, long z, long i) {
    BigInt s = 0;
    const long lo = (i + z) / (z + 1);
    for (long k = lo; k <= p; ++k) s += sign_power(k + 1) * binomial(p, k) * binomial(k * (z + 1), i);
    return s;
}

inline bool combo_lemma_check(long p, long z) {
    if (p < 1 || z < 1) throw Error(ErrorCode::InvalidArgument, "p and z must be positive");
    for (long i = 0; i < p; ++i) {
        if (combo_lemma_sum(p, z, i) != 0) return false;
    }
    return true;
}

struct ChainOptions {
    int position_k = 0;
    int position_l = 0;
    bool search_hypothesis = false;  // accept an isotopy-mode witness path when codes differ
    SearchBudget budget;
    ResolutionConvention convention = ResolutionConvention::PositivePlain;
};

struct ChainReport {
    bool hypothesis_by_code = false;
    std::vector<MoveInstance> hypothesis_path;
    bool expansion_matches = false;     // resolution side equals the binomial side for K
    bool low_terms_vanish = false;      // j < p coefficients are zero
    bool collapses_to_l = false;        // after K^{j,j} -> L^{j,j} the sum is L's expansion
    FormalSum k_side;
    FormalSum l_side;

    bool ok() const { return expansion_matches && low_terms_vanish && collapses_to_l; }
};

namespace detail {

inline FormalSum chain_resolution_side(const LegendrianGaussDiagram& d, int p, int z, int pos,
                                       ResolutionConvention conv) {
    FormalSum out;
    for (int k = 0; k <= p; ++k) {
        const int m = k * (z + 1);
        const BigInt flip = conv == ResolutionConvention::PositivePlain ? BigInt(1) : sign_power(m);
        out += resolve(singular_power(d, m, pos), conv).scaled(sign_power(k) * binomial(p, k) * flip);
    }
    return out;
}

// Coefficient of K^{j,j} in the regrouped double sum.
inline BigInt chain_coefficient(int p, int z, int j) {
    BigInt s = 0;
    for (long k = (j + z) / (z + 1); k <= p; ++k) s += sign_power(k + j) * binomial(p, k) * binomial(k * (z + 1), j);
    return s;
}

} // namespace detail

inline ChainReport theorem_chain_report(const LegendrianGaussDiagram& dK, const LegendrianGaussDiagram& dL, int p,
                                        int z, const ChainOptions& opt = {}) {
    if (p < 1 || z < 1) throw Error(ErrorCode::InvalidArgument, "p and z must be positive");
    ChainReport rep;
    const auto kp = stabilize(dK, p, p, opt.position_k);
    const auto lp = stabilize(dL, p, p, opt.position_l);
    if (canonical_code(kp) == canonical_code(lp)) {
        rep.hypothesis_by_code = true;
    } else {
        bool found = false;
        if (opt.search_hypothesis) {
            const auto r = search_equivalence(kp, lp, MoveMode::LegendrianIsotopy, opt.budget);
            if (r.verdict == Verdict::Connected) {
                found = true;
                rep.hypothesis_path = r.path;
            }
        }
        if (!found)
            throw Error(ErrorCode::HypothesisNotEstablished, "K^{p,p} and L^{p,p} are not shown isotopic", p);
    }
    const int top = p * (z + 1);
    rep.k_side = detail::chain_resolution_side(dK, p, z, opt.position_k, opt.convention);
    FormalSum grouped, substituted;
    rep.low_terms_vanish = true;
    for (int j = 0; j <= top; ++j) {
        const BigInt c = detail::chain_coefficient(p, z, j);
        grouped.add(canonical_code(stabilize(dK, j, j, opt.position_k)), c);
        if (j < p) {
            if (c != 0 || combo_lemma_sum(p, z, j) != 0) rep.low_terms_vanish = false;
            continue;
        }
        substituted.add(canonical_code(stabilize(dL, j, j, opt.position_l)), c);
    }
    rep.expansion_matches = rep.k_side == grouped;
    rep.l_side = detail::chain_resolution_side(dL, p, z, opt.position_l, opt.convention);
    rep.collapses_to_l = substituted == rep.l_side;
    return rep;
}

inline bool theorem_chain_check(const LegendrianGaussDiagram& dK, const LegendrianGaussDiagram& dL, int p, int z,
                                const ChainOptions& opt = {}) {
    return theorem_chain_report(dK, dL, p, z, opt).ok();
}

/// Values psi(K^{2j}) on a contiguous range of j, for an order bound n.
struct InvariantTable {
    std::map<long, BigInt> values;
    int order = 0;
};

/// Continues a table past its last index by the vanishing (n+1)-st
/// difference recursion. Computed values are cached.
class PsiExtender {
public:
    explicit PsiExtender(InvariantTable t) : t_(std::move(t)) {
        if (t_.order < 0) throw Error(ErrorCode::InvalidArgument, "negative order", t_.order);
        if (t_.values.empty()) throw Error(ErrorCode::InsufficientBaseValues, "empty table");
        long expect = t_.values.begin()->first;
        for (const auto& [j, v] : t_.values) {
            if (j != expect) throw Error(ErrorCode::InsufficientBaseValues, "table has a hole", expect);
            ++expect;
        }
        hi_ = t_.values.rbegin()->first;
        memo_ = t_.values;
    }

    BigInt value(long l) {
        if (auto it = memo_.find(l); it != memo_.end()) return it->second;
        const long lo = t_.values.begin()->first;
        if (l < lo) throw Error(ErrorCode::InsufficientBaseValues, "index below the table", l);
        const int n1 = t_.order + 1;
        if (hi_ - lo + 1 < n1)
            throw Error(ErrorCode::InsufficientBaseValues, "need " + std::to_string(n1) + " base values", l);
        for (long x = memo_.rbegin()->first + 1; x <= l; ++x) {
            BigInt s = 0;
            for (int i = 1; i <= n1; ++i) s += sign_power(i + 1) * binomial(n1, i) * memo_.at(x - i);
            memo_.emplace(x, std::move(s));
        }
        return memo_.at(l);
    }

    const InvariantTable& table() const { return t_; }

private:
    InvariantTable t_;
    long hi_ = 0;
    std::map<long, BigInt> memo_;
};

inline BigInt psi_extend(const InvariantTable& t, long l) { return PsiExtender(t).value(l); }

} // namespace legknot
