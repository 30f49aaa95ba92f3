#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "legknot/diagram.hpp"

namespace legknot {

/// Text of the canonical rotation with ids renumbered by first occurrence.
struct CanonicalCode {
    std::string text;

    friend auto operator<=>(const CanonicalCode&, const CanonicalCode&) = default;
    friend bool operator==(const CanonicalCode&, const CanonicalCode&) = default;
};

namespace detail {

// Relabel-free symbol for each site: kind plus forward distance to the
// partner endpoint (arrows, marks) or the cusp sign. Two rotations with the
// same symbol sequence and base relabel to the same word.
inline std::vector<std::uint16_t> site_symbols(const std::vector<Site>& sites) {
    const std::size_t n = sites.size();
    std::vector<std::uint16_t> sym(n);
    std::vector<int> partner(n, -1);
    {
        std::vector<int> seen_head, seen_tail, seen_mark;
        auto slot = [](std::vector<int>& v, int id) -> int& {
            if (static_cast<std::size_t>(id) >= v.size()) v.resize(static_cast<std::size_t>(id) + 1, -1);
            return v[static_cast<std::size_t>(id)];
        };
        for (std::size_t i = 0; i < n; ++i) {
            const Site& s = sites[i];
            if (s.is_head()) slot(seen_head, s.id) = static_cast<int>(i);
            else if (s.is_tail()) slot(seen_tail, s.id) = static_cast<int>(i);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const Site& s = sites[i];
            if (s.is_head()) partner[i] = slot(seen_tail, s.id);
            else if (s.is_tail()) partner[i] = slot(seen_head, s.id);
            else if (s.is_mark()) {
                int& m = slot(seen_mark, s.id);
                if (m >= 0) {
                    partner[i] = m;
                    partner[static_cast<std::size_t>(m)] = static_cast<int>(i);
                } else {
                    m = static_cast<int>(i);
                }
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Site& s = sites[i];
        std::uint16_t kind = static_cast<std::uint16_t>(s.kind);
        std::uint16_t payload = 0;
        if (s.is_cusp()) {
            payload = s.sign == CuspSign::Positive ? 1 : 0;
        } else if (partner[i] >= 0) {
            payload = static_cast<std::uint16_t>((static_cast<std::size_t>(partner[i]) + n - i) % n);
        }
        sym[i] = static_cast<std::uint16_t>(kind << 12 | payload);
    }
    return sym;
}

struct RotationChoice {
    std::size_t index = 0;
    std::vector<std::uint16_t> symbols;
    std::vector<Coorientation> labels;
};

inline RotationChoice choose_rotation(const LegendrianGaussDiagram& d) {
    RotationChoice rc;
    const std::size_t n = d.size();
    rc.labels = gap_labels(d);
    if (n == 0) return rc;
    rc.symbols = site_symbols(d.sites());
    const auto& sym = rc.symbols;
    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k) {
        if (rc.labels[k] != rc.labels[best]) {
            if (rc.labels[k] < rc.labels[best]) best = k;
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
            const auto a = sym[(k + j) % n];
            const auto b = sym[(best + j) % n];
            if (a != b) {
                if (a < b) best = k;
                break;
            }
        }
    }
    rc.index = best;
    return rc;
}

} // namespace detail

/// Index of the rotation chosen as canonical.
inline std::size_t canonical_rotation(const LegendrianGaussDiagram& d) {
    return detail::choose_rotation(d).index;
}

/// Canonical representative: chosen rotation with ids renumbered 1..n.
inline LegendrianGaussDiagram canonical_form(const LegendrianGaussDiagram& d) {
    return relabeled(rotated(d, canonical_rotation(d)));
}

inline CanonicalCode canonical_code(const LegendrianGaussDiagram& d) {
    validate_structure(d);
    return {to_string(canonical_form(d))};
}

inline CanonicalCode canonical_code(const FlatVirtualString& s) {
    validate(s);
    auto text = to_string(canonical_form(s.as_diagram()));
    return {text.size() > 3 ? text.substr(3) : std::string()};
}

namespace detail {

inline std::string key_of(const RotationChoice& rc, std::size_t n) {
    std::string key;
    key.reserve(1 + 2 * n);
    key.push_back(static_cast<char>(rc.labels[n == 0 ? 0 : rc.index]));
    for (std::size_t j = 0; j < n; ++j) {
        const auto v = rc.symbols[(rc.index + j) % n];
        key.push_back(static_cast<char>(v >> 8));
        key.push_back(static_cast<char>(v & 0xff));
    }
    return key;
}

} // namespace detail

/// Compact byte key with the same equality as canonical_code; used for
/// visited sets.
inline std::string canonical_key(const LegendrianGaussDiagram& d) {
    return detail::key_of(detail::choose_rotation(d), d.size());
}

/// canonical_form and canonical_key from a single rotation choice.
inline std::pair<LegendrianGaussDiagram, std::string> canonical_form_and_key(const LegendrianGaussDiagram& d) {
    const auto rc = detail::choose_rotation(d);
    return {relabeled(rotated(d, rc.index)), detail::key_of(rc, d.size())};
}

} // namespace legknot

template <>
struct std::hash<legknot::CanonicalCode> {
    std::size_t operator()(const legknot::CanonicalCode& c) const noexcept {
        return std::hash<std::string>{}(c.text);
    }
};
