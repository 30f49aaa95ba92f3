#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "legknot/canonical.hpp"

namespace legknot {

namespace detail {

inline bool parse_positive(std::string_view digits, int& out) {
    if (digits.empty() || digits.size() > 9) return false;
    int v = 0;
    for (char ch : digits) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
        v = v * 10 + (ch - '0');
    }
    if (v <= 0 || digits.front() == '0') return false;
    out = v;
    return true;
}

inline bool parse_token(std::string_view tok, Site& out) {
    if (tok == "C+") { out = Site::cusp(CuspSign::Positive); return true; }
    if (tok == "C-") { out = Site::cusp(CuspSign::Negative); return true; }
    int id = 0;
    if (tok.size() >= 2 && tok.front() == 'S') {
        if (!parse_positive(tok.substr(1), id)) return false;
        out = Site::mark(id);
        return true;
    }
    if (tok.size() >= 3 && tok.front() == 'A') {
        const char end = tok.back();
        if (end != 'h' && end != 't') return false;
        if (!parse_positive(tok.substr(1, tok.size() - 2), id)) return false;
        out = end == 'h' ? Site::head(id) : Site::tail(id);
        return true;
    }
    return false;
}

inline bool is_blank(char ch) { return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n'; }

} // namespace detail

/// Reads the one-line text form without validating. Columns are 1-based.
inline LegendrianGaussDiagram parse_gauss_code_raw(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size() && detail::is_blank(text[i])) ++i;
    if (i + 1 >= text.size() || text[i] != '@' || (text[i + 1] != 'L' && text[i + 1] != 'R'))
        throw Error(ErrorCode::SyntaxError, "expected @L or @R", static_cast<long>(i + 1));
    const Coorientation base = text[i + 1] == 'L' ? Coorientation::L : Coorientation::R;
    i += 2;
    if (i < text.size() && !detail::is_blank(text[i]))
        throw Error(ErrorCode::SyntaxError, "expected whitespace after base label", static_cast<long>(i + 1));
    std::vector<Site> sites;
    while (i < text.size()) {
        while (i < text.size() && detail::is_blank(text[i])) ++i;
        if (i >= text.size()) break;
        const std::size_t start = i;
        while (i < text.size() && !detail::is_blank(text[i])) ++i;
        Site s;
        const auto tok = text.substr(start, i - start);
        if (!detail::parse_token(tok, s))
            throw Error(ErrorCode::SyntaxError, "bad token '" + std::string(tok) + "'",
                        static_cast<long>(start + 1));
        sites.push_back(s);
    }
    return {std::move(sites), base};
}

/// Parses and validates; core failures come back as ValidationError whose
/// detail is the numeric core ErrorCode.
inline LegendrianGaussDiagram parse_gauss_code(std::string_view text) {
    auto d = parse_gauss_code_raw(text);
    try {
        validate(d);
    } catch (const Error& e) {
        throw Error(ErrorCode::ValidationError, e.what(), static_cast<long>(e.code()));
    }
    return d;
}

/// Emits the canonical rotation.
inline std::string emit_gauss_code(const LegendrianGaussDiagram& d) { return canonical_code(d).text; }

/// Literal text, no canonicalization.
inline std::string emit_raw(const LegendrianGaussDiagram& d) { return to_string(d); }

} // namespace legknot
