#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "legknot/atlas.hpp"
#include "legknot/planar.hpp"

namespace legknot {

inline constexpr int kAtlasFormatVersion = 1;

// ---------------------------------------------------------------------------
// Atlas files

inline nlohmann::json atlas_to_json(const Atlas& a) {
    using nlohmann::json;
    json j;
    j["format_version"] = kAtlasFormatVersion;
    j["mode"] = to_string(a.mode);
    j["max_word_length"] = a.max_word_length;
    j["budget"] = {{"max_depth", a.budget.max_depth},
                   {"max_nodes", a.budget.max_nodes},
                   {"max_word_length", a.budget.max_word_length}};
    j["complete"] = a.complete;
    json recs = json::array();
    for (const auto& r : a.records) {
        const auto& iv = r.invariants;
        recs.push_back({{"code", r.code.text},
                        {"maslov", iv.maslov},
                        {"arrows", iv.arrow_count},
                        {"cusps", iv.positive_cusps + iv.negative_cusps},
                        {"genus", iv.genus},
                        {"rho", iv.rho},
                        {"orbit_id", r.orbit_id}});
    }
    j["records"] = std::move(recs);
    json nodes = json::array();
    for (const auto& c : a.extra_nodes) nodes.push_back(c.text);
    json links = json::array();
    for (const auto& l : a.links) links.push_back({l.from, l.to, to_string(l.move)});
    j["witness"] = {{"extra_nodes", std::move(nodes)}, {"links", std::move(links)}};
    return j;
}

inline std::string atlas_to_text(const Atlas& a) { return atlas_to_json(a).dump(1) + "\n"; }

inline Atlas atlas_from_json(const nlohmann::json& j) {
    try {
        const int version = j.at("format_version").get<int>();
        if (version != kAtlasFormatVersion)
            throw Error(ErrorCode::InvalidArgument, "unsupported atlas format_version " + std::to_string(version));
        Atlas a;
        const auto mode = parse_mode(j.at("mode").get<std::string>());
        if (!mode) throw Error(ErrorCode::InvalidArgument, "unknown atlas mode");
        a.mode = *mode;
        a.max_word_length = j.at("max_word_length").get<int>();
        const auto& b = j.at("budget");
        a.budget.max_depth = b.at("max_depth").get<int>();
        a.budget.max_nodes = b.at("max_nodes").get<std::size_t>();
        a.budget.max_word_length = b.at("max_word_length").get<std::size_t>();
        a.complete = j.value("complete", true);
        for (const auto& r : j.at("records")) {
            AtlasRecord rec;
            rec.code = {r.at("code").get<std::string>()};
            const auto d = parse_gauss_code(rec.code.text);
            if (canonical_code(d) != rec.code) throw Error(ErrorCode::InvalidArgument, "record code is not canonical: " + rec.code.text);
            auto& iv = rec.invariants;
            iv.maslov = r.at("maslov").get<int>();
            iv.arrow_count = r.at("arrows").get<int>();
            const int cusps = r.at("cusps").get<int>();
            if ((cusps + iv.maslov) % 2 != 0) throw Error(ErrorCode::InvalidArgument, "cusps and maslov disagree in parity");
            iv.positive_cusps = (cusps + iv.maslov) / 2;
            iv.negative_cusps = (cusps - iv.maslov) / 2;
            iv.genus = r.at("genus").get<int>();
            iv.rho = r.at("rho").get<int>();
            iv.string_code = canonical_code(underlying_string(d));
            rec.orbit_id = r.at("orbit_id").get<int>();
            a.records.push_back(std::move(rec));
        }
        if (!std::is_sorted(a.records.begin(), a.records.end(),
                            [](const AtlasRecord& x, const AtlasRecord& y) { return x.code < y.code; }))
            throw Error(ErrorCode::InvalidArgument, "atlas records are not sorted by code");
        if (j.contains("witness")) {
            const auto& w = j.at("witness");
            for (const auto& c : w.at("extra_nodes")) a.extra_nodes.push_back({c.get<std::string>()});
            const int n = static_cast<int>(a.records.size() + a.extra_nodes.size());
            for (const auto& l : w.at("links")) {
                AtlasLink link{l.at(0).get<int>(), l.at(1).get<int>(), parse_move_instance(l.at(2).get<std::string>())};
                if (link.from < 0 || link.to < 0 || link.from >= n || link.to >= n)
                    throw Error(ErrorCode::InvalidArgument, "witness link out of range");
                a.links.push_back(std::move(link));
            }
        }
        return a;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::SyntaxError, std::string("atlas file: ") + e.what());
    }
}

inline Atlas atlas_from_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::SyntaxError, std::string("atlas file: ") + e.what(), static_cast<long>(e.byte));
    }
    return atlas_from_json(j);
}

// ---------------------------------------------------------------------------
// Planar files
//
//   # comment
//   vertices: (0, 0) (3/2, 1) (2.5, -4)
//   cusps: (1, +) (4, -)
//   virtual: (0, 5)
//   coorientation_seed: L
//
// A field runs until the next field name and may span lines. Coordinates
// are exact rationals; decimals are read as exact base-10 fractions. All
// points are scaled by the common denominator and must then fit the
// integer coordinate range.

namespace detail {

using BigRational = std::pair<boost::multiprecision::cpp_int, boost::multiprecision::cpp_int>;  // num, den > 0

class PlanarLexer {
public:
    explicit PlanarLexer(std::string text) : text_(std::move(text)) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::SyntaxError,
                    "line " + std::to_string(line_) + ", column " + std::to_string(col_) + ": " + msg, line_);
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ',') {
                advance();
            } else {
                break;
            }
        }
    }
    bool done() {
        skip_space();
        return pos_ >= text_.size();
    }
    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        advance();
    }
    // Field name followed by ':' if present at the cursor.
    std::string field_name() {
        skip_space();
        std::size_t p = pos_;
        while (p < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[p])) || text_[p] == '_')) ++p;
        if (p == pos_ || p >= text_.size() || text_[p] != ':') return {};
        std::string name = text_.substr(pos_, p - pos_);
        while (pos_ <= p) advance();
        return name;
    }
    std::string word() {
        skip_space();
        std::string out;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '/' || c == '-' || c == '+') {
                out += c;
                advance();
            } else {
                break;
            }
        }
        if (out.empty()) fail("expected a value");
        return out;
    }

    BigRational number() {
        const std::string w = word();
        using boost::multiprecision::cpp_int;
        std::size_t i = 0;
        bool neg = false;
        if (w[i] == '-' || w[i] == '+') {
            neg = w[i] == '-';
            ++i;
        }
        auto digits = [&](std::string& into) {
            while (i < w.size() && std::isdigit(static_cast<unsigned char>(w[i]))) into += w[i++];
        };
        std::string a, b;
        digits(a);
        cpp_int num, den = 1;
        if (i < w.size() && w[i] == '/') {
            ++i;
            digits(b);
            if (a.empty() || b.empty() || i != w.size()) fail("malformed rational '" + w + "'");
            num = cpp_int(a);
            den = cpp_int(b);
            if (den == 0) fail("zero denominator");
        } else {
            if (i < w.size() && w[i] == '.') {
                ++i;
                digits(b);
            }
            if ((a.empty() && b.empty()) || i != w.size()) fail("malformed number '" + w + "'");
            num = cpp_int(a.empty() ? "0" : a);
            for (char c : b) {
                num = num * 10 + (c - '0');
                den *= 10;
            }
        }
        if (neg) num = -num;
        const cpp_int g = boost::multiprecision::gcd(num < 0 ? cpp_int(-num) : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        return {num, den};
    }

    long integer() {
        const auto [num, den] = number();
        if (den != 1 || num > 1000000000 || num < -1000000000) fail("expected an integer");
        return static_cast<long>(num);
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string text_;
    std::size_t pos_ = 0;
    long line_ = 1;
    long col_ = 1;
};

} // namespace detail

inline PlanarFrontDiagram parse_planar(const std::string& text) {
    using boost::multiprecision::cpp_int;
    detail::PlanarLexer lx(text);
    std::vector<std::pair<detail::BigRational, detail::BigRational>> pts;
    PlanarFrontDiagram p;
    bool seen_vertices = false;
    std::string field;
    while (!lx.done()) {
        const std::string name = lx.field_name();
        if (!name.empty()) {
            if (name != "vertices" && name != "cusps" && name != "virtual" && name != "coorientation_seed")
                lx.fail("unknown field '" + name + "'");
            field = name;
            if (field == "vertices") seen_vertices = true;
            continue;
        }
        if (field.empty()) lx.fail("expected a field name");
        if (field == "vertices") {
            lx.expect('(');
            auto x = lx.number();
            auto y = lx.number();
            lx.expect(')');
            pts.push_back({x, y});
        } else if (field == "cusps") {
            lx.expect('(');
            const long v = lx.integer();
            const std::string s = lx.word();
            lx.expect(')');
            if (s != "+" && s != "-") lx.fail("cusp sign must be + or -");
            p.cusp_tags.push_back({static_cast<int>(v), s == "+" ? CuspSign::Positive : CuspSign::Negative});
        } else if (field == "virtual") {
            lx.expect('(');
            long a = lx.integer();
            long b = lx.integer();
            lx.expect(')');
            if (a > b) std::swap(a, b);
            p.virtual_crossings.insert({static_cast<int>(a), static_cast<int>(b)});
        } else {
            const std::string s = lx.word();
            if (s != "L" && s != "R") lx.fail("coorientation_seed must be L or R");
            p.coorientation_seed = s == "L" ? Coorientation::L : Coorientation::R;
            field.clear();
        }
    }
    if (!seen_vertices || pts.empty()) lx.fail("missing vertices");
    cpp_int scale = 1;
    for (const auto& [x, y] : pts) {
        scale = boost::multiprecision::lcm(scale, x.second);
        scale = boost::multiprecision::lcm(scale, y.second);
    }
    for (const auto& [x, y] : pts) {
        const cpp_int X = x.first * (scale / x.second), Y = y.first * (scale / y.second);
        if (abs(X) >= kCoordLimit || abs(Y) >= kCoordLimit)
            throw Error(ErrorCode::InvalidArgument, "coordinates exceed the exact range after scaling");
        p.strand.push_back({static_cast<std::int64_t>(X), static_cast<std::int64_t>(Y)});
    }
    const int m = static_cast<int>(p.strand.size());
    for (const auto& c : p.cusp_tags) {
        if (c.vertex < 0 || c.vertex >= m) throw Error(ErrorCode::InvalidArgument, "cusp vertex out of range", c.vertex);
    }
    for (const auto& c : p.virtual_crossings) {
        if (c.a < 0 || c.b >= m || c.a == c.b) throw Error(ErrorCode::InvalidArgument, "virtual crossing out of range", c.a);
    }
    return p;
}

inline std::string emit_planar(const PlanarFrontDiagram& p) {
    std::ostringstream out;
    out << "vertices:";
    for (const Point& v : p.strand) out << " (" << v.x << ", " << v.y << ")";
    out << "\ncusps:";
    auto tags = p.cusp_tags;
    std::sort(tags.begin(), tags.end(), [](const CuspTag& a, const CuspTag& b) { return a.vertex < b.vertex; });
    for (const auto& c : tags) out << " (" << c.vertex << ", " << (c.sign == CuspSign::Positive ? '+' : '-') << ")";
    out << "\nvirtual:";
    for (const auto& c : p.virtual_crossings) out << " (" << c.a << ", " << c.b << ")";
    out << "\ncoorientation_seed: " << to_char(p.coorientation_seed) << "\n";
    return out.str();
}

/// Reads a whole file; "-" reads standard input.
inline std::string read_text(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace legknot
