#pragma once

#include <map>
#include <sstream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "legknot/canonical.hpp"
#include "legknot/error.hpp"

namespace legknot {

using BigInt = boost::multiprecision::cpp_int;

/// Exact integer combination of canonical codes; zero terms are never stored.
class FormalSum {
public:
    using Terms = std::map<CanonicalCode, BigInt>;

    FormalSum() = default;
    static FormalSum single(const CanonicalCode& c, const BigInt& coef = 1) {
        FormalSum s;
        s.add(c, coef);
        return s;
    }

    void add(const CanonicalCode& c, const BigInt& coef) {
        if (coef == 0) return;
        auto [it, fresh] = terms_.try_emplace(c, coef);
        if (!fresh) {
            it->second += coef;
            if (it->second == 0) terms_.erase(it);
        }
    }

    FormalSum& operator+=(const FormalSum& o) {
        for (const auto& [c, k] : o.terms_) add(c, k);
        return *this;
    }
    FormalSum& operator-=(const FormalSum& o) {
        for (const auto& [c, k] : o.terms_) add(c, -k);
        return *this;
    }
    FormalSum scaled(const BigInt& f) const {
        FormalSum out;
        if (f == 0) return out;
        for (const auto& [c, k] : terms_) out.terms_.emplace(c, k * f);
        return out;
    }

    BigInt coefficient(const CanonicalCode& c) const {
        auto it = terms_.find(c);
        return it == terms_.end() ? BigInt(0) : it->second;
    }

    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    friend FormalSum operator+(FormalSum a, const FormalSum& b) { return a += b; }
    friend FormalSum operator-(FormalSum a, const FormalSum& b) { return a -= b; }
    friend bool operator==(const FormalSum&, const FormalSum&) = default;

private:
    Terms terms_;
};

/// One "code<TAB>coefficient" line per term, sorted by code.
inline std::string to_text(const FormalSum& s) {
    std::string out;
    for (const auto& [c, k] : s.terms()) out += c.text + '\t' + k.str() + '\n';
    return out;
}

inline FormalSum parse_formal_sum(const std::string& text) {
    FormalSum s;
    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw Error(ErrorCode::SyntaxError, "line " + std::to_string(line_no) + ": missing tab", line_no);
        const std::string coef = line.substr(tab + 1);
        BigInt k;
        try {
            if (coef.empty()) throw std::runtime_error("empty");
            const std::size_t start = coef[0] == '-' ? 1 : 0;
            if (start == coef.size() || coef.find_first_not_of("0123456789", start) != std::string::npos)
                throw std::runtime_error("digits");
            k = BigInt(coef);
        } catch (const std::exception&) {
            throw Error(ErrorCode::SyntaxError, "line " + std::to_string(line_no) + ": bad coefficient", line_no);
        }
        s.add(CanonicalCode{line.substr(0, tab)}, k);
    }
    return s;
}

} // namespace legknot
