#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace qweyl {

/// Error with a stable machine-readable code ("NonUnitDivisor", ...).
struct Error : std::runtime_error {
    std::string code;
    Error(std::string c, const std::string& msg)
        : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

using Rational = mpq_class;

/// canonicalized fraction n/d (mpq_class does not reduce on construction)
inline Rational frac(long n, long d = 1) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

inline std::string rat_str(const Rational& q) { return q.get_str(); }

/// Exact scalar in Q(i)[t, t^-1]: a finite sum of terms q * i^e * t^m with
/// q rational, e in {0,1}, m an integer Laurent exponent.  The symbol t is a
/// formal invertible constant and i^2 = -1.  Canonical form keeps one entry
/// per (e, m) key and never stores zero coefficients.
class Scalar {
public:
    // key = (e, m)
    using Key = std::pair<int, long>;
    using Terms = std::map<Key, Rational>;

    Scalar() = default;
    Scalar(long v) { if (v != 0) terms_[{0, 0}] = Rational(v); }
    Scalar(const Rational& q0) {
        Rational q = q0;
        q.canonicalize();
        if (q != 0) terms_[{0, 0}] = q;
    }

    static Scalar zero() { return Scalar(); }
    static Scalar one() { return Scalar(1); }
    static Scalar imag() { return term(1, 1, 0); }
    static Scalar tau(long m = 1) { return term(1, 0, m); }
    /// q * i^e * t^m
    static Scalar term(Rational q, int e, long m) {
        Scalar s;
        q.canonicalize();
        if (q != 0) s.terms_[{e & 1, m}] = std::move(q);
        return s;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const { return *this == one(); }
    /// single-term scalars q*i^e*t^m are the units of the ring
    bool is_unit() const { return terms_.size() == 1; }
    /// free of i and t, i.e. an honest rational
    bool is_rational() const {
        if (terms_.empty()) return true;
        return terms_.size() == 1 && terms_.begin()->first == Key{0, 0};
    }
    Rational to_rational() const {
        if (terms_.empty()) return Rational(0);
        if (!is_rational()) throw Error("NonRealForm", "scalar is not rational: " + str());
        return terms_.begin()->second;
    }

    Scalar operator-() const {
        Scalar r;
        for (auto& [k, q] : terms_) r.terms_[k] = -q;
        return r;
    }
    Scalar& operator+=(const Scalar& o) {
        for (auto& [k, q] : o.terms_) {
            auto it = terms_.find(k);
            if (it == terms_.end()) terms_.emplace(k, q);
            else {
                it->second += q;
                if (it->second == 0) terms_.erase(it);
            }
        }
        return *this;
    }
    Scalar& operator-=(const Scalar& o) { return *this += -o; }
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }

    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        Scalar r;
        for (auto& [ka, qa] : a.terms_)
            for (auto& [kb, qb] : b.terms_) {
                int e = ka.first + kb.first;
                Rational q = qa * qb;
                if (e == 2) { e = 0; q = -q; }   // i*i = -1
                Key k{e, ka.second + kb.second};
                auto it = r.terms_.find(k);
                if (it == r.terms_.end()) r.terms_.emplace(k, q);
                else {
                    it->second += q;
                    if (it->second == 0) r.terms_.erase(it);
                }
            }
        return r;
    }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    /// multiplicative inverse; defined for units only
    Scalar inverse() const {
        if (!is_unit()) throw Error("NonUnitDivisor", "cannot invert " + str());
        auto& [k, q] = *terms_.begin();
        // (q i t^m)^-1 = (1/q)(-i) t^-m since i(-i) = 1
        Rational iq = 1 / q;
        if (k.first == 1) iq = -iq;
        return term(iq, k.first, -k.second);
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

    bool operator==(const Scalar& o) const { return terms_ == o.terms_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }
    bool operator<(const Scalar& o) const { return terms_ < o.terms_; }

    /// canonical text form, e.g. "3/2*i*t^-1 + 1"
    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [k, q] : terms_) {
            Rational aq = abs(q);
            if (first) os << (q < 0 ? "-" : "");
            else os << (q < 0 ? " - " : " + ");
            first = false;
            bool has_sym = k.first == 1 || k.second != 0;
            if (!has_sym || aq != 1) {
                os << rat_str(aq);
                if (has_sym) os << "*";
            }
            if (k.first == 1) {
                os << "i";
                if (k.second != 0) os << "*";
            }
            if (k.second != 0) {
                os << "t";
                if (k.second != 1) os << "^" << k.second;
            }
        }
        return os.str();
    }

private:
    Terms terms_;
};

inline Scalar operator*(long a, const Scalar& b) { return Scalar(a) * b; }
inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

namespace detail {

// parser for the scalar/poly text grammar; shared with poly.hpp
struct Lexer {
    std::string s;
    size_t i = 0;
    explicit Lexer(std::string in) : s(std::move(in)) {}
    void skip_ws() { while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i; }
    bool eof() { skip_ws(); return i >= s.size(); }
    char peek() { skip_ws(); return i < s.size() ? s[i] : '\0'; }
    bool accept(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) { ++i; return true; }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw Error("ParseError", std::string("expected '") + c + "' in: " + s);
    }
    long integer() {
        skip_ws();
        size_t j = i;
        if (j < s.size() && (s[j] == '-' || s[j] == '+')) ++j;
        size_t k = j;
        while (k < s.size() && isdigit((unsigned char)s[k])) ++k;
        if (k == j) throw Error("ParseError", "expected integer in: " + s);
        long v = std::stol(s.substr(i, k - i));
        i = k;
        return v;
    }
    Rational rational() {
        skip_ws();
        size_t j = i;
        if (j < s.size() && (s[j] == '-' || s[j] == '+')) ++j;
        size_t k = j;
        while (k < s.size() && isdigit((unsigned char)s[k])) ++k;
        if (k < s.size() && s[k] == '/') {
            ++k;
            while (k < s.size() && isdigit((unsigned char)s[k])) ++k;
        }
        Rational q(s.substr(i, k - i));
        q.canonicalize();
        i = k;
        return q;
    }
    std::string ident() {
        skip_ws();
        size_t k = i;
        while (k < s.size() && isalpha((unsigned char)s[k])) ++k;
        std::string id = s.substr(i, k - i);
        i = k;
        return id;
    }
};

// one multiplicative factor of a scalar: rational, "i" or "t[^m]"
inline bool scalar_factor(Lexer& lx, Scalar& acc) {
    char c = lx.peek();
    if (isdigit((unsigned char)c)) {
        acc *= Scalar(lx.rational());
        return true;
    }
    if (c == 'i' || c == 't') {
        size_t save = lx.i;
        std::string id = lx.ident();
        if (id == "i") { acc *= Scalar::imag(); return true; }
        if (id == "t") {
            long m = 1;
            if (lx.accept('^')) m = lx.integer();
            acc *= Scalar::tau(m);
            return true;
        }
        lx.i = save;
    }
    return false;
}

} // namespace detail

/// parse the canonical text form produced by Scalar::str()
inline Scalar parse_scalar(const std::string& text) {
    detail::Lexer lx(text);
    Scalar total;
    bool neg = lx.accept('-');
    if (!neg) lx.accept('+');
    while (true) {
        Scalar term = Scalar::one();
        if (!detail::scalar_factor(lx, term))
            throw Error("ParseError", "bad scalar term in: " + text);
        while (lx.accept('*')) {
            if (!detail::scalar_factor(lx, term))
                throw Error("ParseError", "bad scalar factor in: " + text);
        }
        total += neg ? -term : term;
        if (lx.accept('+')) neg = false;
        else if (lx.accept('-')) neg = true;
        else break;
    }
    if (!lx.eof()) throw Error("ParseError", "trailing input in: " + text);
    return total;
}

} // namespace qweyl
