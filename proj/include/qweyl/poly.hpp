#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "scalar.hpp"

namespace qweyl {

/// Variable families.  X/Xi are position and cotangent-fiber coordinates,
/// V/C symbolic vector and cone-point families, U auxiliary deformation
/// parameters, A/Ai a formal scalar with its inverse (a*ai = 1).
enum class VarKind : uint8_t { X = 0, Xi = 1, V = 2, C = 3, U = 4, A = 5, Ai = 6 };

struct Var {
    VarKind kind;
    uint16_t index;  // 1-based for display

    auto operator<=>(const Var&) const = default;
};

inline std::string var_name(Var v) {
    static const char* prefix[] = {"x", "xi", "v", "c", "u", "a", "ai"};
    return prefix[size_t(v.kind)] + std::to_string(v.index);
}

inline std::optional<Var> var_from_name(const std::string& id, long index) {
    static const std::pair<const char*, VarKind> table[] = {
        {"xi", VarKind::Xi}, {"x", VarKind::X},  {"v", VarKind::V},
        {"c", VarKind::C},   {"u", VarKind::U},  {"ai", VarKind::Ai},
        {"a", VarKind::A}};
    for (auto& [p, k] : table)
        if (id == p) return Var{k, uint16_t(index)};
    return std::nullopt;
}

/// Sorted exponent list; no zero exponents stored.
class Monomial {
public:
    using Factors = std::vector<std::pair<Var, int>>;

    Monomial() = default;
    explicit Monomial(Var v, int e = 1) {
        if (e != 0) f_.emplace_back(v, e);
    }

    const Factors& factors() const { return f_; }
    bool empty() const { return f_.empty(); }
    int total_degree() const {
        int d = 0;
        for (auto& [v, e] : f_) d += e;
        return d;
    }
    int degree_in(Var v) const {
        for (auto& [w, e] : f_)
            if (w == v) return e;
        return 0;
    }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        auto a = f_.begin(), b = o.f_.begin();
        while (a != f_.end() || b != o.f_.end()) {
            if (b == o.f_.end() || (a != f_.end() && a->first < b->first)) r.f_.push_back(*a++);
            else if (a == f_.end() || b->first < a->first) r.f_.push_back(*b++);
            else {
                int e = a->second + b->second;
                if (e != 0) r.f_.emplace_back(a->first, e);
                ++a; ++b;
            }
        }
        return r;
    }

    /// divide out v^e; exponent may go to zero but never negative here
    Monomial without(Var v, int e) const {
        Monomial r;
        for (auto& [w, ex] : f_) {
            if (w == v) {
                if (ex - e != 0) r.f_.emplace_back(w, ex - e);
            } else r.f_.emplace_back(w, ex);
        }
        return r;
    }

    bool operator==(const Monomial& o) const { return f_ == o.f_; }

    /// graded lexicographic: total degree first, then exponent vectors
    /// against the fixed global variable order.
    bool grlex_less(const Monomial& o) const {
        int da = total_degree(), db = o.total_degree();
        if (da != db) return da < db;
        auto a = f_.begin(), b = o.f_.begin();
        while (a != f_.end() && b != o.f_.end()) {
            if (a->first != b->first) return b->first < a->first;
            if (a->second != b->second) return a->second < b->second;
            ++a; ++b;
        }
        return a == f_.end() && b != o.f_.end();
    }

private:
    Factors f_;
};

struct MonoLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return a.grlex_less(b); }
};

/// Exact multivariate polynomial with Scalar coefficients.
class Poly {
public:
    using Terms = std::map<Monomial, Scalar, MonoLess>;

    Poly() = default;
    Poly(long v) { *this = constant(Scalar(v)); }
    Poly(const Scalar& s) { *this = constant(s); }

    static Poly zero() { return Poly(); }
    static Poly constant(const Scalar& s) {
        Poly p;
        if (!s.is_zero()) p.t_[Monomial()] = s;
        return p;
    }
    static Poly variable(Var v, int e = 1) {
        Poly p;
        p.t_[Monomial(v, e)] = Scalar::one();
        return p;
    }
    static Poly term(const Scalar& s, const Monomial& m) {
        Poly p;
        if (!s.is_zero()) p.t_[m] = s;
        return p;
    }

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.empty()); }
    Scalar constant_term() const {
        auto it = t_.find(Monomial());
        return it == t_.end() ? Scalar() : it->second;
    }
    int degree() const {
        int d = 0;
        for (auto& [m, s] : t_) d = std::max(d, m.total_degree());
        return d;
    }
    int degree_in(Var v) const {
        int d = 0;
        for (auto& [m, s] : t_) d = std::max(d, m.degree_in(v));
        return d;
    }
    std::vector<Var> variables() const {
        std::vector<Var> vs;
        for (auto& [m, s] : t_)
            for (auto& [v, e] : m.factors())
                if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
        std::sort(vs.begin(), vs.end());
        return vs;
    }

    void add_term(const Monomial& m, const Scalar& s) {
        if (s.is_zero()) return;
        auto it = t_.find(m);
        if (it == t_.end()) t_.emplace(m, s);
        else {
            it->second += s;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    Poly operator-() const {
        Poly r;
        for (auto& [m, s] : t_) r.t_[m] = -s;
        return r;
    }
    Poly& operator+=(const Poly& o) {
        for (auto& [m, s] : o.t_) add_term(m, s);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (auto& [m, s] : o.t_) add_term(m, -s);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        for (auto& [ma, sa] : a.t_)
            for (auto& [mb, sb] : b.t_) r.add_term(ma * mb, sa * sb);
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    friend Poly operator*(const Scalar& s, const Poly& p) { return Poly::constant(s) * p; }
    bool operator==(const Poly& o) const { return t_ == o.t_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly pow(int e) const {
        Poly r = constant(Scalar::one());
        for (int k = 0; k < e; ++k) r *= *this;
        return r;
    }

    /// coefficient of v^e as a polynomial in the remaining variables
    Poly coeff_of(Var v, int e) const {
        Poly r;
        for (auto& [m, s] : t_)
            if (m.degree_in(v) == e) r.add_term(m.without(v, e), s);
        return r;
    }

    Poly derivative(Var v) const {
        Poly r;
        for (auto& [m, s] : t_) {
            int e = m.degree_in(v);
            if (e > 0) r.add_term(m.without(v, 1), Scalar(e) * s);
        }
        return r;
    }

    /// simultaneous substitution var -> poly for every var in the map
    Poly substitute(const std::map<Var, Poly>& sub) const {
        Poly r;
        for (auto& [m, s] : t_) {
            Poly term = constant(s);
            for (auto& [v, e] : m.factors()) {
                auto it = sub.find(v);
                if (it == sub.end()) term *= variable(v, e);
                else term *= it->second.pow(e);
            }
            r += term;
        }
        return r;
    }

    Scalar eval(const std::map<Var, Scalar>& point) const {
        Scalar r;
        for (auto& [m, s] : t_) {
            Scalar term = s;
            for (auto& [v, e] : m.factors()) {
                auto it = point.find(v);
                if (it == point.end())
                    throw Error("ParseError", "eval: unbound variable " + var_name(v));
                for (int k = 0; k < e; ++k) term *= it->second;
            }
            r += term;
        }
        return r;
    }

    /// canonical text form, leading (highest grlex) term first
    std::string str() const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            auto& [m, s] = *it;
            std::string cs = s.str();
            bool bare_minus = false;
            if (!first) {
                if (s.terms().size() == 1 && cs[0] == '-') {
                    os << " - ";
                    cs = cs.substr(1);
                    bare_minus = true;
                } else os << " + ";
            }
            (void)bare_minus;
            first = false;
            if (m.empty()) { os << (s.terms().size() > 1 ? "(" + cs + ")" : cs); continue; }
            if (s.terms().size() > 1) os << "(" << cs << ")*";
            else if (cs != "1") os << cs << "*";
            bool fst = true;
            for (auto& [v, e] : m.factors()) {
                if (!fst) os << "*";
                fst = false;
                os << var_name(v);
                if (e != 1) os << "^" << e;
            }
        }
        return os.str();
    }

private:
    Terms t_;
};

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

namespace detail {

inline bool poly_factor(Lexer& lx, Poly& acc) {
    char ch = lx.peek();
    if (ch == '(') {
        lx.expect('(');
        // parenthesized scalar
        std::string inner;
        int depth = 1;
        while (lx.i < lx.s.size() && depth > 0) {
            char c = lx.s[lx.i];
            if (c == '(') ++depth;
            if (c == ')') { --depth; if (depth == 0) break; }
            inner += c;
            ++lx.i;
        }
        lx.expect(')');
        acc *= Poly::constant(parse_scalar(inner));
        return true;
    }
    if (isdigit((unsigned char)ch)) {
        acc *= Poly::constant(Scalar(lx.rational()));
        return true;
    }
    if (isalpha((unsigned char)ch)) {
        size_t save = lx.i;
        std::string id = lx.ident();
        if (id == "i") { acc *= Poly::constant(Scalar::imag()); return true; }
        if (id == "t") {
            long m = 1;
            if (lx.accept('^')) m = lx.integer();
            acc *= Poly::constant(Scalar::tau(m));
            return true;
        }
        // variable: letters followed by an index
        if (!id.empty() && isdigit((unsigned char)lx.peek())) {
            long idx = lx.integer();
            auto v = var_from_name(id, idx);
            if (v) {
                int e = 1;
                if (lx.accept('^')) e = int(lx.integer());
                acc *= Poly::variable(*v, e);
                return true;
            }
        }
        lx.i = save;
    }
    return false;
}

} // namespace detail

/// parse the canonical text form produced by Poly::str()
inline Poly parse_poly(const std::string& text) {
    detail::Lexer lx(text);
    Poly total;
    bool neg = lx.accept('-');
    if (!neg) lx.accept('+');
    while (true) {
        Poly term = Poly::constant(Scalar::one());
        if (!detail::poly_factor(lx, term))
            throw Error("ParseError", "bad polynomial term in: " + text);
        while (lx.accept('*')) {
            if (!detail::poly_factor(lx, term))
                throw Error("ParseError", "bad polynomial factor in: " + text);
        }
        total += neg ? -term : term;
        if (lx.accept('+')) neg = false;
        else if (lx.accept('-')) neg = true;
        else break;
    }
    if (!lx.eof()) throw Error("ParseError", "trailing input in: " + text);
    return total;
}

/// Long division of p by q with respect to one variable whose leading
/// coefficient in q must be a unit scalar.  Returns {quotient, remainder}
/// with degree_in(remainder, v) < degree_in(q, v).
inline std::pair<Poly, Poly> poly_divmod(const Poly& p, const Poly& q, Var v) {
    int dq = q.degree_in(v);
    Poly lead = q.coeff_of(v, dq);
    if (!lead.is_constant() || lead.constant_term().is_zero() || !lead.constant_term().is_unit())
        throw Error("NonUnitDivisor",
                    "leading coefficient of divisor in " + var_name(v) + " is not a unit");
    Scalar inv = lead.constant_term().inverse();
    Poly rem = p, quot;
    while (true) {
        int dr = rem.degree_in(v);
        if (rem.is_zero() || dr < dq) break;
        Poly c = inv * rem.coeff_of(v, dr);
        Poly shift = c * Poly::variable(v, dr - dq);
        quot += shift;
        rem -= shift * q;
    }
    return {quot, rem};
}

/// the division variable: first variable (global order) whose squared
/// coefficient in q is a nonzero unit scalar
inline std::optional<Var> quadratic_division_var(const Poly& q) {
    for (Var v : q.variables()) {
        Poly c = q.coeff_of(v, 2);
        if (c.is_constant() && !c.constant_term().is_zero() && c.constant_term().is_unit())
            return v;
    }
    return std::nullopt;
}

/// exact trial division: is p a multiple of q?  Returns the witness quotient.
inline std::pair<bool, Poly> divides(const Poly& q, const Poly& p) {
    if (q.is_zero() || q.degree() < 1)
        throw Error("NonUnitDivisor", "divisor must be nonzero of degree >= 1");
    if (p.is_zero()) return {true, Poly()};
    auto v = quadratic_division_var(q);
    if (!v) throw Error("NonUnitDivisor", "no usable division variable in " + q.str());
    auto [quot, rem] = poly_divmod(p, q, *v);
    return {rem.is_zero(), quot};
}

/// Diagonal quadratic form of signature (p, q): Q(x) = sum eps_i x_i^2 with
/// eps_i = +1 for i <= p and -1 after; the associated bilinear pairing is the
/// full polarization <x, y> = 2 sum eps_i x_i y_i, so <x, x> = 2 Q(x).
struct QuadraticForm {
    int p = 0, q = 0;

    int dim() const { return p + q; }
    int eps(int i) const { return i <= p ? 1 : -1; }  // 1-based

    Poly poly(VarKind kind = VarKind::X) const {
        Poly r;
        for (int i = 1; i <= dim(); ++i)
            r += Scalar(eps(i)) * Poly::variable(Var{kind, uint16_t(i)}, 2);
        return r;
    }
    /// Q'(xi): the same form on the fiber coordinates
    Poly dual_poly() const { return poly(VarKind::Xi); }

    template <class Vec>
    Rational value(const Vec& x) const {
        Rational r = 0;
        for (int i = 1; i <= dim(); ++i) r += eps(i) * x[i - 1] * x[i - 1];
        return r;
    }
    template <class Vec>
    Rational pairing(const Vec& x, const Vec& y) const {
        Rational r = 0;
        for (int i = 1; i <= dim(); ++i) r += 2 * eps(i) * x[i - 1] * y[i - 1];
        return r;
    }
};

/// canonical remainder of p modulo the principal ideal (Q) obtained by
/// eliminating elim_var: the result has degree < 2 in that variable and
/// differs from p by a multiple of Q.
inline Poly reduce_mod_quadratic(const Poly& p, const QuadraticForm& Q, Var elim_var) {
    auto [quot, rem] = poly_divmod(p, Q.poly(elim_var.kind), elim_var);
    (void)quot;
    return rem;
}

/// Exact rational point on the cone Q = 0, c != 0, found by intersecting a
/// line through a known isotropic point with the quadric: the second root of
/// Q(c0 + s d) is s = -<c0, d>/Q(d) with the polarization pairing.
inline std::vector<Rational> rational_cone_point(const QuadraticForm& Q, uint64_t seed) {
    if (Q.p < 1 || Q.q < 1)
        throw Error("NoRationalPoint", "form of signature (" + std::to_string(Q.p) + "," +
                                           std::to_string(Q.q) + ") is anisotropic over Q");
    int n = Q.dim();
    std::vector<Rational> c0(n, 0);
    c0[0] = 1;
    c0[Q.p] = 1;  // eps = -1 slot, so Q(c0) = 0
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    for (int attempt = 0; attempt < 256; ++attempt) {
        std::vector<Rational> d(n);
        for (auto& x : d) x = frac(num(rng), den(rng));
        Rational qd = Q.value(d);
        if (qd == 0) continue;
        Rational s = -Q.pairing(c0, d) / qd;
        std::vector<Rational> c(n);
        bool zero = true;
        for (int i = 0; i < n; ++i) {
            c[i] = c0[i] + s * d[i];
            if (c[i] != 0) zero = false;
        }
        if (zero) continue;
        if (Q.value(c) != 0) throw Error("NoRationalPoint", "internal: parametrization failed");
        return c;
    }
    throw Error("NoRationalPoint", "sampling failed to find a usable direction");
}

} // namespace qweyl
