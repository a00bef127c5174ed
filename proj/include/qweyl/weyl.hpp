#pragma once

#include <vector>

#include "poly.hpp"

namespace qweyl {

using Multi = std::vector<int>;

inline int multi_abs(const Multi& m) {
    int s = 0;
    for (int e : m) s += e;
    return s;
}

/// Element of the Weyl algebra A_n over Scalar, stored in normal order:
/// sum of c_{ab} x^a d^b with every multiplication operator to the left of
/// every derivative.  Normal order is the canonical form, so equality of
/// operators is equality of coefficient maps.
class WeylElement {
public:
    using Key = std::pair<Multi, Multi>;
    using Terms = std::map<Key, Scalar>;

    explicit WeylElement(int n = 0) : n_(n) {}

    static WeylElement constant(int n, const Scalar& s) {
        WeylElement w(n);
        w.add(Multi(n, 0), Multi(n, 0), s);
        return w;
    }
    static WeylElement one(int n) { return constant(n, Scalar::one()); }
    /// multiplication by x_i (1-based)
    static WeylElement x(int n, int i) {
        WeylElement w(n);
        Multi a(n, 0);
        a[i - 1] = 1;
        w.add(a, Multi(n, 0), Scalar::one());
        return w;
    }
    /// d/dx_i (1-based)
    static WeylElement d(int n, int i) {
        WeylElement w(n);
        Multi b(n, 0);
        b[i - 1] = 1;
        w.add(Multi(n, 0), b, Scalar::one());
        return w;
    }
    /// multiplication by a polynomial in x_1..x_n
    static WeylElement mul_by(int n, const Poly& f) {
        WeylElement w(n);
        for (auto& [m, s] : f.terms()) {
            Multi a(n, 0);
            for (auto& [v, e] : m.factors()) {
                if (v.kind != VarKind::X || v.index > n)
                    throw Error("ParseError", "mul_by: variable outside x_1..x_n");
                a[v.index - 1] = e;
            }
            w.add(a, Multi(n, 0), s);
        }
        return w;
    }

    int n() const { return n_; }
    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    /// filtration order: max |b| over stored terms (-1 for the zero operator)
    int order() const {
        int o = -1;
        for (auto& [k, s] : t_) o = std::max(o, multi_abs(k.second));
        return o;
    }

    void add(const Multi& a, const Multi& b, const Scalar& s) {
        if (s.is_zero()) return;
        Key k{a, b};
        auto it = t_.find(k);
        if (it == t_.end()) t_.emplace(std::move(k), s);
        else {
            it->second += s;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    WeylElement operator-() const {
        WeylElement r(n_);
        for (auto& [k, s] : t_) r.t_[k] = -s;
        return r;
    }
    WeylElement& operator+=(const WeylElement& o) {
        check(o);
        for (auto& [k, s] : o.t_) add(k.first, k.second, s);
        return *this;
    }
    WeylElement& operator-=(const WeylElement& o) {
        check(o);
        for (auto& [k, s] : o.t_) add(k.first, k.second, -s);
        return *this;
    }
    friend WeylElement operator+(WeylElement a, const WeylElement& b) { return a += b; }
    friend WeylElement operator-(WeylElement a, const WeylElement& b) { return a -= b; }
    friend WeylElement operator*(const Scalar& s, const WeylElement& w) {
        WeylElement r(w.n_);
        for (auto& [k, c] : w.t_) r.add(k.first, k.second, s * c);
        return r;
    }
    bool operator==(const WeylElement& o) const { return n_ == o.n_ && t_ == o.t_; }
    bool operator!=(const WeylElement& o) const { return !(*this == o); }

private:
    void check(const WeylElement& o) const {
        if (n_ != o.n_) throw Error("ParseError", "mixed variable counts in Weyl algebra");
    }

    int n_;
    Terms t_;
};

namespace detail {

inline mpz_class binom(int n, int k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}
inline mpz_class factorial(int k) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), k);
    return r;
}

// iterate k over the box 0 <= k <= lim componentwise
template <class F>
inline void box_iterate(const Multi& lim, F&& fn) {
    Multi k(lim.size(), 0);
    while (true) {
        fn(k);
        size_t j = 0;
        while (j < k.size()) {
            if (k[j] < lim[j]) { ++k[j]; break; }
            k[j] = 0;
            ++j;
        }
        if (j == k.size()) break;
    }
}

} // namespace detail

/// Normal-ordered product.  Reordering uses the one-variable identity
/// d^b x^a = sum_k C(b,k) C(a,k) k! x^{a-k} d^{b-k} applied componentwise.
inline WeylElement wmul(const WeylElement& A, const WeylElement& B) {
    if (A.n() != B.n()) throw Error("ParseError", "mixed variable counts in wmul");
    int n = A.n();
    WeylElement r(n);
    for (auto& [ka, sa] : A.terms())
        for (auto& [kb, sb] : B.terms()) {
            const Multi &a = ka.first, &b = ka.second, &ap = kb.first, &bp = kb.second;
            Multi lim(n);
            for (int j = 0; j < n; ++j) lim[j] = std::min(b[j], ap[j]);
            detail::box_iterate(lim, [&](const Multi& k) {
                mpz_class coef = 1;
                for (int j = 0; j < n; ++j)
                    coef *= detail::binom(b[j], k[j]) * detail::binom(ap[j], k[j]) *
                            detail::factorial(k[j]);
                Multi aout(n), bout(n);
                for (int j = 0; j < n; ++j) {
                    aout[j] = a[j] + ap[j] - k[j];
                    bout[j] = b[j] + bp[j] - k[j];
                }
                r.add(aout, bout, Scalar::term(Rational(coef), 0, 0) * sa * sb);
            });
        }
    return r;
}

inline WeylElement commutator(const WeylElement& A, const WeylElement& B) {
    return wmul(A, B) - wmul(B, A);
}

/// exact action of D on a polynomial in x_1..x_n
inline Poly apply(const WeylElement& D, const Poly& f) {
    int n = D.n();
    Poly out;
    for (auto& [k, s] : D.terms()) {
        const Multi &a = k.first, &b = k.second;
        for (auto& [m, c] : f.terms()) {
            Multi e(n, 0);
            bool ok = true;
            for (auto& [v, ex] : m.factors()) {
                if (v.kind != VarKind::X || v.index > n) { ok = false; break; }
                e[v.index - 1] = ex;
            }
            if (!ok) throw Error("ParseError", "apply: polynomial not in x_1..x_n");
            mpz_class coef = 1;
            for (int j = 0; j < n && coef != 0; ++j) {
                if (e[j] < b[j]) { coef = 0; break; }
                for (int s2 = 0; s2 < b[j]; ++s2) coef *= e[j] - s2;
            }
            if (coef == 0) continue;
            Monomial mono;
            for (int j = 0; j < n; ++j) {
                int ex = e[j] - b[j] + a[j];
                if (ex != 0) mono = mono * Monomial(Var{VarKind::X, uint16_t(j + 1)}, ex);
            }
            out.add_term(mono, Scalar::term(Rational(coef), 0, 0) * s * c);
        }
    }
    return out;
}

/// principal symbol: the top-order part with d_i replaced by xi_i
inline Poly symbol(const WeylElement& D) {
    if (D.is_zero()) throw Error("ZeroSymbol", "the zero operator has no principal symbol");
    int top = D.order();
    Poly r;
    for (auto& [k, s] : D.terms()) {
        if (multi_abs(k.second) != top) continue;
        Monomial m;
        for (int j = 0; j < D.n(); ++j) {
            if (k.first[j]) m = m * Monomial(Var{VarKind::X, uint16_t(j + 1)}, k.first[j]);
            if (k.second[j]) m = m * Monomial(Var{VarKind::Xi, uint16_t(j + 1)}, k.second[j]);
        }
        r.add_term(m, s);
    }
    return r;
}

/// The Fourier conjugation automorphism on generators:
/// x_j -> (i t)^-1 d_j,  d_j -> -(i t) x_j, extended multiplicatively and
/// re-normal-ordered.  Applying it twice gives the antipode x -> -x, d -> -d.
inline WeylElement fourier_conjugate(const WeylElement& D) {
    int n = D.n();
    Scalar it = Scalar::imag() * Scalar::tau();
    Scalar it_inv = it.inverse();
    WeylElement r(n);
    for (auto& [k, s] : D.terms()) {
        const Multi &a = k.first, &b = k.second;
        // x^a d^b  ->  (it)^{-|a|} (-it)^{|b|} * normal_order(d^a x^b)
        Scalar pref = s;
        for (int c = 0; c < multi_abs(a); ++c) pref *= it_inv;
        for (int c = 0; c < multi_abs(b); ++c) pref *= -it;
        Multi lim(n);
        for (int j = 0; j < n; ++j) lim[j] = std::min(a[j], b[j]);
        detail::box_iterate(lim, [&](const Multi& kk) {
            mpz_class coef = 1;
            for (int j = 0; j < n; ++j)
                coef *= detail::binom(a[j], kk[j]) * detail::binom(b[j], kk[j]) *
                        detail::factorial(kk[j]);
            Multi aout(n), bout(n);
            for (int j = 0; j < n; ++j) {
                aout[j] = b[j] - kk[j];
                bout[j] = a[j] - kk[j];
            }
            r.add(aout, bout, Scalar::term(Rational(coef), 0, 0) * pref);
        });
    }
    return r;
}

/// collect the coefficient polynomial of d^b for every b present
inline std::map<Multi, Poly> derivative_coefficients(const WeylElement& D) {
    std::map<Multi, Poly> out;
    for (auto& [k, s] : D.terms()) {
        Monomial m;
        for (int j = 0; j < D.n(); ++j)
            if (k.first[j]) m = m * Monomial(Var{VarKind::X, uint16_t(j + 1)}, k.first[j]);
        out[k.second].add_term(m, s);
    }
    return out;
}

/// membership in the kernel ideal K = {D : every derivative-coefficient
/// polynomial lies in the principal ideal (Q)}
inline bool in_kernel_K(const WeylElement& D, const QuadraticForm& Q) {
    Poly Qp = Q.poly();
    for (auto& [b, f] : derivative_coefficients(D)) {
        if (f.is_zero()) continue;
        if (!divides(Qp, f).first) return false;
    }
    return true;
}

/// text form "x1^2 d1 + 3*i*t*d2"; round-trips exactly through parse_weyl
inline std::string weyl_str(const WeylElement& D) {
    if (D.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [k, s0] : D.terms()) {
        Scalar s = s0;
        std::string cs0 = s.str();
        if (!first) {
            if (s.terms().size() == 1 && cs0[0] == '-') {
                os << " - ";
                s = -s;
            } else os << " + ";
        }
        first = false;
        std::vector<std::string> factors;
        for (int j = 0; j < D.n(); ++j)
            if (k.first[j])
                factors.push_back("x" + std::to_string(j + 1) +
                                  (k.first[j] != 1 ? "^" + std::to_string(k.first[j]) : ""));
        for (int j = 0; j < D.n(); ++j)
            if (k.second[j])
                factors.push_back("d" + std::to_string(j + 1) +
                                  (k.second[j] != 1 ? "^" + std::to_string(k.second[j]) : ""));
        std::string cs = s.str();
        bool needs_coef = factors.empty() || cs != "1";
        std::string joined;
        for (size_t i = 0; i < factors.size(); ++i) {
            if (i) joined += " ";
            joined += factors[i];
        }
        if (needs_coef) {
            if (s.terms().size() > 1) os << "(" << cs << ")";
            else os << cs;
            if (!factors.empty()) os << "*";
        }
        os << joined;
    }
    return os.str();
}

inline WeylElement parse_weyl(const std::string& text, int n) {
    detail::Lexer lx(text);
    WeylElement total(n);
    if (lx.peek() == '0') {
        lx.expect('0');
        if (lx.eof()) return total;
        throw Error("ParseError", "trailing input in: " + text);
    }
    bool neg = lx.accept('-');
    if (!neg) lx.accept('+');
    while (true) {
        Scalar coef = Scalar::one();
        Multi a(n, 0), b(n, 0);
        bool saw_factor = false;
        while (true) {
            char c = lx.peek();
            if (c == '(') {
                ++lx.i;
                std::string inner;
                int depth = 1;
                while (lx.i < lx.s.size() && depth > 0) {
                    char ch = lx.s[lx.i];
                    if (ch == '(') ++depth;
                    if (ch == ')') { --depth; if (depth == 0) break; }
                    inner += ch;
                    ++lx.i;
                }
                lx.expect(')');
                coef *= parse_scalar(inner);
                saw_factor = true;
            } else if (isdigit((unsigned char)c)) {
                coef *= Scalar(lx.rational());
                saw_factor = true;
            } else if (isalpha((unsigned char)c)) {
                size_t save = lx.i;
                std::string id = lx.ident();
                if (id == "i" && !isdigit((unsigned char)lx.peek())) {
                    coef *= Scalar::imag();
                } else if (id == "t" && !isdigit((unsigned char)lx.peek())) {
                    long m = 1;
                    if (lx.accept('^')) m = lx.integer();
                    coef *= Scalar::tau(m);
                } else if ((id == "x" || id == "d") && isdigit((unsigned char)lx.peek())) {
                    long idx = lx.integer();
                    if (idx < 1 || idx > n) throw Error("ParseError", "index out of range: " + text);
                    int e = 1;
                    if (lx.accept('^')) e = int(lx.integer());
                    (id == "x" ? a : b)[idx - 1] += e;
                } else {
                    lx.i = save;
                    throw Error("ParseError", "unexpected token in: " + text);
                }
                saw_factor = true;
            } else break;
            if (!lx.accept('*')) {
                // factors may also be separated by spaces
                char nx = lx.peek();
                if (!(isalpha((unsigned char)nx) || nx == '(')) break;
            }
        }
        if (!saw_factor) throw Error("ParseError", "empty term in: " + text);
        total.add(a, b, neg ? -coef : coef);
        if (lx.accept('+')) neg = false;
        else if (lx.accept('-')) neg = true;
        else break;
    }
    if (!lx.eof()) throw Error("ParseError", "trailing input in: " + text);
    return total;
}

} // namespace qweyl
