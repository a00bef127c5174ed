#pragma once

#include "lie.hpp"
#include "poisson.hpp"

namespace qweyl {

using QVec = std::vector<Rational>;

inline Rational dot(const QVec& a, const QVec& b) {
    Rational r = 0;
    for (size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
    return r;
}
inline QVec vec_mat(const QVec& v, const RatMat& A) {
    QVec r(A[0].size(), 0);
    for (size_t j = 0; j < r.size(); ++j)
        for (size_t i = 0; i < v.size(); ++i) r[j] += v[i] * A[i][j];
    return r;
}

/// Element (lambda, h) of the small group V^vee x GL_V with the product
/// (lambda, h)(lambda', h') = (lambda + lambda' o h, h h'); under the dot
/// pairing the composed covector is lambda' h^T.
struct SmallModElement {
    QVec lambda;
    RatMat h;
};

inline SmallModElement small_mod_product(const SmallModElement& a, const SmallModElement& b) {
    RatMat hT(a.h.size(), std::vector<Rational>(a.h.size()));
    for (size_t i = 0; i < a.h.size(); ++i)
        for (size_t j = 0; j < a.h.size(); ++j) hT[i][j] = a.h[j][i];
    SmallModElement r;
    r.lambda = a.lambda;
    QVec add = vec_mat(b.lambda, hT);
    for (size_t i = 0; i < r.lambda.size(); ++i) r.lambda[i] += add[i];
    r.h = mat_mul(a.h, b.h);
    return r;
}

/// Heisenberg group element ((v, lambda), t) with the law
/// (w1,t1)(w2,t2) = (w1+w2, t1+t2+<w1,w2>_sympl/2), where the symplectic
/// form is <(v1,l1),(v2,l2)> = <v2,l1> - <v1,l2>.
struct HeisElement {
    QVec v, lambda;
    Rational t = 0;
};

inline Rational symplectic_form(const HeisElement& a, const HeisElement& b) {
    return dot(b.v, a.lambda) - dot(a.v, b.lambda);
}

inline HeisElement heis_product(const HeisElement& a, const HeisElement& b) {
    HeisElement r;
    r.v = a.v;
    r.lambda = a.lambda;
    for (size_t i = 0; i < b.v.size(); ++i) {
        r.v[i] += b.v[i];
        r.lambda[i] += b.lambda[i];
    }
    r.t = a.t + b.t + symplectic_form(a, b) / 2;
    return r;
}

/// Projective operator f -> psi(phase(x)) f((x+v) g) with an exact phase
/// argument polynomial of degree <= 2 over Q.
struct PhaseOp {
    int n = 0;
    QVec v;
    Poly phase;  // polynomial in x_1..x_n with rational coefficients
    RatMat g;    // linear part, identity when empty

    static PhaseOp identity(int n) {
        PhaseOp op;
        op.n = n;
        op.v.assign(n, 0);
        return op;
    }
    bool is_pure() const { return g.empty(); }
    RatMat linear() const {
        if (!g.empty()) return g;
        RatMat id(n, std::vector<Rational>(n, 0));
        for (int i = 0; i < n; ++i) id[i][i] = 1;
        return id;
    }
    bool operator==(const PhaseOp& o) const {
        return n == o.n && v == o.v && phase == o.phase && linear() == o.linear();
    }
};

/// the operator of a Heisenberg element: psi(<x,lambda> + <v,lambda>/2 + t) f(x+v)
inline PhaseOp heis_operator(const HeisElement& h) {
    PhaseOp op;
    op.n = int(h.v.size());
    op.v = h.v;
    Poly phase = Poly::constant(Scalar(dot(h.v, h.lambda) / 2 + h.t));
    for (int i = 0; i < op.n; ++i)
        phase += Scalar(h.lambda[i]) * Poly::variable(Var{VarKind::X, uint16_t(i + 1)});
    op.phase = phase;
    return op;
}

/// composition (apply b first):  (a o b) f = a(b(f))
inline PhaseOp compose(const PhaseOp& a, const PhaseOp& b) {
    PhaseOp r;
    r.n = a.n;
    RatMat ga = a.linear(), gb = b.linear();
    // (x + v') g' = (((x + v_a) g_a) + v_b) g_b
    RatMat ga_inv = rat_inverse(ga);
    QVec shift = vec_mat(b.v, ga_inv);
    r.v = a.v;
    for (int i = 0; i < r.n; ++i) r.v[i] += shift[i];
    r.g = mat_mul(ga, gb);
    // phase': phase_a(x) + phase_b((x + v_a) g_a)
    std::map<Var, Poly> sub;
    for (int j = 0; j < r.n; ++j) {
        Poly img;
        for (int i = 0; i < r.n; ++i)
            img += Scalar(ga[i][j]) *
                   (Poly::variable(Var{VarKind::X, uint16_t(i + 1)}) +
                    Poly::constant(Scalar(a.v[i])));
        sub[Var{VarKind::X, uint16_t(j + 1)}] = img;
    }
    r.phase = a.phase + b.phase.substitute(sub);
    return r;
}

/// The Heisenberg representation law.  The operator map is an
/// anti-homomorphism for the printed group law (the action is a right
/// action), so composing the operators of g1 and g2 must reproduce the
/// operator of the product g2 g1.  Exact equality of translation vectors
/// and phase polynomials.
inline bool heis_rep_check(const HeisElement& g1, const HeisElement& g2) {
    PhaseOp lhs = compose(heis_operator(g1), heis_operator(g2));
    PhaseOp rhs = heis_operator(heis_product(g2, g1));
    return lhs == rhs;
}

/// phase defect of the same-order comparison: the phase of R(g1) o R(g2)
/// minus the phase of R(g1 g2); it equals minus the symplectic cocycle
inline Poly heis_rep_defect(const HeisElement& g1, const HeisElement& g2) {
    PhaseOp lhs = compose(heis_operator(g1), heis_operator(g2));
    PhaseOp rhs = heis_operator(heis_product(g1, g2));
    return lhs.phase - rhs.phase;
}

/// Affine automorphism of the Weyl algebra on the span {x_1..x_n, d_1..d_n, 1}
/// over Scalar.  Column k holds the image of basis element k; the last basis
/// element is the unit and is always fixed.
struct WeylAutomorphism {
    int n = 0;
    std::vector<std::vector<Scalar>> col;  // (2n+1) x (2n+1), col[k][j]

    static WeylAutomorphism identity(int n) {
        WeylAutomorphism a;
        a.n = n;
        a.col.assign(2 * n + 1, std::vector<Scalar>(2 * n + 1, Scalar()));
        for (int k = 0; k <= 2 * n; ++k) a.col[k][k] = Scalar::one();
        return a;
    }

    /// image of basis element k as a Weyl-algebra element
    WeylElement image(int k) const {
        WeylElement w(n);
        for (int j = 0; j < n; ++j) {
            Multi a(n, 0), b(n, 0);
            a[j] = 1;
            w.add(a, Multi(n, 0), col[k][j]);
            b[j] = 1;
            w.add(Multi(n, 0), b, col[k][n + j]);
        }
        w += WeylElement::constant(n, col[k][2 * n]);
        return w;
    }

    bool operator==(const WeylAutomorphism& o) const { return n == o.n && col == o.col; }
};

/// a then b composition is b(a(.)); compose(a, b) applies b first
inline WeylAutomorphism compose(const WeylAutomorphism& a, const WeylAutomorphism& b) {
    WeylAutomorphism r = WeylAutomorphism::identity(a.n);
    int d = 2 * a.n + 1;
    for (int k = 0; k < d; ++k) {
        std::vector<Scalar> out(d, Scalar());
        for (int j = 0; j < d; ++j) {
            if (b.col[k][j].is_zero()) continue;
            for (int i = 0; i < d; ++i) out[i] += b.col[k][j] * a.col[j][i];
        }
        r.col[k] = std::move(out);
    }
    return r;
}

struct Generator {
    enum class Kind { Heisenberg, GL, Sym, Fourier } kind;
    QVec v, lambda;  // heisenberg data
    RatMat mat;      // gl / sym matrix
};

/// the automorphism attached to one generator of the modulation group
inline WeylAutomorphism generator_automorphism(const Generator& g, int n) {
    WeylAutomorphism a = WeylAutomorphism::identity(n);
    Scalar it = Scalar::imag() * Scalar::tau();
    switch (g.kind) {
        case Generator::Kind::Heisenberg:
            // x_i -> x_i + v_i, d_i -> d_i - i t lambda_i
            for (int i = 0; i < n; ++i) {
                a.col[i][2 * n] = Scalar(g.v[i]);
                a.col[n + i][2 * n] = -(it * Scalar(g.lambda[i]));
            }
            break;
        case Generator::Kind::GL: {
            RatMat Ainv = rat_inverse(g.mat);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    a.col[i][j] = Scalar(g.mat[j][i]);          // x_i -> sum x_j A_ji
                    a.col[n + i][n + j] = Scalar(Ainv[i][j]);   // d_i -> sum d_j (A^-1)_ij
                }
            break;
        }
        case Generator::Kind::Sym: {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (g.mat[i][j] != g.mat[j][i])
                        throw Error("NotSymmetric", "sym generator needs a symmetric matrix");
            // d_i -> d_i - i t (J x)_i
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    a.col[n + i][j] = -(it * Scalar(g.mat[i][j]));
            break;
        }
        case Generator::Kind::Fourier:
            for (int i = 0; i < n; ++i) {
                a.col[i][i] = Scalar();
                a.col[n + i][n + i] = Scalar();
                a.col[i][n + i] = it.inverse();   // x_i -> (i t)^-1 d_i
                a.col[n + i][i] = -it;            // d_i -> -(i t) x_i
            }
            break;
    }
    return a;
}

/// composite automorphism of a word; the rightmost generator acts first
inline WeylAutomorphism word_act(const std::vector<Generator>& word, int n) {
    WeylAutomorphism acc = WeylAutomorphism::identity(n);
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        acc = compose(generator_automorphism(*it, n), acc);
    return acc;
}

/// does the automorphism preserve all commutators of the basis?
inline bool preserves_brackets(const WeylAutomorphism& a) {
    int d = 2 * a.n + 1;
    std::vector<WeylElement> basis;
    for (int i = 1; i <= a.n; ++i) basis.push_back(WeylElement::x(a.n, i));
    for (int i = 1; i <= a.n; ++i) basis.push_back(WeylElement::d(a.n, i));
    basis.push_back(WeylElement::one(a.n));
    std::vector<WeylElement> img;
    for (int k = 0; k < d; ++k) img.push_back(a.image(k));
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            WeylElement br = commutator(basis[i], basis[j]);
            // brackets of the basis are central constants: map them through a
            Scalar c = br.is_zero() ? Scalar() : br.terms().begin()->second;
            WeylElement lhs = commutator(img[i], img[j]);
            if (lhs != WeylElement::constant(a.n, c)) return false;
        }
    return true;
}

/// classical pullback of a generator on functions of (x, xi): the point maps
/// are (a,b) h = ((a+v) g, (b+lambda) g^-T) for the parabolic part and
/// (a,b) w = (-b, a) for the Fourier generator
inline std::map<Var, Poly> classical_pullback(const Generator& g, int n) {
    std::map<Var, Poly> sub;
    auto xv = [](int i) { return Poly::variable(Var{VarKind::X, uint16_t(i)}); };
    auto xiv = [](int i) { return Poly::variable(Var{VarKind::Xi, uint16_t(i)}); };
    switch (g.kind) {
        case Generator::Kind::Heisenberg:
            for (int i = 1; i <= n; ++i) {
                sub[Var{VarKind::X, uint16_t(i)}] = xv(i) + Poly::constant(Scalar(g.v[i - 1]));
                sub[Var{VarKind::Xi, uint16_t(i)}] =
                    xiv(i) + Poly::constant(Scalar(g.lambda[i - 1]));
            }
            break;
        case Generator::Kind::GL: {
            RatMat Ainv = rat_inverse(g.mat);
            for (int i = 1; i <= n; ++i) {
                Poly px, pxi;
                for (int j = 1; j <= n; ++j) {
                    px += Scalar(g.mat[j - 1][i - 1]) * xv(j);
                    pxi += Scalar(Ainv[i - 1][j - 1]) * xiv(j);  // (xi A^-T)_i
                }
                sub[Var{VarKind::X, uint16_t(i)}] = px;
                sub[Var{VarKind::Xi, uint16_t(i)}] = pxi;
            }
            break;
        }
        case Generator::Kind::Sym:
            for (int i = 1; i <= n; ++i) {
                Poly shift;
                for (int j = 1; j <= n; ++j) shift += Scalar(g.mat[i - 1][j - 1]) * xv(j);
                sub[Var{VarKind::Xi, uint16_t(i)}] = xiv(i) + shift;
            }
            break;
        case Generator::Kind::Fourier:
            for (int i = 1; i <= n; ++i) {
                sub[Var{VarKind::X, uint16_t(i)}] = -xiv(i);
                sub[Var{VarKind::Xi, uint16_t(i)}] = xv(i);
            }
            break;
    }
    return sub;
}

/// The semiclassical compatibility check.  With the rescaling conjugator
/// rho: xi_i -> -(i t) xi_i fixed once, verify for every basis element D of
/// the Heisenberg span that
///   Sigma(g . D) = rho^-1( gbar( rho( Sigma(D) ) ) )
/// where gbar is the classical pullback above.  Exact, zero tolerance.
inline bool semiclassical_check(const Generator& g, int n) {
    WeylAutomorphism a = generator_automorphism(g, n);
    Scalar mit = -(Scalar::imag() * Scalar::tau());

    std::map<Var, Poly> rho, rho_inv;
    for (int i = 1; i <= n; ++i) {
        Var xi{VarKind::Xi, uint16_t(i)};
        rho[xi] = mit * Poly::variable(xi);
        rho_inv[xi] = mit.inverse() * Poly::variable(xi);
    }
    auto gbar = classical_pullback(g, n);

    // Sigma on the affine span: x_i -> x_i, d_i -> xi_i, 1 -> 1
    auto sigma_affine = [&](int k) {
        Poly r;
        for (int j = 0; j < n; ++j) {
            r += a.col[k][j] * Poly::variable(Var{VarKind::X, uint16_t(j + 1)});
            r += a.col[k][n + j] * Poly::variable(Var{VarKind::Xi, uint16_t(j + 1)});
        }
        r += Poly::constant(a.col[k][2 * n]);
        return r;
    };

    for (int k = 0; k <= 2 * n; ++k) {
        Poly sigmaD = k < n    ? Poly::variable(Var{VarKind::X, uint16_t(k + 1)})
                      : k < 2 * n ? Poly::variable(Var{VarKind::Xi, uint16_t(k - n + 1)})
                                  : Poly(1);
        Poly rhs = sigmaD.substitute(rho).substitute(gbar).substitute(rho_inv);
        if (sigma_affine(k) != rhs) return false;
    }
    return true;
}

/// tiny textual word DSL:
///   "F; gl[[1,1],[0,1]]; sym[[2,0],[0,0]]; heis(v=[1,0], l=[0,3])"
inline std::vector<Generator> parse_word(const std::string& text, int n) {
    std::vector<Generator> word;
    detail::Lexer lx(text);
    auto parse_vec = [&]() {
        QVec v;
        lx.expect('[');
        if (!lx.accept(']')) {
            do v.push_back(lx.rational());
            while (lx.accept(','));
            lx.expect(']');
        }
        if (int(v.size()) != n) throw Error("ParseError", "vector arity mismatch in: " + text);
        return v;
    };
    auto parse_mat = [&]() {
        RatMat m;
        lx.expect('[');
        do {
            lx.expect('[');
            std::vector<Rational> row;
            do row.push_back(lx.rational());
            while (lx.accept(','));
            lx.expect(']');
            m.push_back(std::move(row));
        } while (lx.accept(','));
        lx.expect(']');
        if (int(m.size()) != n || int(m[0].size()) != n)
            throw Error("ParseError", "matrix arity mismatch in: " + text);
        return m;
    };
    while (!lx.eof()) {
        std::string id = lx.ident();
        Generator g;
        if (id == "F" || id == "f") {
            g.kind = Generator::Kind::Fourier;
        } else if (id == "gl") {
            g.kind = Generator::Kind::GL;
            g.mat = parse_mat();
        } else if (id == "sym") {
            g.kind = Generator::Kind::Sym;
            g.mat = parse_mat();
        } else if (id == "heis") {
            g.kind = Generator::Kind::Heisenberg;
            lx.expect('(');
            g.v.assign(n, 0);
            g.lambda.assign(n, 0);
            do {
                std::string key = lx.ident();
                lx.expect('=');
                if (key == "v") g.v = parse_vec();
                else if (key == "l") g.lambda = parse_vec();
                else throw Error("ParseError", "unknown key '" + key + "' in: " + text);
            } while (lx.accept(','));
            lx.expect(')');
        } else {
            throw Error("ParseError", "unknown generator '" + id + "' in: " + text);
        }
        word.push_back(std::move(g));
        if (!lx.accept(';')) break;
    }
    if (!lx.eof()) throw Error("ParseError", "trailing input in: " + text);
    return word;
}

} // namespace qweyl
