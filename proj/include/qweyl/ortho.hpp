#pragma once

#include "lie.hpp"
#include "poly.hpp"

namespace qweyl {

/// Matrix over Poly.  Row vectors act on the right (u -> u g), so a group
/// element of the similitude group satisfies g J g^T = nu J; the transposed
/// relation g^T J g = nu J holds as well and both are exercised in tests.
struct PolyMatrix {
    int rows = 0, cols = 0;
    std::vector<Poly> e;

    PolyMatrix() = default;
    PolyMatrix(int r, int c) : rows(r), cols(c), e(size_t(r) * c) {}

    static PolyMatrix identity(int n) {
        PolyMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = Poly(1);
        return m;
    }

    Poly& at(int i, int j) { return e[size_t(i) * cols + j]; }
    const Poly& at(int i, int j) const { return e[size_t(i) * cols + j]; }

    bool is_zero() const {
        for (auto& p : e)
            if (!p.is_zero()) return false;
        return true;
    }
    bool operator==(const PolyMatrix& o) const {
        return rows == o.rows && cols == o.cols && e == o.e;
    }

    PolyMatrix transpose() const {
        PolyMatrix m(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(j, i) = at(i, j);
        return m;
    }

    PolyMatrix operator-() const {
        PolyMatrix m(rows, cols);
        for (size_t k = 0; k < e.size(); ++k) m.e[k] = -e[k];
        return m;
    }
    friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) {
        for (size_t k = 0; k < a.e.size(); ++k) a.e[k] += b.e[k];
        return a;
    }
    friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) {
        for (size_t k = 0; k < a.e.size(); ++k) a.e[k] -= b.e[k];
        return a;
    }
    friend PolyMatrix operator*(const Scalar& s, PolyMatrix m) {
        for (auto& p : m.e) p = s * p;
        return m;
    }

    Poly trace() const {
        Poly t;
        for (int i = 0; i < rows; ++i) t += at(i, i);
        return t;
    }

    PolyMatrix substitute(const std::map<Var, Poly>& sub) const {
        PolyMatrix m(rows, cols);
        for (size_t k = 0; k < e.size(); ++k) m.e[k] = e[k].substitute(sub);
        return m;
    }

    RatMat eval(const std::map<Var, Scalar>& point) const {
        RatMat m(rows, std::vector<Rational>(cols, 0));
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m[i][j] = at(i, j).eval(point).to_rational();
        return m;
    }
};

/// replace a^j ai^k by the surviving power (the formal relation a*ai = 1)
inline Poly normalize_units(const Poly& p) {
    Poly out;
    for (auto& [m, s] : p.terms()) {
        std::map<uint16_t, std::pair<int, int>> pairs;  // index -> (deg a, deg ai)
        Monomial rest;
        for (auto& [v, ex] : m.factors()) {
            if (v.kind == VarKind::A) pairs[v.index].first += ex;
            else if (v.kind == VarKind::Ai) pairs[v.index].second += ex;
            else rest = rest * Monomial(v, ex);
        }
        for (auto& [idx, de] : pairs) {
            int net = de.first - de.second;
            if (net > 0) rest = rest * Monomial(Var{VarKind::A, idx}, net);
            else if (net < 0) rest = rest * Monomial(Var{VarKind::Ai, idx}, -net);
        }
        out.add_term(rest, s);
    }
    return out;
}

inline PolyMatrix pmul(const PolyMatrix& A, const PolyMatrix& B) {
    PolyMatrix C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            if (A.at(i, k).is_zero()) continue;
            for (int j = 0; j < B.cols; ++j) {
                if (B.at(k, j).is_zero()) continue;
                C.at(i, j) += A.at(i, k) * B.at(k, j);
            }
        }
    for (auto& p : C.e) p = normalize_units(p);
    return C;
}

inline PolyMatrix from_rat(const RatMat& M) {
    PolyMatrix m(int(M.size()), int(M[0].size()));
    for (size_t i = 0; i < M.size(); ++i)
        for (size_t j = 0; j < M[i].size(); ++j) m.at(int(i), int(j)) = Poly(Scalar(M[i][j]));
    return m;
}

/// Similitude geometry over the inner diagonal form of signature (p, q) on
/// m = p+q coordinates.  The inner Gram matrix is J = diag(eps) with entries
/// +-1 (so J^2 = I), the matrix quadratic form is Q_J(x) = x J x^T / 2 and
/// the matrix pairing <x,y>_J = x J y^T is its polarization.  The integral
/// cone form sum eps_i x_i^2 = 2 Q_J cuts out the same cone and is the one
/// used for ideal arithmetic.  The ambient space appends an isotropic
/// coordinate on each side: bordered Gram matrix [[0,0,1],[0,J,0],[1,0,0]].
struct SimilitudeSpace {
    QuadraticForm Q;  // inner form, integral normalization sum eps x^2
    int m = 0;        // inner dimension
    int N = 0;        // ambient dimension m + 2

    explicit SimilitudeSpace(QuadraticForm q) : Q(q), m(q.dim()), N(q.dim() + 2) {}

    RatMat inner_J() const {
        RatMat J(m, std::vector<Rational>(m, 0));
        for (int i = 0; i < m; ++i) J[i][i] = Q.eps(i + 1);
        return J;
    }
    RatMat ambient_J() const {
        RatMat J(N, std::vector<Rational>(N, 0));
        J[0][N - 1] = 1;
        J[N - 1][0] = 1;
        auto Ji = inner_J();
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) J[1 + i][1 + j] = Ji[i][j];
        return J;
    }

    /// Q_J(v) = v J v^T / 2
    Poly Q_of(const std::vector<Poly>& v) const {
        Poly r;
        for (int i = 0; i < m; ++i)
            r += Scalar(frac(Q.eps(i + 1), 2)) * (v[i] * v[i]);
        return r;
    }
    /// <x,y>_J = x J y^T
    Poly pair_of(const std::vector<Poly>& x, const std::vector<Poly>& y) const {
        Poly r;
        for (int i = 0; i < m; ++i) r += Scalar(Q.eps(i + 1)) * (x[i] * y[i]);
        return r;
    }
    /// J v^T as a vector of polynomials
    std::vector<Poly> Jv(const std::vector<Poly>& v) const {
        std::vector<Poly> r(m);
        for (int i = 0; i < m; ++i) r[i] = Scalar(Q.eps(i + 1)) * v[i];
        return r;
    }

    std::vector<Poly> var_vector(VarKind kind) const {
        std::vector<Poly> v(m);
        for (int i = 0; i < m; ++i) v[i] = Poly::variable(Var{kind, uint16_t(i + 1)});
        return v;
    }
    static std::vector<Poly> rat_vector(const std::vector<Rational>& v) {
        std::vector<Poly> r(v.size());
        for (size_t i = 0; i < v.size(); ++i) r[i] = Poly(Scalar(v[i]));
        return r;
    }

    /// lower unipotent: rows (1; -Jv^T, I; -Q(v), v, 1)
    PolyMatrix nbar(const std::vector<Poly>& v) const {
        PolyMatrix g = PolyMatrix::identity(N);
        auto jv = Jv(v);
        for (int i = 0; i < m; ++i) g.at(1 + i, 0) = -jv[i];
        g.at(N - 1, 0) = -Q_of(v);
        for (int i = 0; i < m; ++i) g.at(N - 1, 1 + i) = v[i];
        return g;
    }
    /// upper unipotent: rows (1, v, -Q(v); I, -Jv^T; 1)
    PolyMatrix nmat(const std::vector<Poly>& v) const {
        PolyMatrix g = PolyMatrix::identity(N);
        for (int i = 0; i < m; ++i) g.at(0, 1 + i) = v[i];
        g.at(0, N - 1) = -Q_of(v);
        auto jv = Jv(v);
        for (int i = 0; i < m; ++i) g.at(1 + i, N - 1) = -jv[i];
        return g;
    }
    /// diag(a nu, g, a^-1): a and its inverse may be polynomials (formal a/ai)
    PolyMatrix mmat(const Poly& a, const Poly& a_inv, const PolyMatrix& g,
                    const Poly& nu) const {
        PolyMatrix r(N, N);
        r.at(0, 0) = normalize_units(a * nu);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) r.at(1 + i, 1 + j) = g.at(i, j);
        r.at(N - 1, N - 1) = a_inv;
        return r;
    }
    PolyMatrix mmat_rat(const Rational& a, const RatMat& g, const Rational& nu) const {
        return mmat(Poly(Scalar(a)), Poly(Scalar(1 / a)), from_rat(g), Poly(Scalar(nu)));
    }
    /// the ambient Weyl element swapping the isotropic border coordinates
    PolyMatrix w0() const {
        PolyMatrix g(N, N);
        g.at(0, N - 1) = Poly(1);
        g.at(N - 1, 0) = Poly(1);
        for (int i = 0; i < m; ++i) g.at(1 + i, 1 + i) = Poly(1);
        return g;
    }

    /// similitude norm nu with g J g^T = nu J, if it exists (rational g)
    std::optional<Rational> similitude_norm(const RatMat& g) const {
        RatMat J = int(g.size()) == N ? ambient_J() : inner_J();
        RatMat gJ = mat_mul(g, J);
        RatMat gJgT = mat_mul(gJ, [&] {
            RatMat t(g[0].size(), std::vector<Rational>(g.size()));
            for (size_t i = 0; i < g.size(); ++i)
                for (size_t j = 0; j < g[i].size(); ++j) t[j][i] = g[i][j];
            return t;
        }());
        // read nu off the first nonzero entry of J
        std::optional<Rational> nu;
        for (size_t i = 0; i < J.size(); ++i)
            for (size_t j = 0; j < J.size(); ++j) {
                if (J[i][j] == 0) {
                    if (gJgT[i][j] != 0) return std::nullopt;
                } else {
                    Rational cand = gJgT[i][j] / J[i][j];
                    if (!nu) nu = cand;
                    else if (*nu != cand) return std::nullopt;
                }
            }
        return nu;
    }

    /// symbolic check g J g^T == factor * J
    bool is_similitude(const PolyMatrix& g, const Poly& factor) const {
        PolyMatrix J = from_rat(int(g.rows) == N ? ambient_J() : inner_J());
        PolyMatrix lhs = pmul(pmul(g, J), g.transpose());
        PolyMatrix rhs = J;
        for (auto& p : rhs.e) p = normalize_units(factor * p);
        return lhs == rhs;
    }

    /// group inverse from the similitude relation: g^-1 = nu^-1 J g^T J^-1
    PolyMatrix group_inverse(const PolyMatrix& g, const Poly& nu_inv) const {
        RatMat J = int(g.rows) == N ? ambient_J() : inner_J();
        PolyMatrix r = pmul(pmul(from_rat(J), g.transpose()), from_rat(rat_inverse(J)));
        for (auto& p : r.e) p = normalize_units(nu_inv * p);
        return r;
    }

    /// elementary nilpotent with c across the top and -J c^T down the side
    PolyMatrix elementary(const std::vector<Poly>& c) const {
        PolyMatrix g(N, N);
        for (int i = 0; i < m; ++i) g.at(0, 1 + i) = c[i];
        auto jc = Jv(c);
        for (int i = 0; i < m; ++i) g.at(1 + i, N - 1) = -jc[i];
        return g;
    }

    /// a(c, v) = nbar(v) elementary(c) nbar(v)^-1
    PolyMatrix a_map(const std::vector<Poly>& c, const std::vector<Poly>& v) const {
        std::vector<Poly> neg(v.size());
        for (size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
        return pmul(pmul(nbar(v), elementary(c)), nbar(neg));
    }

    /// the displayed closed form of a(c, v), assembled entry by entry
    PolyMatrix a_display(const std::vector<Poly>& c, const std::vector<Poly>& v) const {
        PolyMatrix g(N, N);
        Poly cv = pair_of(c, v);
        Poly Qv = Q_of(v);
        auto jc = Jv(c), jv = Jv(v);
        g.at(0, 0) = cv;
        for (int j = 0; j < m; ++j) g.at(0, 1 + j) = c[j];
        for (int i = 0; i < m; ++i) g.at(1 + i, 0) = jc[i] * Qv - cv * jv[i];
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) g.at(1 + i, 1 + j) = -(jv[i] * c[j]) + jc[i] * v[j];
        for (int i = 0; i < m; ++i) g.at(1 + i, N - 1) = -jc[i];
        for (int j = 0; j < m; ++j) g.at(N - 1, 1 + j) = -(Qv * c[j]) + cv * v[j];
        g.at(N - 1, N - 1) = -cv;
        return g;
    }

    /// finite logarithm of a unipotent matrix
    PolyMatrix log_unipotent(const PolyMatrix& g) const {
        PolyMatrix Nm = g - PolyMatrix::identity(g.rows);
        PolyMatrix out(g.rows, g.cols), power = Nm;
        int sign = 1;
        for (int k = 1; k <= g.rows && !power.is_zero(); ++k) {
            Scalar coef = Scalar(frac(sign, k));
            out = out + coef * power;
            power = pmul(power, Nm);
            sign = -sign;
        }
        return out;
    }
};

/// row-major text dump, one row per line with entries separated by " | "
inline std::string matrix_str(const PolyMatrix& M) {
    std::string out;
    for (int i = 0; i < M.rows; ++i) {
        for (int j = 0; j < M.cols; ++j) {
            if (j) out += " | ";
            out += M.at(i, j).str();
        }
        out += "\n";
    }
    return out;
}

/// is every entry of M divisible by q?
inline bool matrix_in_ideal(const PolyMatrix& M, const Poly& q) {
    for (auto& p : M.e)
        if (!p.is_zero() && !divides(q, p).first) return false;
    return true;
}

/// random rational element of the inner orthogonal group by the Cayley
/// transform of a J-skew rational matrix
inline RatMat random_inner_orthogonal(const SimilitudeSpace& S, std::mt19937_64& rng) {
    int m = S.m;
    auto J = S.inner_J();
    std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
    for (int attempt = 0; attempt < 64; ++attempt) {
        // S-skew: A = J^-1 K with K antisymmetric
        RatMat K(m, std::vector<Rational>(m, 0));
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                Rational r = frac(num(rng), den(rng));
                K[i][j] = r;
                K[j][i] = -r;
            }
        RatMat A = mat_mul(rat_inverse(J), K);
        RatMat ImA(m, std::vector<Rational>(m, 0)), IpA = ImA;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                ImA[i][j] = (i == j ? 1 : 0) - A[i][j];
                IpA[i][j] = (i == j ? 1 : 0) + A[i][j];
            }
        try {
            RatMat g = mat_mul(ImA, rat_inverse(IpA));
            if (S.similitude_norm(g) == Rational(1)) return g;
        } catch (const Error&) {
            continue;  // I + A singular, resample
        }
    }
    throw Error("NotSimilitude", "failed to sample an orthogonal matrix");
}

/// random rational vector with small entries
inline std::vector<Rational> random_rat_vector(int m, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    std::vector<Rational> v(m);
    for (auto& x : v) x = frac(num(rng), den(rng));
    return v;
}

struct OrbitReport {
    bool skew_exact = false;
    bool square_in_ideal = false;   // a(c,v)^2 = 0 mod (Q(c))
    bool cube_exact = false;        // a(c,v)^3 = 0 identically
    bool minors_vanish = false;     // every 3x3 minor is zero (checked exactly)
    bool rank2_factorization = false;
    bool ga_invariance = false;     // a(c, v + u c) = a(c, v) mod (Q(c))
    bool equivariance = false;      // a(c g, v g) = m(1,g)^-1 a(c,v) m(1,g)
    int equivariance_samples = 0;
};

/// symbolic orbit-membership certificates with c, v symbolic
inline OrbitReport orbit_checks(const SimilitudeSpace& S, int equi_samples = 5,
                                uint64_t seed = 0) {
    OrbitReport rep;
    auto c = S.var_vector(VarKind::C), v = S.var_vector(VarKind::V);
    Poly Qc = S.Q.poly(VarKind::C);
    PolyMatrix A = S.a_map(c, v);

    // skewness with respect to the ambient form, exact
    PolyMatrix J = from_rat(S.ambient_J());
    rep.skew_exact = (pmul(A.transpose(), J) + pmul(J, A)).is_zero();

    PolyMatrix A2 = pmul(A, A);
    rep.square_in_ideal = matrix_in_ideal(A2, Qc);
    rep.cube_exact = pmul(A2, A).is_zero();

    // every 3x3 minor vanishes identically (rank <= 2 without using Q(c) = 0)
    rep.minors_vanish = true;
    int N = S.N;
    std::vector<std::array<int, 3>> triples;
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            for (int k = j + 1; k < N; ++k) triples.push_back({i, j, k});
    for (auto& r : triples) {
        for (auto& cidx : triples) {
            Poly det;
            int rs[3] = {r[0], r[1], r[2]}, cs[3] = {cidx[0], cidx[1], cidx[2]};
            int perm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}, {1, 0, 2}, {0, 2, 1}};
            for (int pi = 0; pi < 6; ++pi) {
                Poly t = A.at(rs[0], cs[perm[pi][0]]) * A.at(rs[1], cs[perm[pi][1]]) *
                         A.at(rs[2], cs[perm[pi][2]]);
                det += pi < 3 ? t : -t;
            }
            if (!det.is_zero()) { rep.minors_vanish = false; break; }
        }
        if (!rep.minors_vanish) break;
    }

    // exact rank-2 outer factorization: a = (nbar(v) col_1)(row_1 nbar(-v)) + ...
    {
        std::vector<Poly> neg(v.size());
        for (size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
        PolyMatrix nb = S.nbar(v), nbi = S.nbar(neg);
        PolyMatrix col1(N, 1), row1(1, N), col2(N, 1), row2(1, N);
        col1.at(0, 0) = Poly(1);
        for (int i = 0; i < S.m; ++i) row1.at(0, 1 + i) = c[i];
        auto jc = S.Jv(c);
        for (int i = 0; i < S.m; ++i) col2.at(1 + i, 0) = -jc[i];
        row2.at(0, N - 1) = Poly(1);
        PolyMatrix rebuilt = pmul(pmul(nb, col1), pmul(row1, nbi)) +
                             pmul(pmul(nb, col2), pmul(row2, nbi));
        rep.rank2_factorization = rebuilt == A;
    }

    // invariance along the ruling direction
    {
        std::map<Var, Poly> shift;
        for (int i = 0; i < S.m; ++i) {
            Var vi{VarKind::V, uint16_t(i + 1)};
            shift[vi] = Poly::variable(vi) +
                        Poly::variable(Var{VarKind::U, 1}) *
                            Poly::variable(Var{VarKind::C, uint16_t(i + 1)});
        }
        PolyMatrix shifted = A.substitute(shift);
        rep.ga_invariance = matrix_in_ideal(shifted - A, Qc);
    }

    // equivariance under sampled rational orthogonal elements, exact
    std::mt19937_64 rng(seed ^ 0x5bd1e995u);
    rep.equivariance = true;
    for (int s = 0; s < equi_samples; ++s) {
        RatMat g = random_inner_orthogonal(S, rng);
        auto act = [&](const std::vector<Poly>& vec) {
            std::vector<Poly> out(vec.size());
            for (size_t j = 0; j < vec.size(); ++j)
                for (size_t i = 0; i < vec.size(); ++i)
                    out[j] += Scalar(g[i][j]) * vec[i];
            return out;
        };
        PolyMatrix lhs = S.a_map(act(c), act(v));
        PolyMatrix gt = S.mmat_rat(1, g, 1);
        PolyMatrix gti = S.mmat_rat(1, rat_inverse(g), 1);
        PolyMatrix rhs = pmul(pmul(gti, A), gt);
        if (!(lhs == rhs)) { rep.equivariance = false; break; }
        ++rep.equivariance_samples;
    }
    return rep;
}

struct DisplayComparison {
    bool match = true;       // entries agree mod (Q(c))
    bool exact = true;       // entries agree identically
    int row = -1, col = -1;  // first mismatching entry, if any
    std::string witness;
};

/// entrywise comparison of the definitional a(c,v) against its displayed
/// closed form; differences are tested both exactly and mod (Q(c))
inline DisplayComparison compare_a_display(const SimilitudeSpace& S) {
    auto c = S.var_vector(VarKind::C), v = S.var_vector(VarKind::V);
    PolyMatrix def = S.a_map(c, v), disp = S.a_display(c, v);
    Poly Qc = S.Q.poly(VarKind::C);
    DisplayComparison out;
    for (int i = 0; i < S.N && out.match; ++i)
        for (int j = 0; j < S.N && out.match; ++j) {
            Poly d = def.at(i, j) - disp.at(i, j);
            if (d.is_zero()) continue;
            out.exact = false;
            if (divides(Qc, d).first) continue;  // still equal on the cone
            out.match = false;
            out.row = i;
            out.col = j;
            out.witness = d.str();
        }
    return out;
}

/// conjugation law m(a,h)^-1 nbar(v) m(a,h) = nbar(a v h) with a a formal
/// invertible scalar and h a rational similitude
inline bool check_conj(const SimilitudeSpace& S, const RatMat& h) {
    auto nu = S.similitude_norm(h);
    if (!nu) throw Error("NotSimilitude", "h is not a similitude of the inner form");
    auto v = S.var_vector(VarKind::V);
    Poly a = Poly::variable(Var{VarKind::A, 1}), ai = Poly::variable(Var{VarKind::Ai, 1});
    PolyMatrix M = S.mmat(a, ai, from_rat(h), Poly(Scalar(*nu)));
    PolyMatrix Mi = S.mmat(ai, a, from_rat(rat_inverse(h)), Poly(Scalar(1 / *nu)));
    PolyMatrix lhs = pmul(pmul(Mi, S.nbar(v)), M);
    std::vector<Poly> avh(S.m);
    for (int j = 0; j < S.m; ++j)
        for (int i = 0; i < S.m; ++i) avh[j] += Scalar(h[i][j]) * (a * v[i]);
    PolyMatrix rhs = S.nbar(avh);
    for (auto& p : rhs.e) p = normalize_units(p);
    return lhs == rhs;
}

/// -tr(log n(v) log nbar(v')) = 2 <v,v'>_J, which is exactly the
/// polarization pairing of the integral cone form sum eps_i x_i^2.
inline bool pairing_check(const SimilitudeSpace& S) {
    auto v = S.var_vector(VarKind::V), w = S.var_vector(VarKind::C);
    PolyMatrix X = S.log_unipotent(S.nmat(v)), Y = S.log_unipotent(S.nbar(w));
    Poly tr = pmul(X, Y).trace();
    Poly spec_pairing;
    for (int i = 0; i < S.m; ++i)
        spec_pairing += Scalar(2 * S.Q.eps(i + 1)) * (v[i] * w[i]);
    return -tr == spec_pairing && -tr == Scalar(2) * S.pair_of(v, w);
}

/// Cotangent point of the cone: base c with Q(c) = 0 and fiber covector
/// identified with a vector xi modulo the ruling line through c.  The
/// canonical representative zeroes xi at the first nonzero slot of c.
struct CotangentPoint {
    std::vector<Rational> c, xi;
};

inline CotangentPoint normalize_point(const SimilitudeSpace& S, std::vector<Rational> c,
                                      std::vector<Rational> xi) {
    if (S.Q.value(c) != 0) throw Error("NoRationalPoint", "base point is off the cone");
    int pivot = -1;
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0) { pivot = int(i); break; }
    if (pivot < 0) throw Error("NoRationalPoint", "base point must be nonzero");
    Rational f = xi[pivot] / c[pivot];
    for (size_t i = 0; i < c.size(); ++i) xi[i] -= f * c[i];
    return {std::move(c), std::move(xi)};
}

/// one element of the small group V x (Gm x GO): a modulation covector and a
/// similitude pair (a, h)
struct SmallConeElement {
    std::vector<Rational> lambda;
    Rational a = 1;
    RatMat h;
};

/// right action on the cotangent bundle:
///   (c, xi) . (lambda, (a, h)) = (a c h, (a nu)^-1 (xi + lambda) h)
/// both the transported fiber covector and the pulled-back modulation pick
/// up the same cotangent scaling of the base map x -> a x h
inline CotangentPoint cot_action(const SimilitudeSpace& S, const CotangentPoint& pt,
                                 const SmallConeElement& g) {
    auto nu_opt = S.similitude_norm(g.h);
    if (!nu_opt) throw Error("NotSimilitude", "h is not a similitude");
    Rational nu = *nu_opt;
    int m = S.m;
    std::vector<Rational> c2(m, 0), xi2(m, 0);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            c2[j] += g.a * pt.c[i] * g.h[i][j];
            xi2[j] += (pt.xi[i] + g.lambda[i]) / (g.a * nu) * g.h[i][j];
        }
    return normalize_point(S, std::move(c2), std::move(xi2));
}

/// the semidirect product law (lambda, h)(lambda', h') = (lambda + lambda' o h, h h')
inline SmallConeElement small_cone_product(const SimilitudeSpace& S,
                                           const SmallConeElement& g1,
                                           const SmallConeElement& g2) {
    auto nu = S.similitude_norm(g1.h);
    if (!nu) throw Error("NotSimilitude", "h is not a similitude");
    SmallConeElement r;
    r.a = g1.a * g2.a;
    r.h = mat_mul(g1.h, g2.h);
    // lambda' o h as a vector: (lambda' o h)(x) = <lambda', a x h> = <a nu lambda' h^-1, x>
    RatMat hinv = rat_inverse(g1.h);
    r.lambda = g1.lambda;
    for (int j = 0; j < S.m; ++j)
        for (int i = 0; i < S.m; ++i)
            r.lambda[j] += g1.a * (*nu) * g2.lambda[i] * hinv[i][j];
    return r;
}

enum class StratumLabel { zero, rank1, rank2 };

struct StratumRecord {
    bool is_zero = false;
    int matrix_rank = 0;
    int nilpotency_index = 0;  // least k with M^k = 0 (0 for the zero matrix)
    StratumLabel label = StratumLabel::zero;
};

/// Invariants of a point of the orbit closure presented as a matrix.  The
/// coarse label reads off the rank of the middle-column block: the image of
/// the projected row space is span{c, v}, so rank 1 detects the base-stratum
/// points (fiber along the ruling) and rank 2 the open stratum.
inline StratumRecord stratum_invariants(const SimilitudeSpace& S, const RatMat& M) {
    StratumRecord rec;
    rec.matrix_rank = rat_rank(M);
    rec.is_zero = rec.matrix_rank == 0;
    RatMat P = M;
    int k = 0;
    while (k < S.N + 1) {
        bool zero = true;
        for (auto& row : P)
            for (auto& x : row)
                if (x != 0) { zero = false; break; }
        if (zero) break;
        ++k;
        P = mat_mul(P, M);
    }
    rec.nilpotency_index = k == 0 ? 0 : k + 1;
    if (rec.is_zero) rec.nilpotency_index = 0;

    if (rec.is_zero) {
        rec.label = StratumLabel::zero;
        return rec;
    }
    RatMat mid(S.N, std::vector<Rational>(S.m));
    for (int i = 0; i < S.N; ++i)
        for (int j = 0; j < S.m; ++j) mid[i][j] = M[i][1 + j];
    int r = rat_rank(mid);
    rec.label = r <= 1 ? StratumLabel::rank1 : StratumLabel::rank2;
    return rec;
}

} // namespace qweyl
