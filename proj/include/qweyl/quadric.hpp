#pragma once

#include "lie.hpp"
#include "poisson.hpp"

namespace qweyl {

/// Differential operators on the quadric cone Q_{p,q} = 0 in m = p+q
/// variables: the coordinate multiplications x_i, the rotations
/// X_ij = eps_i eps_j x_i d_j - x_j d_i, the Euler operator E, the form
/// Laplacian box = sum eps_i d_i^2 and the order-two family
/// P_i = eps_i x_i box - (2E + m - 2) d_i.
struct ConeContext {
    int p = 0, q = 0, m = 0;
    QuadraticForm Q;

    std::vector<WeylElement> xs;    // x_1..x_m
    std::vector<WeylElement> Xij;   // X_ij for i < j, row-major
    WeylElement E, E_shifted, box;  // E_shifted = E + (m-2)/2
    std::vector<WeylElement> Ps;    // P_1..P_m

    /// graded generator list: x_i (order 0), X_ij and E_shifted (order 1),
    /// P_i (order 2)
    std::vector<WeylElement> generators;
    std::vector<int> piece_order;
    std::vector<std::string> labels;

    int xij_index(int i, int j) const {  // 1-based, i < j
        int idx = 0;
        for (int a = 1; a < i; ++a) idx += m - a;
        return idx + (j - i - 1);
    }
};

inline ConeContext build_generators(int p, int q) {
    if ((p + q) % 2 != 0) throw Error("OddSignature", "p+q must be even");
    if (p + q < 2) throw Error("OddSignature", "p+q must be at least 2");
    ConeContext ctx;
    ctx.p = p;
    ctx.q = q;
    ctx.m = p + q;
    ctx.Q = QuadraticForm{p, q};
    int m = ctx.m;

    for (int i = 1; i <= m; ++i) ctx.xs.push_back(WeylElement::x(m, i));

    ctx.E = WeylElement(m);
    for (int i = 1; i <= m; ++i) ctx.E += wmul(WeylElement::x(m, i), WeylElement::d(m, i));
    ctx.E_shifted = ctx.E + WeylElement::constant(m, Scalar(frac(m - 2, 2)));

    ctx.box = WeylElement(m);
    for (int i = 1; i <= m; ++i)
        ctx.box += Scalar(ctx.Q.eps(i)) * wmul(WeylElement::d(m, i), WeylElement::d(m, i));

    for (int i = 1; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j) {
            WeylElement X =
                Scalar(ctx.Q.eps(i) * ctx.Q.eps(j)) *
                    wmul(WeylElement::x(m, i), WeylElement::d(m, j)) -
                wmul(WeylElement::x(m, j), WeylElement::d(m, i));
            ctx.Xij.push_back(std::move(X));
        }

    for (int i = 1; i <= m; ++i) {
        WeylElement Pi =
            Scalar(ctx.Q.eps(i)) * wmul(WeylElement::x(m, i), ctx.box) -
            wmul(Scalar(2) * ctx.E + WeylElement::constant(m, Scalar(m - 2)),
                 WeylElement::d(m, i));
        ctx.Ps.push_back(std::move(Pi));
    }

    for (int i = 1; i <= m; ++i) {
        ctx.generators.push_back(ctx.xs[i - 1]);
        ctx.piece_order.push_back(0);
        ctx.labels.push_back("x" + std::to_string(i));
    }
    for (int i = 1; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j) {
            ctx.generators.push_back(ctx.Xij[ctx.xij_index(i, j)]);
            ctx.piece_order.push_back(1);
            ctx.labels.push_back("X" + std::to_string(i) + std::to_string(j));
        }
    ctx.generators.push_back(ctx.E_shifted);
    ctx.piece_order.push_back(1);
    ctx.labels.push_back("E+" + std::to_string(m - 2) + "/2");
    for (int i = 1; i <= m; ++i) {
        ctx.generators.push_back(ctx.Ps[i - 1]);
        ctx.piece_order.push_back(2);
        ctx.labels.push_back("P" + std::to_string(i));
    }
    return ctx;
}

/// D is tangent iff it preserves the principal ideal (Q).  Criterion: the
/// normal-ordered composite D o (multiplication by Q) must have every
/// derivative-coefficient polynomial divisible by Q.
inline bool check_tangent(const WeylElement& D, const QuadraticForm& Q) {
    WeylElement DQ = wmul(D, WeylElement::mul_by(D.n(), Q.poly()));
    return in_kernel_K(DQ, Q);
}

/// canonical representative modulo the kernel ideal K: every derivative
/// coefficient reduced mod Q by eliminating x_1
inline WeylElement reduce_mod_K(const QuadraticForm& Q, const WeylElement& D) {
    Var x1{VarKind::X, 1};
    WeylElement out(D.n());
    for (auto& [b, f] : derivative_coefficients(D)) {
        Poly r = reduce_mod_quadratic(f, Q, x1);
        for (auto& [mono, s] : r.terms()) {
            Multi a(D.n(), 0);
            for (auto& [v, e] : mono.factors()) a[v.index - 1] = e;
            out.add(a, b, s);
        }
    }
    return out;
}

inline WeylElement reduce_mod_K(const ConeContext& ctx, const WeylElement& D) {
    return reduce_mod_K(ctx.Q, D);
}

/// [A, B] reduced to its canonical mod-K form; both inputs must be tangent
inline WeylElement commutator_mod_K(const ConeContext& ctx, const WeylElement& A,
                                    const WeylElement& B) {
    if (!check_tangent(A, ctx.Q) || !check_tangent(B, ctx.Q))
        throw Error("NotTangent", "commutator_mod_K requires tangent operators");
    return reduce_mod_K(ctx, commutator(A, B));
}

/// Lie closure of the cone generators with bracket = commutator mod K.
/// The reduction closure captures the form by value: the result outlives
/// the context it was built from.
inline Closure<WeylElement> lie_closure_quadric(const ConeContext& ctx, int max_dim = 64) {
    QuadraticForm Q = ctx.Q;
    std::vector<std::string> labels = ctx.labels;
    return close_under_bracket(
        ctx.generators,
        [](const WeylElement& a, const WeylElement& b) { return commutator(a, b); },
        [Q](const WeylElement& w) { return reduce_mod_K(Q, w); },
        [](const WeylElement& w) { return w.terms(); }, max_dim,
        [labels](const WeylElement&, int k) {
            return k < int(labels.size()) ? labels[k] : "b" + std::to_string(k);
        });
}

/// the displayed symbol of each generator
inline Poly expected_symbol(const ConeContext& ctx, int gen_index) {
    int m = ctx.m;
    auto xv = [](int i) { return Poly::variable(Var{VarKind::X, uint16_t(i)}); };
    auto xiv = [](int i) { return Poly::variable(Var{VarKind::Xi, uint16_t(i)}); };
    if (gen_index < m) return xv(gen_index + 1);
    int nxij = m * (m - 1) / 2;
    if (gen_index < m + nxij) {
        int flat = gen_index - m;
        for (int i = 1; i <= m; ++i)
            for (int j = i + 1; j <= m; ++j)
                if (ctx.xij_index(i, j) == flat)
                    return Scalar(ctx.Q.eps(i) * ctx.Q.eps(j)) * (xv(i) * xiv(j)) -
                           xv(j) * xiv(i);
    }
    if (gen_index == m + nxij) {
        Poly r;
        for (int i = 1; i <= m; ++i) r += xv(i) * xiv(i);
        return r;
    }
    int i = gen_index - (m + nxij + 1) + 1;
    Poly xdotxi;
    for (int k = 1; k <= m; ++k) xdotxi += xv(k) * xiv(k);
    return Scalar(ctx.Q.eps(i)) * (xv(i) * ctx.Q.dual_poly()) -
           Scalar(2) * (xdotxi * xiv(i));
}

struct SymbolCheckRow {
    std::string label;
    bool matched;
};

/// exact comparison of weylalg symbols with the displayed polynomials
inline std::vector<SymbolCheckRow> symbol_check(const ConeContext& ctx) {
    std::vector<SymbolCheckRow> rows;
    for (size_t k = 0; k < ctx.generators.size(); ++k) {
        Poly got = sigma_map(ctx.generators[k], ctx.piece_order[k]);
        rows.push_back({ctx.labels[k], got == expected_symbol(ctx, int(k))});
    }
    return rows;
}

/// The conjugation-by-Fourier map of the closed algebra:
/// E+(m-2)/2 -> -(E+(m-2)/2), x_i -> eps_i P_i/4, P_i -> 4 eps_i x_i,
/// X_ij -> X_ij.  The eps factors raise the index of the coordinate; without
/// them the map fails to be a homomorphism on pairs with eps_i eps_j = -1
/// (e.g. [x_1, X_13] = x_3 while [P_1, X_13] = eps_1 eps_3 P_3).
inline LieMap fourier_map(const ConeContext& ctx, const Closure<WeylElement>& cl,
                          bool raise_index = true) {
    int m = ctx.m, nxij = m * (m - 1) / 2;
    if (cl.algebra.dim() != int(ctx.generators.size()))
        throw Error("NotClosedWithinBound", "closure dimension does not match generators");
    LieMap phi{&cl.algebra, &cl.algebra, {}};
    phi.columns.resize(cl.algebra.dim());
    for (int i = 0; i < m; ++i) {
        Scalar e = raise_index ? Scalar(ctx.Q.eps(i + 1)) : Scalar::one();
        phi.columns[i] = {{m + nxij + 1 + i, e * Scalar(frac(1, 4))}};   // x_i -> eps P_i/4
        phi.columns[m + nxij + 1 + i] = {{i, e * Scalar(4)}};            // P_i -> 4 eps x_i
    }
    for (int k = 0; k < nxij; ++k)
        phi.columns[m + k] = {{m + k, Scalar::one()}};                   // X_ij fixed
    phi.columns[m + nxij] = {{m + nxij, Scalar(-1)}};                    // shifted E flips
    return phi;
}

inline bool fourier_map_check(const ConeContext& ctx, const Closure<WeylElement>& cl) {
    LieMap phi = fourier_map(ctx, cl);
    return verify_hom(phi).first && phi.is_involution();
}

struct PoissonCompatRow {
    std::string pair;
    std::string bracket;  // canonical mod-K form of the commutator
    bool exact;           // difference is identically zero
    bool mod_ideal;       // difference divisible by Q(x)
    bool sampled;         // difference vanishes at sampled cone points
};

/// {Sigma(A), Sigma(B)} vs Sigma([A, B] mod K) for all generator pairs.
/// Compatibility is recorded exactly, modulo (Q(x)), and at sampled rational
/// cone points with random fiber coordinates.
inline std::vector<PoissonCompatRow> poisson_compat_cone(const ConeContext& ctx,
                                                         const Closure<WeylElement>& cl,
                                                         int samples = 50,
                                                         uint64_t seed = 0) {
    int m = ctx.m;
    std::vector<Poly> sigma;
    for (size_t k = 0; k < ctx.generators.size(); ++k)
        sigma.push_back(sigma_map(ctx.generators[k], ctx.piece_order[k]));

    // sample points (c, xi) with Q(c) = 0
    std::mt19937_64 rng(seed ^ 0xabcdef12345ull);
    std::uniform_int_distribution<int> num(-7, 7), den(1, 5);
    std::vector<std::map<Var, Scalar>> points;
    for (int s = 0; s < samples; ++s) {
        auto c = rational_cone_point(ctx.Q, rng());
        std::map<Var, Scalar> pt;
        for (int i = 1; i <= m; ++i) {
            pt[Var{VarKind::X, uint16_t(i)}] = Scalar(c[i - 1]);
            pt[Var{VarKind::Xi, uint16_t(i)}] = Scalar(frac(num(rng), den(rng)));
        }
        points.push_back(std::move(pt));
    }

    Poly Qx = ctx.Q.poly();
    std::vector<PoissonCompatRow> rows;
    for (size_t a = 0; a < ctx.generators.size(); ++a)
        for (size_t b = a + 1; b < ctx.generators.size(); ++b) {
            Poly lhs = poisson_bracket(sigma[a], sigma[b]);
            WeylElement br = commutator_mod_K(ctx, ctx.generators[a], ctx.generators[b]);
            Poly rhs;
            if (!br.is_zero()) {
                auto combo = cl.decompose(br);
                if (!combo)
                    throw Error("NotClosedWithinBound", "bracket escaped the closed algebra");
                for (auto& [k, s] : *combo) rhs += s * sigma[k];
            }
            Poly diff = lhs - rhs;
            PoissonCompatRow row;
            row.pair = ctx.labels[a] + "," + ctx.labels[b];
            row.bracket = weyl_str(br);
            row.exact = diff.is_zero();
            row.mod_ideal = diff.is_zero() || divides(Qx, diff).first;
            row.sampled = true;
            for (auto& pt : points)
                if (!diff.is_zero() && !diff.eval(pt).is_zero()) { row.sampled = false; break; }
            rows.push_back(std::move(row));
        }
    return rows;
}

/// Gauge invariance on the cone: each generator symbol is unchanged modulo
/// (Q(x)) under the conormal shift xi_i -> xi_i + u * eps_i x_i with u a
/// fresh variable.
inline bool gauge_invariance(const ConeContext& ctx) {
    Var u{VarKind::U, 1};
    Poly Qx = ctx.Q.poly();
    for (size_t k = 0; k < ctx.generators.size(); ++k) {
        Poly s = sigma_map(ctx.generators[k], ctx.piece_order[k]);
        std::map<Var, Poly> sub;
        for (int i = 1; i <= ctx.m; ++i) {
            Var xi{VarKind::Xi, uint16_t(i)};
            sub[xi] = Poly::variable(xi) +
                      Scalar(ctx.Q.eps(i)) * (Poly::variable(u) *
                                              Poly::variable(Var{VarKind::X, uint16_t(i)}));
        }
        Poly diff = s.substitute(sub) - s;
        if (!diff.is_zero() && !divides(Qx, diff).first) return false;
    }
    return true;
}

} // namespace qweyl
