#pragma once

#include "weyl.hpp"

namespace qweyl {

/// Polynomials on the cotangent side live in x_1..x_n, xi_1..xi_n with the
/// xi-degree grading.  GradedPoly is plain Poly data; the grading helpers
/// below extract homogeneous components.
using GradedPoly = Poly;

inline Poly xi_component(const Poly& p, int k) {
    Poly r;
    for (auto& [m, s] : p.terms()) {
        int d = 0;
        for (auto& [v, e] : m.factors())
            if (v.kind == VarKind::Xi) d += e;
        if (d == k) r.add_term(m, s);
    }
    return r;
}

/// max total xi-degree over monomials
inline int xi_degree(const Poly& p) {
    int d = 0;
    for (auto& [m, s] : p.terms()) {
        int dm = 0;
        for (auto& [v, e] : m.factors())
            if (v.kind == VarKind::Xi) dm += e;
        d = std::max(d, dm);
    }
    return d;
}

/// Poisson bracket with the sign convention {xi_i, x_j} = delta_ij, matching
/// the Weyl-algebra bracket [d_i, x_j] = delta_ij:
///   {f, g} = sum_k (df/dxi_k dg/dx_k - df/dx_k dg/dxi_k).
inline GradedPoly poisson_bracket(const GradedPoly& f, const GradedPoly& g) {
    int n = 0;
    for (const Poly* p : {&f, &g})
        for (Var v : p->variables())
            if (v.kind == VarKind::X || v.kind == VarKind::Xi) n = std::max(n, int(v.index));
    Poly r;
    for (int k = 1; k <= n; ++k) {
        Var xk{VarKind::X, uint16_t(k)}, xik{VarKind::Xi, uint16_t(k)};
        r += f.derivative(xik) * g.derivative(xk) - f.derivative(xk) * g.derivative(xik);
    }
    return r;
}

/// The degreewise-linear map on a graded piece: the principal symbol of D,
/// which must sit in the declared filtration order for linearity to hold.
inline GradedPoly sigma_map(const WeylElement& D, int piece_order) {
    if (D.is_zero()) return Poly();
    if (D.order() != piece_order)
        throw Error("PieceMismatch", "operator of order " + std::to_string(D.order()) +
                                         " declared in piece of order " +
                                         std::to_string(piece_order));
    return symbol(D);
}

} // namespace qweyl
