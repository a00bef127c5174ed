#include <catch2/catch_amalgamated.hpp>

#include "qweyl/poisson.hpp"

using namespace qweyl;

namespace {

Var X(int i) { return Var{VarKind::X, uint16_t(i)}; }
Var Xi(int i) { return Var{VarKind::Xi, uint16_t(i)}; }

Poly xv(int i) { return Poly::variable(X(i)); }
Poly xiv(int i) { return Poly::variable(Xi(i)); }

Poly x_dot_xi(int m) {
    Poly r;
    for (int i = 1; i <= m; ++i) r += xv(i) * xiv(i);
    return r;
}

} // namespace

TEST_CASE("poisson bracket convention anchor") {
    REQUIRE(poisson_bracket(xiv(1), xv(1)) == Poly(1));
    REQUIRE(poisson_bracket(xv(1), xiv(1)) == Poly(-1));
    REQUIRE(poisson_bracket(xv(1), xv(2)).is_zero());
    REQUIRE(poisson_bracket(xiv(1), xiv(2)).is_zero());
}

TEST_CASE("bracket of quadric symbols against the operator oracle") {
    // signature (2,2): P_i, x_i as operators, brackets via weylalg
    int p = 2, q = 2, m = p + q;
    QuadraticForm Q{p, q};
    auto eps = [&](int i) { return Q.eps(i); };

    WeylElement E(m);
    for (int i = 1; i <= m; ++i) E += wmul(WeylElement::x(m, i), WeylElement::d(m, i));
    WeylElement box(m);
    for (int i = 1; i <= m; ++i)
        box += Scalar(eps(i)) * wmul(WeylElement::d(m, i), WeylElement::d(m, i));

    for (int i = 1; i <= m; ++i) {
        WeylElement Pi = Scalar(eps(i)) * wmul(WeylElement::x(m, i), box) -
                         wmul(Scalar(2) * E + WeylElement::constant(m, Scalar(m - 2)),
                              WeylElement::d(m, i));
        // sigma(P_i) = eps_i x_i Q'(xi) - 2 (x.xi) xi_i
        Poly sPi = Scalar(eps(i)) * (xv(i) * Q.dual_poly()) -
                   Scalar(2) * (x_dot_xi(m) * xiv(i));
        REQUIRE(sigma_map(Pi, 2) == sPi);

        // oracle: [P_i, x_i] = -(2E + m - 2) in the Weyl algebra, then symbol
        WeylElement br = commutator(Pi, WeylElement::x(m, i));
        REQUIRE(br == -(Scalar(2) * E + WeylElement::constant(m, Scalar(m - 2))));
        Poly lhs = poisson_bracket(sPi, xv(i));
        REQUIRE(lhs == Scalar(-2) * x_dot_xi(m));
        REQUIRE(lhs == sigma_map(br, 1));
    }
}

TEST_CASE("bracket of the two quadric forms") {
    QuadraticForm Q{2, 2};
    // {Q'(xi), Q(x)} = 4 x.xi by direct partial derivatives
    Poly lhs = poisson_bracket(Q.dual_poly(), Q.poly());
    REQUIRE(lhs == Scalar(4) * x_dot_xi(4));
}

TEST_CASE("sigma_map enforces the declared piece") {
    int n = 1;
    WeylElement x1 = WeylElement::x(n, 1), d1 = WeylElement::d(n, 1);
    REQUIRE(sigma_map(x1, 0) == xv(1));
    REQUIRE(sigma_map(d1, 1) == xiv(1));
    REQUIRE_THROWS_AS(sigma_map(d1, 0), Error);
    try {
        sigma_map(d1, 0);
    } catch (const Error& e) {
        REQUIRE(e.code == "PieceMismatch");
    }
}

TEST_CASE("vector-space compatibility: {Sigma A, Sigma B} = Sigma([A,B])") {
    // the Heisenberg basis x_i, d_i, 1 with pieces of order 0, 1, 0
    for (int n : {1, 2, 3}) {
        struct Elem { WeylElement op; int piece; };
        std::vector<Elem> basis;
        for (int i = 1; i <= n; ++i) basis.push_back({WeylElement::x(n, i), 0});
        for (int i = 1; i <= n; ++i) basis.push_back({WeylElement::d(n, i), 1});
        basis.push_back({WeylElement::one(n), 0});

        for (auto& A : basis)
            for (auto& B : basis) {
                Poly sa = sigma_map(A.op, A.piece), sb = sigma_map(B.op, B.piece);
                WeylElement br = commutator(A.op, B.op);
                Poly rhs;  // Sigma extended linearly: bracket lands in the constants
                if (!br.is_zero()) rhs = sigma_map(br, 0);
                REQUIRE(poisson_bracket(sa, sb) == rhs);
            }
    }
}

TEST_CASE("xi-grading helpers") {
    Poly f = xv(1) * xiv(1) * xiv(2) + xv(2) + xiv(1);
    REQUIRE(xi_degree(f) == 2);
    REQUIRE(xi_component(f, 2) == xv(1) * xiv(1) * xiv(2));
    REQUIRE(xi_component(f, 0) == xv(2));
    REQUIRE(xi_component(f, 1) == xiv(1));
}
