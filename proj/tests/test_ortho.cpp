#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qweyl/ortho.hpp"

using namespace qweyl;

namespace {

SimilitudeSpace split_space(int n) { return SimilitudeSpace(QuadraticForm{n, n}); }

} // namespace

TEST_CASE("unipotent and similitude matrices preserve the bordered form") {
    for (int n : {1, 2, 3}) {
        SimilitudeSpace S = split_space(n);
        auto v = S.var_vector(VarKind::V);

        SECTION("nbar(v) invariance, n=" + std::to_string(n)) {
            REQUIRE(S.is_similitude(S.nbar(v), Poly(1)));
            REQUIRE(S.is_similitude(S.nmat(v), Poly(1)));
            REQUIRE(S.is_similitude(S.w0(), Poly(1)));
            // the transposed relation g^T J g = J holds as well
            PolyMatrix J = from_rat(S.ambient_J());
            PolyMatrix g = S.nbar(v);
            REQUIRE(pmul(pmul(g.transpose(), J), g) == J);
        }
        SECTION("nbar(0) is the identity, n=" + std::to_string(n)) {
            std::vector<Poly> zero(S.m, Poly());
            REQUIRE(S.nbar(zero) == PolyMatrix::identity(S.N));
        }
        SECTION("m(a,g) has similitude norm nu(g), n=" + std::to_string(n)) {
            std::mt19937_64 rng(7 + n);
            RatMat g = random_inner_orthogonal(S, rng);
            // scale g by 3: similitude with norm 9
            for (auto& row : g)
                for (auto& x : row) x *= 3;
            REQUIRE(S.similitude_norm(g) == Rational(9));
            Poly a = Poly::variable(Var{VarKind::A, 1}),
                 ai = Poly::variable(Var{VarKind::Ai, 1});
            PolyMatrix M = S.mmat(a, ai, from_rat(g), Poly(Scalar(9)));
            REQUIRE(S.is_similitude(M, Poly(Scalar(9))));
        }
    }
}

TEST_CASE("non-similitude matrices are rejected") {
    SimilitudeSpace S = split_space(2);
    RatMat bad(S.m, std::vector<Rational>(S.m, 0));
    bad[0][1] = 1;
    bad[1][0] = 1;
    bad[2][2] = 1;
    bad[3][3] = 2;  // breaks the form
    REQUIRE_FALSE(S.similitude_norm(bad).has_value());
    REQUIRE_THROWS_AS(check_conj(S, bad), Error);
}

TEST_CASE("conjugation law m(a,h)^-1 nbar(v) m(a,h) = nbar(a v h)") {
    SimilitudeSpace S = split_space(2);

    SECTION("h = identity, symbolic a and v") {
        RatMat id(S.m, std::vector<Rational>(S.m, 0));
        for (int i = 0; i < S.m; ++i) id[i][i] = 1;
        REQUIRE(check_conj(S, id));
    }
    SECTION("random rational orthogonal h") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 5; ++trial)
            REQUIRE(check_conj(S, random_inner_orthogonal(S, rng)));
    }
    SECTION("scaled similitude h") {
        std::mt19937_64 rng(13);
        RatMat g = random_inner_orthogonal(S, rng);
        for (auto& row : g)
            for (auto& x : row) x *= 2;
        REQUIRE(check_conj(S, g));
    }
}

TEST_CASE("trace pairing of the opposite unipotents") {
    SECTION("symbolic equality with the normalization factor 2") {
        for (int n : {1, 2, 3}) REQUIRE(pairing_check(split_space(n)));
    }
    SECTION("v' = 0 gives zero") {
        SimilitudeSpace S = split_space(2);
        auto v = S.var_vector(VarKind::V);
        std::vector<Poly> zero(S.m, Poly());
        Poly tr = pmul(S.log_unipotent(S.nmat(v)), S.log_unipotent(S.nbar(zero))).trace();
        REQUIRE(tr.is_zero());
    }
    SECTION("first basis vector against itself") {
        SimilitudeSpace S = split_space(2);
        std::vector<Poly> e1(S.m, Poly());
        e1[0] = Poly(1);
        Poly tr = pmul(S.log_unipotent(S.nmat(e1)), S.log_unipotent(S.nbar(e1))).trace();
        // -tr equals the polarization pairing of sum eps x^2: 2 eps_1 = 2
        REQUIRE(-tr == Poly(2));
    }
}

TEST_CASE("log/exp of unipotent matrices invert each other") {
    SimilitudeSpace S = split_space(2);
    auto v = S.var_vector(VarKind::V);
    PolyMatrix g = S.nbar(v);
    PolyMatrix X = S.log_unipotent(g);
    PolyMatrix expX = PolyMatrix::identity(S.N), power = X;
    Rational fact = 1;
    for (int k = 1; k <= S.N && !power.is_zero(); ++k) {
        fact *= k;
        expX = expX + Scalar(1 / fact) * power;
        power = pmul(power, X);
    }
    REQUIRE(expX == g);
}

TEST_CASE("a(c,0) is the elementary nilpotent") {
    SimilitudeSpace S = split_space(2);
    auto c = S.var_vector(VarKind::C);
    std::vector<Poly> zero(S.m, Poly());
    REQUIRE(S.a_map(c, zero) == S.elementary(c));
}

TEST_CASE("orbit certificates, n = 2 and 3") {
    for (int n : {2, 3}) {
        SimilitudeSpace S = split_space(n);
        auto rep = orbit_checks(S, 3, 17);
        INFO("n = " << n);
        REQUIRE(rep.skew_exact);
        REQUIRE(rep.square_in_ideal);
        REQUIRE(rep.cube_exact);
        REQUIRE(rep.minors_vanish);
        REQUIRE(rep.rank2_factorization);
        REQUIRE(rep.ga_invariance);
        REQUIRE(rep.equivariance);
        REQUIRE(rep.equivariance_samples == 3);
    }
}

TEST_CASE("displayed closed form of a(c,v) matches the definition exactly") {
    for (int n : {2, 3}) {
        auto cmp = compare_a_display(split_space(n));
        REQUIRE(cmp.match);
        REQUIRE(cmp.exact);
    }
}

TEST_CASE("rank of a(c,v) at rational points") {
    SimilitudeSpace S = split_space(2);
    std::mt19937_64 rng(23);
    auto c = rational_cone_point(S.Q, 5);
    auto v = random_rat_vector(S.m, rng);

    RatMat A = S.a_map(SimilitudeSpace::rat_vector(c), SimilitudeSpace::rat_vector(v))
                   .eval({});
    REQUIRE(rat_rank(A) == 2);
}

TEST_CASE("cotangent action is a right action") {
    SimilitudeSpace S = split_space(2);
    std::mt19937_64 rng(31);

    auto rand_elem = [&](bool with_scale) {
        SmallConeElement g;
        g.lambda = random_rat_vector(S.m, rng);
        g.h = random_inner_orthogonal(S, rng);
        g.a = with_scale ? frac(int(rng() % 3) + 1, int(rng() % 2) + 1) : Rational(1);
        if (with_scale && rng() % 2) {
            for (auto& row : g.h)
                for (auto& x : row) x *= 2;  // similitude with norm 4
        }
        return g;
    };

    CotangentPoint pt = normalize_point(S, rational_cone_point(S.Q, 3),
                                        random_rat_vector(S.m, rng));

    SECTION("the identity acts trivially") {
        SmallConeElement id;
        id.lambda.assign(S.m, 0);
        id.h.assign(S.m, std::vector<Rational>(S.m, 0));
        for (int i = 0; i < S.m; ++i) id.h[i][i] = 1;
        auto moved = cot_action(S, pt, id);
        REQUIRE(moved.c == pt.c);
        REQUIRE(moved.xi == pt.xi);
    }
    SECTION("compatibility with the semidirect product law") {
        for (int trial = 0; trial < 10; ++trial) {
            auto g1 = rand_elem(true), g2 = rand_elem(true);
            auto lhs = cot_action(S, cot_action(S, pt, g1), g2);
            auto rhs = cot_action(S, pt, small_cone_product(S, g1, g2));
            REQUIRE(lhs.c == rhs.c);
            REQUIRE(lhs.xi == rhs.xi);
        }
    }
    SECTION("intertwining with a_map under orthogonal elements") {
        for (int trial = 0; trial < 5; ++trial) {
            SmallConeElement g;
            g.lambda.assign(S.m, 0);
            g.h = random_inner_orthogonal(S, rng);
            g.a = 1;
            auto moved = cot_action(S, pt, g);
            RatMat A =
                S.a_map(SimilitudeSpace::rat_vector(pt.c), SimilitudeSpace::rat_vector(pt.xi))
                    .eval({});
            RatMat B = S.a_map(SimilitudeSpace::rat_vector(moved.c),
                               SimilitudeSpace::rat_vector(moved.xi))
                           .eval({});
            RatMat gt(S.N, std::vector<Rational>(S.N, 0));
            gt[0][0] = 1;
            gt[S.N - 1][S.N - 1] = 1;
            for (int i = 0; i < S.m; ++i)
                for (int j = 0; j < S.m; ++j) gt[1 + i][1 + j] = g.h[i][j];
            RatMat rhs = mat_mul(mat_mul(rat_inverse(gt), A), gt);
            REQUIRE(B == rhs);
        }
    }
}

TEST_CASE("stratum invariants") {
    SimilitudeSpace S = split_space(2);
    std::mt19937_64 rng(41);

    SECTION("zero matrix") {
        RatMat Z(S.N, std::vector<Rational>(S.N, 0));
        auto rec = stratum_invariants(S, Z);
        REQUIRE(rec.is_zero);
        REQUIRE(rec.label == StratumLabel::zero);
        REQUIRE(rec.matrix_rank == 0);
        REQUIRE(rec.nilpotency_index == 0);
    }
    SECTION("a(c, 0): base stratum") {
        auto c = rational_cone_point(S.Q, 9);
        std::vector<Poly> zero(S.m, Poly());
        RatMat A = S.a_map(SimilitudeSpace::rat_vector(c), zero).eval({});
        auto rec = stratum_invariants(S, A);
        REQUIRE_FALSE(rec.is_zero);
        REQUIRE(rec.label == StratumLabel::rank1);
        REQUIRE(rec.matrix_rank == 2);  // minimal nilpotents have matrix rank 2
        REQUIRE(rec.nilpotency_index == 2);
    }
    SECTION("a(c, v) generic: open stratum") {
        auto c = rational_cone_point(S.Q, 9);
        auto v = random_rat_vector(S.m, rng);
        RatMat A = S.a_map(SimilitudeSpace::rat_vector(c), SimilitudeSpace::rat_vector(v))
                       .eval({});
        auto rec = stratum_invariants(S, A);
        REQUIRE(rec.label == StratumLabel::rank2);
        REQUIRE(rec.matrix_rank == 2);
        REQUIRE(rec.nilpotency_index == 2);
    }
    SECTION("the ruling direction keeps the base label") {
        auto c = rational_cone_point(S.Q, 9);
        std::vector<Rational> v = c;  // proportional to c
        RatMat A = S.a_map(SimilitudeSpace::rat_vector(c), SimilitudeSpace::rat_vector(v))
                       .eval({});
        REQUIRE(stratum_invariants(S, A).label == StratumLabel::rank1);
    }
}

TEST_CASE("matrix text dump is deterministic") {
    SimilitudeSpace S = split_space(1);
    auto v = S.var_vector(VarKind::V);
    std::string dump = matrix_str(S.nbar(v));
    REQUIRE(dump == matrix_str(S.nbar(v)));
    REQUIRE(dump.find("-v1") != std::string::npos);   // -J v^T entry
    REQUIRE(dump.find(" | ") != std::string::npos);
    REQUIRE(std::count(dump.begin(), dump.end(), '\n') == S.N);
}

TEST_CASE("formal scalar inverse pairs normalize") {
    Poly a = Poly::variable(Var{VarKind::A, 1}), ai = Poly::variable(Var{VarKind::Ai, 1});
    REQUIRE(normalize_units(a * ai) == Poly(1));
    REQUIRE(normalize_units(a * a * ai) == a);
    REQUIRE(normalize_units(a * ai * ai) == ai);
}
