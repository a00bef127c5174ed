// Acceptance suite: one line per criterion, every tolerance pinned in code.
// Exit status is nonzero when any required criterion fails; the closed-form
// display comparison is informational by design and never fails the run.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "qweyl/metaplectic.hpp"
#include "qweyl/ortho.hpp"
#include "qweyl/quadric.hpp"
#include "qweyl/spectral.hpp"

using namespace qweyl;

namespace {

int failures = 0;

void line(int idx, bool pass, const std::string& detail, bool informational = false) {
    const char* tag = informational ? "INFO" : (pass ? "PASS" : "FAIL");
    std::printf("criterion %d: %s  %s\n", idx, tag, detail.c_str());
    std::fflush(stdout);
    if (!pass && !informational) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main() {
    const std::vector<std::pair<int, int>> signatures{{1, 1}, {2, 2}, {3, 1}, {3, 3}, {2, 4}};

    // Criteria 1-4 share the closed algebras
    struct Closed {
        ConeContext ctx;
        Closure<WeylElement> cl;
        double seconds;
    };
    std::vector<Closed> closed;

    {  // 1: closure terminates with dimension (m+1)(m+2)/2 in < 60 s each
        bool ok = true;
        std::string detail;
        for (auto [p, q] : signatures) {
            auto t0 = std::chrono::steady_clock::now();
            ConeContext ctx = build_generators(p, q);
            Closure<WeylElement> cl = lie_closure_quadric(ctx);
            double secs = seconds_since(t0);
            int m = p + q, expect = (m + 1) * (m + 2) / 2;
            bool good = cl.algebra.dim() == expect && secs < 60.0;
            ok = ok && good;
            detail += "(" + std::to_string(p) + "," + std::to_string(q) +
                      "): dim=" + std::to_string(cl.algebra.dim()) + " [" +
                      std::to_string(expect) + "] " + std::to_string(secs).substr(0, 5) + "s  ";
            closed.push_back({std::move(ctx), std::move(cl), secs});
        }
        line(1, ok, detail);
    }

    {  // 2: Killing signature equals the matrix-realization signature, exactly
        bool ok = true;
        std::string detail;
        for (auto& c : closed) {
            Signature sig = killing_signature(c.cl.algebra);
            Signature oracle =
                killing_signature(so_matrix_algebra(c.ctx.p + 1, c.ctx.q + 1).algebra);
            bool good = sig == oracle && sig.zero == 0;
            ok = ok && good;
            detail += "(" + std::to_string(c.ctx.p) + "," + std::to_string(c.ctx.q) +
                      "): " + sig.str() + (good ? "=" : "!=") + oracle.str() + "  ";
        }
        line(2, ok, detail);
    }

    {  // 3: the conjugation map is a homomorphism and involution, no failing pair
        bool ok = true;
        std::string detail;
        for (auto& c : closed) {
            LieMap phi = fourier_map(c.ctx, c.cl);
            auto [hom, pair] = verify_hom(phi);
            bool good = hom && phi.is_involution();
            ok = ok && good;
            if (!good)
                detail += "failing pair (" + std::to_string(pair.first) + "," +
                          std::to_string(pair.second) + ") at (" + std::to_string(c.ctx.p) +
                          "," + std::to_string(c.ctx.q) + ")  ";
        }
        if (detail.empty())
            detail = "involutive automorphism on all " + std::to_string(closed.size()) +
                     " signatures, zero failing pairs";
        line(3, ok, detail);
    }

    {  // 4: symbols match the displayed polynomials; Poisson-commutator
       // compatibility exact in the affine case and mod (Q(x)) plus sampled
       // points on the cone
        bool ok = true;
        std::string detail;
        for (auto& c : closed) {
            for (auto& row : symbol_check(c.ctx))
                if (!row.matched) {
                    ok = false;
                    detail += "symbol mismatch " + row.label + "  ";
                }
            auto rows = poisson_compat_cone(c.ctx, c.cl, 50, 0);
            for (auto& row : rows)
                if (!row.mod_ideal || !row.sampled) {
                    ok = false;
                    detail += "compat fails at " + row.pair + "  ";
                }
        }
        // affine case: {Sigma A, Sigma B} = Sigma([A, B]) exactly
        for (int n : {1, 2, 3}) {
            std::vector<std::pair<WeylElement, int>> basis;
            for (int i = 1; i <= n; ++i) basis.push_back({WeylElement::x(n, i), 0});
            for (int i = 1; i <= n; ++i) basis.push_back({WeylElement::d(n, i), 1});
            basis.push_back({WeylElement::one(n), 0});
            for (auto& [A, oa] : basis)
                for (auto& [B, ob] : basis) {
                    Poly lhs = poisson_bracket(sigma_map(A, oa), sigma_map(B, ob));
                    WeylElement br = commutator(A, B);
                    Poly rhs = br.is_zero() ? Poly() : sigma_map(br, 0);
                    if (lhs != rhs) {
                        ok = false;
                        detail += "affine compat fails (n=" + std::to_string(n) + ")  ";
                    }
                }
        }
        if (detail.empty())
            detail = "symbols exact on 5 signatures; cone compatibility mod (Q) and at 50 "
                     "sampled points; affine compatibility exact for n <= 3";
        line(4, ok, detail);
    }

    {  // 5: orbit certificates for n in {2,3,4} plus the conjugation and
       // trace-pairing identities, symbolically
        bool ok = true;
        std::string detail;
        for (int n : {2, 3, 4}) {
            SimilitudeSpace S(QuadraticForm{n, n});
            auto rep = orbit_checks(S, 25, 2024);
            bool good = rep.skew_exact && rep.square_in_ideal && rep.cube_exact &&
                        rep.minors_vanish && rep.ga_invariance && rep.equivariance &&
                        rep.equivariance_samples == 25;
            std::mt19937_64 rng(99 + n);
            bool conj_ok = check_conj(S, random_inner_orthogonal(S, rng)) &&
                           check_conj(S, [&] {
                               RatMat g = random_inner_orthogonal(S, rng);
                               for (auto& row : g)
                                   for (auto& x : row) x *= 3;  // similitude, norm 9
                               return g;
                           }());
            bool pair_ok = pairing_check(S);
            good = good && conj_ok && pair_ok;
            ok = ok && good;
            detail += "n=" + std::to_string(n) + ":" + (good ? "ok" : "FAIL") + "  ";
        }
        line(5, ok, detail + "(skew, cube=0, minors=0, ruling, 25 equivariance samples, "
                             "conjugation, trace pairing)");
    }

    {  // 6: semiclassical compatibility for every generator, exact
        bool ok = true;
        std::mt19937_64 rng(6);
        std::uniform_int_distribution<int> num(-3, 3);
        for (int n : {1, 2, 3}) {
            RatMat A(n, std::vector<Rational>(n, 0)), J = A;
            do {
                for (auto& row : A)
                    for (auto& x : row) x = num(rng);
            } while ([&] {
                try {
                    rat_inverse(A);
                    return false;
                } catch (const Error&) {
                    return true;
                }
            }());
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) J[i][j] = J[j][i] = num(rng);
            QVec v(n, frac(1, 2)), lambda(n, frac(-2, 3));
            std::vector<Generator> gens{{Generator::Kind::Fourier, {}, {}, {}},
                                        {Generator::Kind::GL, {}, {}, A},
                                        {Generator::Kind::Sym, {}, {}, J},
                                        {Generator::Kind::Heisenberg, v, lambda, {}}};
            for (auto& g : gens) ok = ok && semiclassical_check(g, n);
        }
        line(6, ok, "heisenberg, gl, sym, fourier generators for n in {1,2,3}, exact");
    }

    {  // 7: the Heisenberg law on 100 random pairs; fourier order relations
        bool ok = true;
        std::mt19937_64 rng(7);
        std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
        int n = 2;
        for (int trial = 0; trial < 100 && ok; ++trial) {
            auto rv = [&] {
                QVec v(n);
                for (auto& x : v) x = frac(num(rng), den(rng));
                return v;
            };
            HeisElement g1{rv(), rv(), frac(num(rng), den(rng))};
            HeisElement g2{rv(), rv(), frac(num(rng), den(rng))};
            ok = ok && heis_rep_check(g1, g2);
        }
        Generator F{Generator::Kind::Fourier, {}, {}, {}};
        auto FF = word_act({F, F}, n);
        for (int i = 0; i < n; ++i) {
            ok = ok && FF.image(i) == -WeylElement::x(n, i + 1);
            ok = ok && FF.image(n + i) == -WeylElement::d(n, i + 1);
        }
        ok = ok && word_act({F, F, F, F}, n) == WeylAutomorphism::identity(n);
        line(7, ok, "100 random pairs exact; fourier^2 = antipode; fourier^4 = identity");
    }

    {  // 8: numerics at the pinned tolerances, total runtime under 2 minutes
        using namespace qweyl::spectral;
        auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::string detail;

        double worst_poisson = 0;
        for (double t : {0.5, 1.0, 2.0})
            worst_poisson = std::max(worst_poisson, poisson_sum({GaussFun::gaussian(t)}, 20).diff);
        ok = ok && worst_poisson < 1e-9;
        detail += "poisson<=" + std::to_string(worst_poisson).substr(0, 8) + " ";

        HermiteTruncation T(128);
        double worst_hermite = 0;
        for (int k = 0; k <= 20; ++k)
            worst_hermite = std::max(worst_hermite, hermite_fourier_check(k, T));
        ok = ok && worst_hermite < 1e-8;

        MatrixXcd F = weil_operator({WeilKind::fourier, 0.0}, T);
        WeilGenerator m2{WeilKind::scaling, 2.0}, n1{WeilKind::quad_mult, 1.0};
        double r1 = intertwine_check(m2, T, F, stable_block(m2, T.N));
        double r2 = intertwine_check(n1, T, F, stable_block(n1, T.N));
        ok = ok && r1 < 1e-5 && r2 < 1e-5;

        GaussFun f = GaussFun::gaussian(1.0);
        f.poly = {1.0, 0.5};
        std::vector<ThetaGenerator> trans{{ThetaGenerator::Kind::translate, 1.0}};
        std::vector<ThetaGenerator> scale{{ThetaGenerator::Kind::scale, 0, 0, 0, 1.3}};
        std::vector<ThetaGenerator> four{{ThetaGenerator::Kind::fourier}};
        double th1 = theta_invariance({}, {}, f, 25);
        double th2 = theta_invariance(trans, scale, f, 25);
        double th3 = theta_invariance(four, {}, f, 25);
        ok = ok && th1 == 0.0 && th2 < 1e-6 && th3 < 1e-9;

        double secs = seconds_since(t0);
        ok = ok && secs < 120.0;
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "poisson %.1e (<1e-9), hermite %.1e (<1e-8, k<=20, N=128), "
                      "intertwine m2 %.1e n1 %.1e (<1e-5), theta %.1e/%.1e/%.1e, %.1fs",
                      worst_poisson, worst_hermite, r1, r2, th1, th2, th3, secs);
        line(8, ok, detail + buf);
    }

    {  // 9: closed-form display versus the definitional matrix, informational
        std::string detail;
        for (int n : {2, 3, 4}) {
            auto cmp = compare_a_display(SimilitudeSpace(QuadraticForm{n, n}));
            detail += "n=" + std::to_string(n) + ": " +
                      (cmp.match ? (cmp.exact ? "identical" : "equal mod (Q(c))")
                                 : "mismatch at (" + std::to_string(cmp.row) + "," +
                                       std::to_string(cmp.col) + ") witness " + cmp.witness) +
                      "  ";
        }
        line(9, true, detail, true);
    }

    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all required criteria pass\n");
    return 0;
}
