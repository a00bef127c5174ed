#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "scalar.hpp"

namespace qweyl::spectral {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;

/// Gauss-Hermite nodes for weight e^{-u^2} by Golub-Welsch.  Weights are
/// returned in the lifted form W_i = w_i e^{u_i^2}; by the Christoffel
/// identity W_i = 1 / sum_k psi_k(u_i)^2 over the orthonormal Hermite
/// functions, which the three-term recurrence evaluates stably (eigenvector
/// components would drown in absolute error at the edge nodes).
struct GaussHermite {
    VectorXd nodes;    // u_i
    VectorXd lifted;   // w_i e^{u_i^2}

    explicit GaussHermite(int nq) {
        MatrixXd T = MatrixXd::Zero(nq, nq);
        for (int k = 1; k < nq; ++k) {
            double b = std::sqrt(k / 2.0);
            T(k, k - 1) = b;
            T(k - 1, k) = b;
        }
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(T, Eigen::EigenvaluesOnly);
        nodes = es.eigenvalues();
        lifted.resize(nq);
        for (int i = 0; i < nq; ++i) {
            double u = nodes(i);
            double p0 = std::pow(pi, -0.25) * std::exp(-u * u / 2.0), pm1 = 0.0;
            double sum = 0.0;
            for (int k = 0; k < nq; ++k) {
                sum += p0 * p0;
                double p1 = std::sqrt(2.0 / (k + 1)) * u * p0 -
                            std::sqrt(double(k) / (k + 1)) * pm1;
                pm1 = p0;
                p0 = p1;
            }
            lifted(i) = 1.0 / sum;
        }
    }
};

/// Truncated Hermite model of L^2(R) adapted to the character x -> e^{2 pi
/// i alpha x} with the self-dual measure: the basis is phi_k(x) =
/// (2 pi a)^{1/4} psi_k(sqrt(2 pi a) x) for a = alpha and psi_k the
/// orthonormal Hermite functions, and the unitary transform
/// F f(y) = a^{1/2} int f(x) e^{-2 pi i a x y} dx satisfies
/// F phi_k = (-i)^k phi_k.
struct HermiteTruncation {
    int N;             // basis size
    int nq;            // quadrature size
    double alpha;      // character parameter, > 0
    VectorXd x;        // nodes in position coordinates
    VectorXd w;        // weights for integrals against dx
    MatrixXd basis;    // basis(k, i) = phi_k(x_i)

    explicit HermiteTruncation(int N_, int nq_ = 0, double alpha_ = 1.0)
        : N(N_), nq(nq_ ? nq_ : 2 * N_ + 64), alpha(alpha_) {
        if (!(alpha > 0)) throw Error("ParseError", "alpha must be positive");
        GaussHermite gh(nq);
        double s = std::sqrt(2.0 * pi * alpha);
        x.resize(nq);
        w.resize(nq);
        for (int i = 0; i < nq; ++i) {
            x(i) = gh.nodes(i) / s;
            w(i) = gh.lifted(i) / s;
        }
        basis.resize(N, nq);
        double quarter = std::pow(2.0 * pi * alpha, 0.25);
        for (int i = 0; i < nq; ++i) {
            double u = gh.nodes(i);
            double p0 = std::pow(pi, -0.25) * std::exp(-u * u / 2.0);
            double pm1 = 0.0;
            for (int k = 0; k < N; ++k) {
                basis(k, i) = quarter * p0;
                double p1 = std::sqrt(2.0 / (k + 1)) * u * p0 -
                            std::sqrt(double(k) / (k + 1)) * pm1;
                pm1 = p0;
                p0 = p1;
            }
        }
    }

    /// Gram matrix of the basis under the quadrature
    MatrixXd gram() const {
        MatrixXd G(N, N);
        for (int j = 0; j < N; ++j)
            for (int k = j; k < N; ++k) {
                double s = 0;
                for (int i = 0; i < nq; ++i) s += w(i) * basis(j, i) * basis(k, i);
                G(j, k) = s;
                G(k, j) = s;
            }
        return G;
    }

    double gram_defect() const {
        MatrixXd G = gram();
        return (G - MatrixXd::Identity(N, N)).cwiseAbs().maxCoeff();
    }

    /// matrix of a pointwise-defined operator: U_{jk} = int phi_j (T phi_k)
    template <class F>
    MatrixXcd operator_matrix(F&& transformed_column) const {
        // transformed_column(k, i) = (T phi_k)(x_i)
        MatrixXcd U(N, N);
        for (int k = 0; k < N; ++k)
            for (int j = 0; j < N; ++j) {
                Complex s = 0;
                for (int i = 0; i < nq; ++i)
                    s += w(i) * basis(j, i) * transformed_column(k, i);
                U(j, k) = s;
            }
        return U;
    }
};

/// Complex Gaussian-polynomial family p(x) exp(-pi a x^2 + 2 pi i b x + c)
/// with Re(a) > 0.  Closed under translation, modulation, quadratic phases,
/// dilations and the Fourier transform with kernel e^{-2 pi i x y}.
struct GaussFun {
    Complex a{1.0, 0.0};
    Complex b{0.0, 0.0};
    Complex c{0.0, 0.0};              // additive log-prefactor
    std::vector<Complex> poly{1.0};   // coefficients, constant term first

    static GaussFun gaussian(double t) {  // e^{-pi t x^2}
        GaussFun f;
        f.a = t;
        return f;
    }

    Complex eval(double x) const {
        Complex p = 0;
        for (size_t j = poly.size(); j-- > 0;) p = p * x + poly[j];
        Complex expo = -pi * a * x * x + 2.0 * pi * Complex(0, 1) * b * x + c;
        return p * std::exp(expo);
    }

    /// f(x + v)
    GaussFun translate(double v) const {
        GaussFun g = *this;
        g.b = b + Complex(0, 1) * a * v;
        g.c = c - pi * a * v * v + 2.0 * pi * Complex(0, 1) * b * v;
        // shift the polynomial
        std::vector<Complex> np(poly.size(), 0.0);
        for (size_t j = 0; j < poly.size(); ++j) {
            // poly_j (x+v)^j expanded
            double binom = 1;
            for (size_t k = 0; k <= j; ++k) {
                np[k] += poly[j] * binom * std::pow(v, double(j - k));
                binom = binom * double(j - k) / double(k + 1);
            }
        }
        g.poly = std::move(np);
        return g;
    }
    /// e^{2 pi i lambda x} f(x), lambda possibly complex
    GaussFun modulate(Complex lambda) const {
        GaussFun g = *this;
        g.b = b + lambda;
        return g;
    }
    /// e^{2 pi i t} f(x)
    GaussFun phase(double t) const {
        GaussFun g = *this;
        g.c = c + 2.0 * pi * Complex(0, 1) * t;
        return g;
    }
    /// e^{i pi beta x^2} f(x)
    GaussFun quad_phase(double beta) const {
        GaussFun g = *this;
        g.a = a - Complex(0, 1) * beta;
        return g;
    }
    /// |s|^{1/2} f(x s)
    GaussFun dilate(double s) const {
        GaussFun g = *this;
        g.a = a * s * s;
        g.b = b * s;
        g.c = c + 0.5 * std::log(std::abs(s));
        for (size_t j = 0; j < poly.size(); ++j) g.poly[j] = poly[j] * std::pow(s, double(j));
        return g;
    }
    /// d/dx of the whole function, as a family member
    GaussFun derivative() const {
        GaussFun g = *this;
        std::vector<Complex> np(poly.size() + 1, 0.0);
        for (size_t j = 1; j < poly.size(); ++j) np[j - 1] += poly[j] * double(j);
        // p * (-2 pi a x + 2 pi i b)
        for (size_t j = 0; j < poly.size(); ++j) {
            np[j + 1] += poly[j] * (-2.0 * pi * a);
            np[j] += poly[j] * (2.0 * pi * Complex(0, 1) * b);
        }
        while (np.size() > 1 && std::abs(np.back()) == 0.0) np.pop_back();
        g.poly = std::move(np);
        return g;
    }

    /// Fourier transform with kernel e^{-2 pi i x y}:
    /// the base Gaussian maps to a^{-1/2} e^{-pi (y-b)^2 / a} and a factor
    /// x^m becomes (i/2pi)^m d^m/dy^m.
    GaussFun fourier() const {
        GaussFun base;
        base.a = 1.0 / a;
        base.b = -Complex(0, 1) * b / a;
        base.c = c - pi * b * b / a - 0.5 * std::log(a);
        base.poly = {1.0};
        // accumulate sum_m poly_m (i/2pi)^m (d/dy)^m base
        GaussFun out = base;
        out.poly = {0.0};
        GaussFun deriv = base;
        Complex factor = 1.0;
        for (size_t m = 0; m < poly.size(); ++m) {
            if (m > 0) {
                deriv = deriv.derivative();
                factor *= Complex(0, 1) / (2.0 * pi);
            }
            // out += poly[m] * factor * deriv  (same exponential data)
            if (out.poly.size() < deriv.poly.size()) out.poly.resize(deriv.poly.size(), 0.0);
            for (size_t j = 0; j < deriv.poly.size(); ++j)
                out.poly[j] += poly[m] * factor * deriv.poly[j];
        }
        return out;
    }
};

/// phi_k as a member of the Gaussian-polynomial family (coefficient form;
/// numerically sensible for moderate k)
inline GaussFun hermite_fun(int k) {
    // psi_k(u) = h_k(u) e^{-u^2/2} with h the orthonormalized Hermite
    // polynomial; in x-coordinates u = sqrt(2 pi) x.
    std::vector<double> h0{std::pow(pi, -0.25)}, hm1;
    for (int j = 0; j < k; ++j) {
        std::vector<double> h1(h0.size() + 1, 0.0);
        double c1 = std::sqrt(2.0 / (j + 1));
        for (size_t i = 0; i < h0.size(); ++i) h1[i + 1] += c1 * h0[i];
        if (!hm1.empty()) {
            double c2 = std::sqrt(double(j) / (j + 1));
            for (size_t i = 0; i < hm1.size(); ++i) h1[i] -= c2 * hm1[i];
        }
        hm1 = std::move(h0);
        h0 = std::move(h1);
    }
    GaussFun f;
    f.a = 1.0;  // e^{-pi x^2}
    f.c = 0.25 * std::log(2.0 * pi);
    f.poly.assign(h0.size(), 0.0);
    double s = std::sqrt(2.0 * pi);
    for (size_t j = 0; j < h0.size(); ++j) f.poly[j] = h0[j] * std::pow(s, double(j));
    return f;
}

/// || F phi_k - (-i)^k phi_k || via quadrature, with the transform taken in
/// closed form inside the Gaussian family.  For general alpha the unitary
/// transform is F f(y) = alpha^{1/2} (F_1 f)(alpha y).
inline double hermite_fourier_check(int k, const HermiteTruncation& T) {
    if (k >= T.N) throw Error("PieceMismatch", "k exceeds the truncation");
    GaussFun f = hermite_fun(k).dilate(std::sqrt(T.alpha));
    GaussFun fhat = f.fourier();
    Complex eig = std::pow(Complex(0, -1), k);
    double root_alpha = std::sqrt(T.alpha);
    double s2 = 0;
    for (int i = 0; i < T.nq; ++i) {
        Complex d = root_alpha * fhat.eval(T.alpha * T.x(i)) - eig * T.basis(k, i);
        s2 += T.w(i) * std::norm(d);
    }
    return std::sqrt(s2);
}

enum class WeilKind { identity, scaling, quad_mult, fourier };

struct WeilGenerator {
    WeilKind kind = WeilKind::identity;
    double param = 1.0;  // s for m(diag(s)), b for n(b)
};

/// N x N matrix of a Weil generator over the truncation, by quadrature
inline MatrixXcd weil_operator(const WeilGenerator& g, const HermiteTruncation& T) {
    switch (g.kind) {
        case WeilKind::identity:
            return MatrixXcd::Identity(T.N, T.N);
        case WeilKind::scaling: {
            double s = g.param, root = std::sqrt(std::abs(s));
            // (U f)(x) = |s|^{1/2} f(x s): evaluate columns by the stable
            // recurrence at the scaled nodes
            MatrixXd cols(T.N, T.nq);
            double scale = std::sqrt(2.0 * pi * T.alpha);
            double quarter = std::pow(2.0 * pi * T.alpha, 0.25);
            for (int i = 0; i < T.nq; ++i) {
                double u = scale * T.x(i) * s;
                double p0 = std::pow(pi, -0.25) * std::exp(-u * u / 2.0), pm1 = 0.0;
                for (int k = 0; k < T.N; ++k) {
                    cols(k, i) = root * quarter * p0;
                    double p1 = std::sqrt(2.0 / (k + 1)) * u * p0 -
                                std::sqrt(double(k) / (k + 1)) * pm1;
                    pm1 = p0;
                    p0 = p1;
                }
            }
            return T.operator_matrix([&](int k, int i) { return Complex(cols(k, i)); });
        }
        case WeilKind::quad_mult: {
            double b = g.param;
            // psi-bar(b x^2 / 2) = e^{-i pi alpha b x^2}
            return T.operator_matrix([&](int k, int i) {
                double x = T.x(i);
                return T.basis(k, i) * std::exp(Complex(0, -pi * T.alpha * b * x * x));
            });
        }
        case WeilKind::fourier: {
            // double quadrature against the kernel alpha^{1/2} e^{-2 pi i alpha x y}
            double root_alpha = std::sqrt(T.alpha);
            MatrixXcd cols(T.N, T.nq);
            for (int k = 0; k < T.N; ++k)
                for (int i = 0; i < T.nq; ++i) {
                    Complex s = 0;
                    for (int l = 0; l < T.nq; ++l)
                        s += T.w(l) * T.basis(k, l) *
                             std::exp(Complex(0, -2.0 * pi * T.alpha * T.x(i) * T.x(l)));
                    cols(k, i) = root_alpha * s;
                }
            return T.operator_matrix([&](int k, int i) { return cols(k, i); });
        }
    }
    return MatrixXcd::Identity(T.N, T.N);
}

/// Truncation-stable block of a generator.  A dilation by s carries the
/// classical phase-space ellipse of mode k up to mode k s^2 and the
/// quadratic multiplier n(b) shears it by a comparable factor, so entries
/// with k beyond N/s^2-ish are genuinely lost to the truncation (the defect
/// there is O(1) at any N).  N/6 is a safe margin for the exercised
/// parameters s = 2, b = 1.
inline int stable_block(const WeilGenerator& g, int N) {
    switch (g.kind) {
        case WeilKind::identity:
        case WeilKind::fourier:
            return N / 2;
        case WeilKind::scaling:
        case WeilKind::quad_mult:
            return N / 6;
    }
    return N / 6;
}

/// spectral norm of the restriction of M to the first "block" columns
inline double block_norm(const MatrixXcd& M, int block) {
    MatrixXcd R = M.leftCols(block);
    Eigen::JacobiSVD<MatrixXcd> svd(R);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

/// deviation of U from unitarity on the top block
inline double unitarity_defect(const MatrixXcd& U, int block) {
    MatrixXcd G = U.adjoint() * U - MatrixXcd::Identity(U.rows(), U.cols());
    return G.topLeftCorner(block, block).cwiseAbs().maxCoeff();
}

/// Intertwining residuals of the Fourier matrix.
///   scaling s:   F M(s) = M(1/s) F exactly in the limit
///   quadratic b: F N(b) F = c N(-1/b) F M(-b) N(-1/b) projectively, the
///                Bruhat relation n(b) w = w^-1 n(-1/b) w m(-b) n(-1/b);
///                the unimodular constant c is fitted on the block.
inline double intertwine_check(const WeilGenerator& g, const HermiteTruncation& T,
                               const MatrixXcd& F, int block) {
    switch (g.kind) {
        case WeilKind::identity:
            return block_norm(F - F, block);
        case WeilKind::scaling: {
            MatrixXcd lhs = F * weil_operator({WeilKind::scaling, g.param}, T);
            MatrixXcd rhs = weil_operator({WeilKind::scaling, 1.0 / g.param}, T) * F;
            return block_norm(lhs - rhs, block) / block_norm(rhs, block);
        }
        case WeilKind::quad_mult: {
            double b = g.param;
            MatrixXcd lhs = F * weil_operator({WeilKind::quad_mult, b}, T) * F;
            MatrixXcd rhs = weil_operator({WeilKind::quad_mult, -1.0 / b}, T) * F *
                            weil_operator({WeilKind::scaling, -b}, T) *
                            weil_operator({WeilKind::quad_mult, -1.0 / b}, T);
            // projective comparison: fit the metaplectic unit c on the block
            MatrixXcd L = lhs.topLeftCorner(block, block), R = rhs.topLeftCorner(block, block);
            Complex c = (R.adjoint() * L).trace() / (R.adjoint() * R).trace();
            c /= std::abs(c);
            return block_norm(lhs - c * rhs, block) / block_norm(rhs, block);
        }
        case WeilKind::fourier:
            return 0.0;
    }
    return 0.0;
}

struct PoissonResult {
    Complex lhs = 0, rhs = 0, boundary_lhs = 0, boundary_rhs = 0;
    double diff = 0;
};

/// both sides of the summation formula over the integer lattice with the
/// boundary term f(0); n = 1, or n = 2 through a product of two factors
inline PoissonResult poisson_sum(const std::vector<GaussFun>& factors, int radius) {
    PoissonResult out;
    std::vector<GaussFun> hats;
    for (auto& f : factors) hats.push_back(f.fourier());
    auto lattice_sum = [&](const std::vector<GaussFun>& fs, bool origin_only) {
        if (fs.size() == 1) {
            Complex s = origin_only ? fs[0].eval(0) : 0;
            if (!origin_only)
                for (int k = -radius; k <= radius; ++k) s += fs[0].eval(k);
            return s;
        }
        Complex s = 0;
        if (origin_only) return fs[0].eval(0) * fs[1].eval(0);
        Complex s0 = 0, s1 = 0;
        for (int k = -radius; k <= radius; ++k) {
            s0 += fs[0].eval(k);
            s1 += fs[1].eval(k);
        }
        s = s0 * s1;
        return s;
    };
    out.lhs = lattice_sum(factors, false);
    out.rhs = lattice_sum(hats, false);
    out.boundary_lhs = lattice_sum(factors, true);
    out.boundary_rhs = lattice_sum(hats, true);
    out.diff = std::abs(out.lhs - out.rhs);
    return out;
}

/// operator words acting on the Gaussian family (rightmost acts first)
struct ThetaGenerator {
    enum class Kind { translate, heis, scale, quad, fourier } kind;
    double v = 0, lambda = 0, t = 0, param = 1;
};

inline GaussFun apply_word(const std::vector<ThetaGenerator>& word, GaussFun f) {
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        switch (it->kind) {
            case ThetaGenerator::Kind::translate:
                f = f.translate(it->v);
                break;
            case ThetaGenerator::Kind::heis:
                // psi(<x,lambda> + <v,lambda>/2 + t) f(x+v)
                f = f.translate(it->v)
                        .modulate(it->lambda)
                        .phase(it->v * it->lambda / 2 + it->t);
                break;
            case ThetaGenerator::Kind::scale:
                f = f.dilate(it->param);
                break;
            case ThetaGenerator::Kind::quad:
                f = f.quad_phase(-it->param);  // psi-bar(b x^2/2)
                break;
            case ThetaGenerator::Kind::fourier:
                f = f.fourier();
                break;
        }
    }
    return f;
}

/// Theta functional: sum over the nonzero integers of R(word) f plus the
/// boundary value at the origin
inline Complex theta_value(const std::vector<ThetaGenerator>& word, const GaussFun& f,
                           int radius) {
    GaussFun g = apply_word(word, f);
    Complex s = 0;
    for (int k = -radius; k <= radius; ++k)
        if (k != 0) s += g.eval(k);
    return s + g.eval(0);
}

/// | Theta_f(gamma h) - Theta_f(h) |
inline double theta_invariance(const std::vector<ThetaGenerator>& gamma,
                               const std::vector<ThetaGenerator>& h, const GaussFun& f,
                               int radius) {
    std::vector<ThetaGenerator> gh = gamma;
    gh.insert(gh.end(), h.begin(), h.end());
    return std::abs(theta_value(gh, f, radius) - theta_value(h, f, radius));
}

} // namespace qweyl::spectral
