#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "scalar.hpp"

#include "json.hpp"

namespace qweyl {

/// Finite-dimensional Lie algebra presented by structure constants over
/// Scalar.  Brackets are stored for i < j; antisymmetry fills in the rest
/// and the Jacobi identity is verified at construction.
class LieAlgebra {
public:
    using Combo = std::map<int, Scalar>;  // sparse coordinates in the basis

    LieAlgebra() = default;
    LieAlgebra(std::vector<std::string> labels, std::map<std::pair<int, int>, Combo> table,
               bool check_jacobi = true)
        : labels_(std::move(labels)), table_(std::move(table)) {
        for (auto& [ij, combo] : table_)
            for (auto it = combo.begin(); it != combo.end();)
                it = it->second.is_zero() ? combo.erase(it) : std::next(it);
        if (check_jacobi) {
            auto bad = jacobi_violation();
            if (bad)
                throw Error("JacobiFailure", "triple (" + std::to_string(std::get<0>(*bad)) +
                                                 "," + std::to_string(std::get<1>(*bad)) + "," +
                                                 std::to_string(std::get<2>(*bad)) + ")");
        }
    }

    int dim() const { return int(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }

    static void add_to(Combo& acc, const Combo& inc, const Scalar& factor) {
        for (auto& [k, s] : inc) {
            auto it = acc.find(k);
            if (it == acc.end()) {
                Scalar v = factor * s;
                if (!v.is_zero()) acc.emplace(k, std::move(v));
            } else {
                it->second += factor * s;
                if (it->second.is_zero()) acc.erase(it);
            }
        }
    }

    /// [e_i, e_j] in coordinates, any i, j
    Combo bracket(int i, int j) const {
        if (i == j) return {};
        bool flip = i > j;
        if (flip) std::swap(i, j);
        auto it = table_.find({i, j});
        Combo r = it == table_.end() ? Combo{} : it->second;
        if (flip)
            for (auto& [k, s] : r) s = -s;
        return r;
    }

    /// [u, v] for coordinate vectors
    Combo bracket(const Combo& u, const Combo& v) const {
        Combo r;
        for (auto& [i, a] : u)
            for (auto& [j, b] : v) add_to(r, bracket(i, j), a * b);
        return r;
    }

    std::optional<std::tuple<int, int, int>> jacobi_violation() const {
        int n = dim();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) {
                    Combo s = bracket(Combo{{i, Scalar::one()}}, bracket(j, k));
                    add_to(s, bracket(Combo{{j, Scalar::one()}}, bracket(k, i)), Scalar::one());
                    add_to(s, bracket(Combo{{k, Scalar::one()}}, bracket(i, j)), Scalar::one());
                    if (!s.empty()) return std::make_tuple(i, j, k);
                }
        return std::nullopt;
    }

    bool constants_are_rational() const {
        for (auto& [ij, combo] : table_)
            for (auto& [k, s] : combo)
                if (!s.is_rational()) return false;
        return true;
    }

    /// Killing form B(e_i, e_j) = tr(ad e_i ad e_j)
    Scalar killing(int i, int j) const {
        Scalar sum;
        int n = dim();
        for (int k = 0; k < n; ++k)
            for (auto& [l, a] : bracket(i, k)) {
                Combo cjl = bracket(j, l);
                auto it = cjl.find(k);
                if (it != cjl.end()) sum += a * it->second;
            }
        return sum;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["basis"] = labels_;
        nlohmann::json rows = nlohmann::json::array();
        for (auto& [ij, combo] : table_) {
            nlohmann::json entries = nlohmann::json::array();
            for (auto& [k, s] : combo) entries.push_back({k, s.str()});
            rows.push_back({ij.first, ij.second, entries});
        }
        j["brackets"] = rows;
        return j;
    }

private:
    std::vector<std::string> labels_;
    std::map<std::pair<int, int>, Combo> table_;
};

/// signature (n_plus, n_minus, n_zero) of a symmetric rational matrix by
/// exact congruence diagonalization
struct Signature {
    int plus = 0, minus = 0, zero = 0;
    bool operator==(const Signature&) const = default;
    std::string str() const {
        return "(" + std::to_string(plus) + "," + std::to_string(minus) + "," +
               std::to_string(zero) + ")";
    }
};

inline Signature symmetric_signature(std::vector<std::vector<Rational>> M) {
    int n = int(M.size());
    Signature sig;
    for (int r = 0; r < n; ++r) {
        int piv = -1;
        for (int i = r; i < n; ++i)
            if (M[i][i] != 0) { piv = i; break; }
        if (piv == -1) {
            // fold a nonzero off-diagonal entry onto the diagonal: e_a += e_b
            int a = -1, b = -1;
            for (int i = r; i < n && a == -1; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (M[i][j] != 0) { a = i; b = j; break; }
            if (a == -1) {
                sig.zero = n - r;
                return sig;
            }
            for (int k = 0; k < n; ++k) M[a][k] += M[b][k];
            for (int k = 0; k < n; ++k) M[k][a] += M[k][b];
            piv = a;
        }
        if (piv != r) {
            std::swap(M[piv], M[r]);
            for (int k = 0; k < n; ++k) std::swap(M[k][piv], M[k][r]);
        }
        for (int i = r + 1; i < n; ++i) {
            if (M[i][r] == 0) continue;
            Rational f = M[i][r] / M[r][r];
            for (int k = 0; k < n; ++k) M[i][k] -= f * M[r][k];
            for (int k = 0; k < n; ++k) M[k][i] -= f * M[k][r];
        }
        if (M[r][r] > 0) ++sig.plus;
        else ++sig.minus;
    }
    return sig;
}

/// Killing signature of a Lie algebra with rational structure constants.
inline Signature killing_signature(const LieAlgebra& L) {
    if (!L.constants_are_rational())
        throw Error("NonRealForm", "structure constants involve i or t");
    int n = L.dim();
    std::vector<std::vector<Rational>> B(n, std::vector<Rational>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Rational v = L.killing(i, j).to_rational();
            B[i][j] = v;
            B[j][i] = v;
        }
    return symmetric_signature(std::move(B));
}

/// Result of an iterative bracket closure: the basis elements, the structure
/// constants, and an exact decomposition oracle for further elements.
template <class E>
struct Closure {
    std::vector<E> basis;
    LieAlgebra algebra;
    std::function<std::optional<LieAlgebra::Combo>(const E&)> decompose;
};

/// Closes a spanning set under the supplied bracket.  reduce_fn maps an
/// element to its canonical form; coords_fn coordinatizes canonical forms as
/// sparse maps over a totally ordered key.  Exact Gauss-Jordan elimination
/// maintains fully reduced echelon rows so pivots stay disjoint.
template <class E, class BracketFn, class ReduceFn, class CoordsFn, class LabelFn>
Closure<E> close_under_bracket(const std::vector<E>& generators, BracketFn bracket_fn,
                               ReduceFn reduce_fn, CoordsFn coords_fn, int max_dim,
                               LabelFn label_fn) {
    if (generators.empty()) throw Error("NotClosedWithinBound", "no generators");
    using Coords = decltype(coords_fn(generators.front()));
    using Key = typename Coords::key_type;
    using Combo = LieAlgebra::Combo;

    struct Row {
        Coords vec;   // normalized: coefficient 1 at the pivot key
        Combo expr;   // the same vector expressed in basis elements
    };
    struct State {
        std::map<Key, Row> rows;  // keyed by pivot
        std::vector<E> basis;
    };
    auto st = std::make_shared<State>();

    auto eliminate = [st](Coords c) -> std::pair<Coords, Combo> {
        Combo combo;
        // rows have pairwise disjoint pivot support, one pass suffices
        for (auto& [pivot, row] : st->rows) {
            auto it = c.find(pivot);
            if (it == c.end()) continue;
            Scalar f = it->second;
            for (auto& [k, s] : row.vec) {
                auto jt = c.find(k);
                if (jt == c.end()) {
                    Scalar v = -(f * s);
                    if (!v.is_zero()) c.emplace(k, std::move(v));
                } else {
                    jt->second -= f * s;
                    if (jt->second.is_zero()) c.erase(jt);
                }
            }
            LieAlgebra::add_to(combo, row.expr, f);
        }
        return {std::move(c), std::move(combo)};
    };

    // rem must already be reduced against all rows; partial is its eliminated
    // expression so that elem = rem + partial in coordinates
    auto insert_new = [st](const E& elem, Coords rem, const Combo& partial) {
        auto pit = rem.end();
        for (auto it = rem.begin(); it != rem.end(); ++it)
            if (it->second.is_unit()) { pit = it; break; }
        if (pit == rem.end())
            throw Error("NonUnitPivot", "no invertible pivot available in closure step");
        Key pivot = pit->first;
        Scalar inv = pit->second.inverse();
        int idx = int(st->basis.size());
        st->basis.push_back(elem);
        Row row;
        for (auto& [k, s] : rem) {
            Scalar v = inv * s;
            if (!v.is_zero()) row.vec[k] = v;
        }
        row.expr[idx] = inv;
        LieAlgebra::add_to(row.expr, partial, -inv);
        // keep the system fully reduced: clear the new pivot from older rows
        for (auto& [pk, other] : st->rows) {
            auto it = other.vec.find(pivot);
            if (it == other.vec.end()) continue;
            Scalar f = it->second;
            for (auto& [k, s] : row.vec) {
                auto jt = other.vec.find(k);
                if (jt == other.vec.end()) {
                    Scalar v = -(f * s);
                    if (!v.is_zero()) other.vec.emplace(k, std::move(v));
                } else {
                    jt->second -= f * s;
                    if (jt->second.is_zero()) other.vec.erase(jt);
                }
            }
            LieAlgebra::add_to(other.expr, row.expr, -f);
        }
        st->rows.emplace(pivot, std::move(row));
        return idx;
    };

    for (auto& g : generators) {
        E r = reduce_fn(g);
        Coords c = coords_fn(r);
        if (c.empty()) continue;
        auto [rem, combo] = eliminate(std::move(c));
        if (!rem.empty()) {
            insert_new(r, std::move(rem), combo);
            if (int(st->basis.size()) > max_dim)
                throw Error("NotClosedWithinBound",
                            "dimension exceeded " + std::to_string(max_dim));
        }
    }

    std::map<std::pair<int, int>, Combo> table;
    // triangular worklist: for fixed j, bracket against all i < j.  Elements
    // appended during the sweep get indices > j and are reached later.
    for (size_t j = 1; j < st->basis.size(); ++j)
        for (size_t i = 0; i < j; ++i) {
            E br = reduce_fn(bracket_fn(st->basis[i], st->basis[j]));
            auto [rem, combo] = eliminate(coords_fn(br));
            if (!rem.empty()) {
                // br itself becomes the new basis element, so [b_i, b_j] = b_idx
                int idx = insert_new(br, std::move(rem), combo);
                if (int(st->basis.size()) > max_dim)
                    throw Error("NotClosedWithinBound",
                                "dimension exceeded " + std::to_string(max_dim));
                table[{int(i), int(j)}] = Combo{{idx, Scalar::one()}};
            } else if (!combo.empty()) {
                table[{int(i), int(j)}] = std::move(combo);
            }
        }

    std::vector<std::string> labels;
    for (size_t k = 0; k < st->basis.size(); ++k)
        labels.push_back(label_fn(st->basis[k], int(k)));

    Closure<E> out;
    out.basis = st->basis;
    out.algebra = LieAlgebra(std::move(labels), std::move(table));
    out.decompose = [st, eliminate, reduce_fn, coords_fn](const E& elem)
        -> std::optional<Combo> {
        auto [rem, combo] = eliminate(coords_fn(reduce_fn(elem)));
        if (!rem.empty()) return std::nullopt;
        return combo;
    };
    return out;
}

/// Linear map between Lie algebras given columnwise on the source basis.
struct LieMap {
    const LieAlgebra* source = nullptr;
    const LieAlgebra* target = nullptr;
    std::vector<LieAlgebra::Combo> columns;  // image of source e_i

    LieAlgebra::Combo apply(const LieAlgebra::Combo& u) const {
        LieAlgebra::Combo r;
        for (auto& [i, a] : u) LieAlgebra::add_to(r, columns[i], a);
        return r;
    }

    bool is_involution() const {
        for (int i = 0; i < source->dim(); ++i)
            if (apply(columns[i]) != LieAlgebra::Combo{{i, Scalar::one()}}) return false;
        return true;
    }
};

/// true iff phi([e_i, e_j]) = [phi e_i, phi e_j] on all basis pairs;
/// returns the first failing pair otherwise.
inline std::pair<bool, std::pair<int, int>> verify_hom(const LieMap& phi) {
    int n = phi.source->dim();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            auto lhs = phi.apply(phi.source->bracket(i, j));
            auto rhs = phi.target->bracket(phi.columns[i], phi.columns[j]);
            if (lhs != rhs) return {false, {i, j}};
        }
    return {true, {-1, -1}};
}

/// Rational matrices and the so(p, q) reference realization with J diagonal,
/// p entries +1 followed by q entries -1.  Basis F_{kl} = d_l E_{kl} -
/// d_k E_{lk} for k < l satisfies F^T J + J F = 0.
using RatMat = std::vector<std::vector<Rational>>;

inline RatMat mat_mul(const RatMat& A, const RatMat& B) {
    size_t n = A.size(), m = B[0].size(), kk = B.size();
    RatMat C(n, std::vector<Rational>(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < kk; ++l) {
            if (A[i][l] == 0) continue;
            for (size_t j = 0; j < m; ++j) C[i][j] += A[i][l] * B[l][j];
        }
    return C;
}

inline RatMat mat_sub(RatMat A, const RatMat& B) {
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < A[i].size(); ++j) A[i][j] -= B[i][j];
    return A;
}

inline RatMat mat_comm(const RatMat& A, const RatMat& B) {
    return mat_sub(mat_mul(A, B), mat_mul(B, A));
}

/// exact inverse of a rational matrix (throws on singular input)
inline RatMat rat_inverse(RatMat M) {
    int n = int(M.size());
    RatMat inv(n, std::vector<Rational>(n, 0));
    for (int i = 0; i < n; ++i) inv[i][i] = 1;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (M[r][c] != 0) { piv = r; break; }
        if (piv == -1) throw Error("SingularMatrix", "matrix has no inverse");
        std::swap(M[piv], M[c]);
        std::swap(inv[piv], inv[c]);
        Rational f = M[c][c];
        for (int j = 0; j < n; ++j) { M[c][j] /= f; inv[c][j] /= f; }
        for (int r = 0; r < n; ++r) {
            if (r == c || M[r][c] == 0) continue;
            Rational g = M[r][c];
            for (int j = 0; j < n; ++j) {
                M[r][j] -= g * M[c][j];
                inv[r][j] -= g * inv[c][j];
            }
        }
    }
    return inv;
}

inline int rat_rank(RatMat M) {
    int n = int(M.size()), m = n ? int(M[0].size()) : 0, rank = 0;
    for (int c = 0; c < m && rank < n; ++c) {
        int piv = -1;
        for (int r = rank; r < n; ++r)
            if (M[r][c] != 0) { piv = r; break; }
        if (piv == -1) continue;
        std::swap(M[piv], M[rank]);
        for (int r = rank + 1; r < n; ++r) {
            if (M[r][c] == 0) continue;
            Rational f = M[r][c] / M[rank][c];
            for (int j = c; j < m; ++j) M[r][j] -= f * M[rank][j];
        }
        ++rank;
    }
    return rank;
}

inline std::map<std::pair<int, int>, Scalar> mat_coords(const RatMat& M) {
    std::map<std::pair<int, int>, Scalar> c;
    for (size_t i = 0; i < M.size(); ++i)
        for (size_t j = 0; j < M[i].size(); ++j)
            if (M[i][j] != 0) c[{int(i), int(j)}] = Scalar(M[i][j]);
    return c;
}

inline Closure<RatMat> so_matrix_algebra(int p, int q, int max_dim = 512) {
    int n = p + q;
    std::vector<int> d(n);
    for (int i = 0; i < n; ++i) d[i] = i < p ? 1 : -1;
    std::vector<RatMat> gens;
    for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
            RatMat M(n, std::vector<Rational>(n, 0));
            M[k][l] = d[l];
            M[l][k] = -d[k];
            gens.push_back(std::move(M));
        }
    return close_under_bracket(
        gens, mat_comm, [](const RatMat& m) { return m; }, mat_coords, max_dim,
        [](const RatMat&, int k) { return "F" + std::to_string(k); });
}

} // namespace qweyl
