#include "tropic/exact_linalg.hpp"

#include <algorithm>
#include <cassert>

namespace tropic {

IntMat IntMat::from_rows(const std::vector<IntVec>& rws, size_t width) {
    IntMat M(rws.size(), width);
    for (size_t i = 0; i < rws.size(); ++i)
        for (size_t j = 0; j < width; ++j) M.at(i, j) = rws[i][j];
    return M;
}

IntMat IntMat::from_cols(const std::vector<IntVec>& cls, size_t height) {
    IntMat M(height, cls.size());
    for (size_t j = 0; j < cls.size(); ++j)
        for (size_t i = 0; i < height; ++i) M.at(i, j) = cls[j][i];
    return M;
}

std::vector<IntVec> IntMat::col_vectors() const {
    std::vector<IntVec> out(cols, IntVec(rows));
    for (size_t j = 0; j < cols; ++j)
        for (size_t i = 0; i < rows; ++i) out[j][i] = at(i, j);
    return out;
}

std::vector<IntVec> IntMat::row_vectors() const {
    std::vector<IntVec> out(rows, IntVec(cols));
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) out[i][j] = at(i, j);
    return out;
}

RatMat RatMat::from_rows(const std::vector<RatVec>& rws, size_t width) {
    RatMat M(rws.size(), width);
    for (size_t i = 0; i < rws.size(); ++i)
        for (size_t j = 0; j < width; ++j) M.at(i, j) = rws[i][j];
    return M;
}

IntVec primitive_vector(const IntVec& v) {
    Int g = content(v);
    if (g == 0) throw ZeroVectorError();
    IntVec out(v);
    for (Int& e : out) e /= g;
    return out;
}

namespace {

// Row reduction to reduced row echelon form; returns pivot column per row.
std::vector<size_t> rref(RatMat& M) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < M.cols && row < M.rows; ++col) {
        size_t sel = row;
        while (sel < M.rows && M.at(sel, col) == 0) ++sel;
        if (sel == M.rows) continue;
        if (sel != row)
            for (size_t j = 0; j < M.cols; ++j)
                std::swap(M.at(sel, j), M.at(row, j));
        Rat inv = 1 / M.at(row, col);
        for (size_t j = col; j < M.cols; ++j) M.at(row, j) *= inv;
        for (size_t i = 0; i < M.rows; ++i) {
            if (i == row || M.at(i, col) == 0) continue;
            Rat f = M.at(i, col);
            for (size_t j = col; j < M.cols; ++j)
                M.at(i, j) -= f * M.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::vector<IntVec> kernel_basis(const RatMat& M) {
    RatMat R = M;
    std::vector<size_t> pivots = rref(R);
    std::vector<bool> is_pivot(M.cols, false);
    for (size_t p : pivots) is_pivot[p] = true;

    std::vector<IntVec> basis;
    for (size_t free_col = 0; free_col < M.cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        RatVec v(M.cols, Rat(0));
        v[free_col] = 1;
        for (size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = -R.at(r, free_col);
        basis.push_back(primitive_part(v));
    }
    return basis;
}

size_t rank(const RatMat& M) {
    RatMat R = M;
    return rref(R).size();
}

size_t rank_of_int_vectors(const std::vector<IntVec>& vectors, size_t width) {
    RatMat M(vectors.size(), width);
    for (size_t i = 0; i < vectors.size(); ++i)
        for (size_t j = 0; j < width; ++j) M.at(i, j) = Rat(vectors[i][j]);
    return rank(M);
}

namespace {

void col_swap(IntMat& M, size_t a, size_t b) {
    for (size_t i = 0; i < M.rows; ++i) std::swap(M.at(i, a), M.at(i, b));
}

void col_negate(IntMat& M, size_t a) {
    for (size_t i = 0; i < M.rows; ++i) M.at(i, a) = -M.at(i, a);
}

// col_a += f * col_b
void col_addmul(IntMat& M, size_t a, size_t b, const Int& f) {
    for (size_t i = 0; i < M.rows; ++i) M.at(i, a) += f * M.at(i, b);
}

// In-place column Hermite reduction of M, applying the same column
// operations to the optional tracker matrix T.
size_t hermite_reduce(IntMat& M, IntMat* T) {
    size_t pivot_col = 0;
    for (size_t row = 0; row < M.rows && pivot_col < M.cols; ++row) {
        // Euclidean elimination across columns pivot_col..end on this row.
        while (true) {
            size_t best = M.cols;
            for (size_t j = pivot_col; j < M.cols; ++j) {
                if (M.at(row, j) == 0) continue;
                if (best == M.cols ||
                    cmp(abs(M.at(row, j)), abs(M.at(row, best))) < 0)
                    best = j;
            }
            if (best == M.cols) break;  // row is zero from pivot_col on
            if (best != pivot_col) {
                col_swap(M, pivot_col, best);
                if (T) col_swap(*T, pivot_col, best);
            }
            bool cleared = true;
            for (size_t j = pivot_col + 1; j < M.cols; ++j) {
                if (M.at(row, j) == 0) continue;
                Int q = M.at(row, j) / M.at(row, pivot_col);  // truncated
                if (q != 0) {
                    col_addmul(M, j, pivot_col, -q);
                    if (T) col_addmul(*T, j, pivot_col, -q);
                }
                if (M.at(row, j) != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (M.at(row, pivot_col) == 0) continue;
        if (M.at(row, pivot_col) < 0) {
            col_negate(M, pivot_col);
            if (T) col_negate(*T, pivot_col);
        }
        // Reduce earlier columns in this pivot row into [0, pivot).
        for (size_t j = 0; j < pivot_col; ++j) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), M.at(row, j).get_mpz_t(),
                       M.at(row, pivot_col).get_mpz_t());
            if (q != 0) {
                col_addmul(M, j, pivot_col, -q);
                if (T) col_addmul(*T, j, pivot_col, -q);
            }
        }
        ++pivot_col;
    }
    return pivot_col;  // rank
}

}  // namespace

IntMat column_hnf(const IntMat& M) {
    IntMat W = M;
    size_t r = hermite_reduce(W, nullptr);
    IntMat H(M.rows, r);
    for (size_t j = 0; j < r; ++j)
        for (size_t i = 0; i < M.rows; ++i) H.at(i, j) = W.at(i, j);
    return H;
}

std::vector<IntVec> lattice_canonical_basis(const std::vector<IntVec>& gens,
                                            size_t width) {
    if (gens.empty()) return {};
    return column_hnf(IntMat::from_cols(gens, width)).col_vectors();
}

std::vector<IntVec> integer_kernel_basis(const IntMat& M) {
    IntMat W = M;
    IntMat T(M.cols, M.cols);
    for (size_t i = 0; i < M.cols; ++i) T.at(i, i) = 1;
    size_t r = hermite_reduce(W, &T);
    std::vector<IntVec> gens;
    for (size_t j = r; j < M.cols; ++j) {
        IntVec v(M.cols);
        for (size_t i = 0; i < M.cols; ++i) v[i] = T.at(i, j);
        gens.push_back(std::move(v));
    }
    return lattice_canonical_basis(gens, M.cols);
}

std::vector<Int> smith_invariants(const IntMat& M) {
    IntMat W = M;
    size_t n = std::min(W.rows, W.cols);
    std::vector<Int> diag;

    auto row_addmul = [&](size_t a, size_t b, const Int& f) {
        for (size_t j = 0; j < W.cols; ++j) W.at(a, j) += f * W.at(b, j);
    };
    auto row_swap = [&](size_t a, size_t b) {
        for (size_t j = 0; j < W.cols; ++j) std::swap(W.at(a, j), W.at(b, j));
    };

    for (size_t t = 0; t < n; ++t) {
        // Find a nonzero entry in the trailing block.
        size_t pi = W.rows, pj = W.cols;
        for (size_t i = t; i < W.rows; ++i)
            for (size_t j = t; j < W.cols; ++j)
                if (W.at(i, j) != 0 &&
                    (pi == W.rows ||
                     cmp(abs(W.at(i, j)), abs(W.at(pi, pj))) < 0)) {
                    pi = i;
                    pj = j;
                }
        if (pi == W.rows) break;
        if (pi != t) row_swap(pi, t);
        if (pj != t) col_swap(W, pj, t);

        bool done = false;
        while (!done) {
            done = true;
            for (size_t i = t + 1; i < W.rows; ++i) {
                if (W.at(i, t) == 0) continue;
                Int q = W.at(i, t) / W.at(t, t);
                row_addmul(i, t, -q);
                if (W.at(i, t) != 0) {
                    row_swap(i, t);
                    done = false;
                }
            }
            for (size_t j = t + 1; j < W.cols; ++j) {
                if (W.at(t, j) == 0) continue;
                Int q = W.at(t, j) / W.at(t, t);
                col_addmul(W, j, t, -q);
                if (W.at(t, j) != 0) {
                    col_swap(W, j, t);
                    done = false;
                }
            }
        }
        if (W.at(t, t) < 0)
            for (size_t j = t; j < W.cols; ++j) W.at(t, j) = -W.at(t, j);
        diag.push_back(W.at(t, t));
    }

    // Divisibility normalization d_i | d_{i+1} via gcd/lcm sweeps.
    for (size_t i = 0; i + 1 < diag.size(); ++i) {
        for (size_t j = i + 1; j < diag.size(); ++j) {
            if (diag[j] % diag[i] == 0) continue;
            Int g, l;
            mpz_gcd(g.get_mpz_t(), diag[i].get_mpz_t(), diag[j].get_mpz_t());
            mpz_lcm(l.get_mpz_t(), diag[i].get_mpz_t(), diag[j].get_mpz_t());
            diag[i] = g;
            diag[j] = l;
        }
    }
    return diag;
}

Int smith_index(const IntMat& M) {
    Int p = 1;
    for (const Int& d : smith_invariants(M)) p *= d;
    return p;
}

std::vector<IntVec> annihilator_basis(const std::vector<IntVec>& vectors,
                                      size_t ambient_rank) {
    if (vectors.empty()) {
        std::vector<IntVec> id;
        for (size_t i = 0; i < ambient_rank; ++i) {
            IntVec e(ambient_rank, Int(0));
            e[i] = 1;
            id.push_back(std::move(e));
        }
        return id;
    }
    return integer_kernel_basis(IntMat::from_rows(vectors, ambient_rank));
}

std::vector<IntVec> saturation(const std::vector<IntVec>& sub,
                               size_t ambient_rank) {
    std::vector<IntVec> ann = annihilator_basis(sub, ambient_rank);
    if (ann.empty()) {
        // Full-rank span: saturation is all of Z^n.
        std::vector<IntVec> id;
        for (size_t i = 0; i < ambient_rank; ++i) {
            IntVec e(ambient_rank, Int(0));
            e[i] = 1;
            id.push_back(std::move(e));
        }
        return id;
    }
    std::vector<IntVec> sat =
        integer_kernel_basis(IntMat::from_rows(ann, ambient_rank));
    // ann(ann(empty)) would be Z^n; the empty set saturates to the zero
    // lattice, handled here.
    if (sub.empty() || rank_of_int_vectors(sub, ambient_rank) == 0) return {};
    return sat;
}

namespace {

// Coordinates of v in the canonical basis B (full column rank), or nullopt
// when v is outside the Q-span. Exact rational solve.
std::optional<RatVec> coords_in_basis(const IntVec& v,
                                      const std::vector<IntVec>& basis) {
    if (basis.empty()) return is_zero(v) ? std::optional<RatVec>(RatVec{})
                                         : std::nullopt;
    size_t n = v.size();
    RatMat M(n, basis.size());
    for (size_t j = 0; j < basis.size(); ++j)
        for (size_t i = 0; i < n; ++i) M.at(i, j) = Rat(basis[j][i]);
    RatVec rhs;
    rhs.reserve(n);
    for (const Int& e : v) rhs.emplace_back(e);
    return solve(M, rhs);
}

}  // namespace

std::optional<RatVec> solve(const RatMat& M, const RatVec& rhs) {
    RatMat A(M.rows, M.cols + 1);
    for (size_t i = 0; i < M.rows; ++i) {
        for (size_t j = 0; j < M.cols; ++j) A.at(i, j) = M.at(i, j);
        A.at(i, M.cols) = rhs[i];
    }
    std::vector<size_t> pivots = rref(A);
    if (!pivots.empty() && pivots.back() == M.cols)
        return std::nullopt;  // inconsistent
    RatVec x(M.cols, Rat(0));
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = A.at(r, M.cols);
    return x;
}

bool in_span(const IntVec& v, const std::vector<IntVec>& gens) {
    return coords_in_basis(v, lattice_canonical_basis(gens, v.size()))
        .has_value();
}

bool in_span(const RatVec& v, const std::vector<IntVec>& gens) {
    if (is_zero(v)) return true;
    return in_span(primitive_part(v), gens);
}

bool in_lattice(const IntVec& v, const std::vector<IntVec>& gens) {
    auto basis = lattice_canonical_basis(gens, v.size());
    auto coords = coords_in_basis(v, basis);
    if (!coords) return false;
    for (const Rat& c : *coords)
        if (c.get_den() != 1) return false;
    return true;
}

bool same_lattice(const std::vector<IntVec>& a, const std::vector<IntVec>& b) {
    for (const IntVec& v : a)
        if (!in_lattice(v, b)) return false;
    for (const IntVec& v : b)
        if (!in_lattice(v, a)) return false;
    return true;
}

LatticeIndex lattice_index(const std::vector<IntVec>& sub,
                           const std::vector<IntVec>& ambient) {
    size_t n = 0;
    if (!ambient.empty())
        n = ambient.front().size();
    else if (!sub.empty())
        n = sub.front().size();
    else
        return LatticeIndex::of(1);

    std::vector<IntVec> amb_basis = lattice_canonical_basis(ambient, n);
    std::vector<RatVec> sub_coords;
    for (size_t g = 0; g < sub.size(); ++g) {
        auto coords = coords_in_basis(sub[g], amb_basis);
        if (!coords) throw NotASublatticeError(g);
        for (const Rat& c : *coords)
            if (c.get_den() != 1) throw NotASublatticeError(g);
        sub_coords.push_back(*coords);
    }

    size_t amb_rank = amb_basis.size();
    RatMat C(amb_rank, sub_coords.size());
    for (size_t j = 0; j < sub_coords.size(); ++j)
        for (size_t i = 0; i < amb_rank; ++i) C.at(i, j) = sub_coords[j][i];
    if (rank(C) < amb_rank) return LatticeIndex::infinite();

    IntMat CI(amb_rank, sub_coords.size());
    for (size_t j = 0; j < sub_coords.size(); ++j)
        for (size_t i = 0; i < amb_rank; ++i)
            CI.at(i, j) = sub_coords[j][i].get_num();
    return LatticeIndex::of(smith_index(CI));
}

IntVec unimodular_covector(const IntVec& primitive) {
    // Iterated extended gcd over the entries.
    size_t n = primitive.size();
    IntVec phi(n, Int(0));
    Int g = 0;
    for (size_t i = 0; i < n; ++i) {
        if (primitive[i] == 0) continue;
        if (g == 0) {
            // phi so far: 1/primitive[i] sign-corrected below
            g = abs(primitive[i]);
            phi.assign(n, Int(0));
            phi[i] = primitive[i] > 0 ? 1 : -1;
            if (g == 1) break;
            continue;
        }
        Int s, t, g2;
        mpz_gcdext(g2.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(),
                   g.get_mpz_t(), primitive[i].get_mpz_t());
        for (Int& e : phi) e *= s;
        phi[i] += t;
        g = g2;
        if (g == 1) break;
    }
    if (g != 1) throw ZeroVectorError();
    return phi;
}

}  // namespace tropic
