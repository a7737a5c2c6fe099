#pragma once

#include <algorithm>
#include <initializer_list>
#include <sstream>
#include <vector>

#include "dmod/error.hpp"
#include "dmod/poly.hpp"
#include "dmod/rat.hpp"

namespace dmod {

// Dense rational matrix. Everything downstream (quiver calculus, hom
// spaces, annihilator extraction) reduces to exact row reduction here,
// with deterministic leftmost pivoting so results are reproducible.
struct Mat {
    long rows = 0, cols = 0;
    std::vector<Rat> a;

    Mat() = default;
    Mat(long r, long c) : rows(r), cols(c), a(static_cast<size_t>(r * c), Rat(0)) {}
    Mat(std::initializer_list<std::initializer_list<Rat>> m) {
        rows = static_cast<long>(m.size());
        cols = rows ? static_cast<long>(m.begin()->size()) : 0;
        for (const auto& row : m) {
            if ((long)row.size() != cols) fail(errc::bad_input, "ragged matrix literal");
            for (const auto& v : row) a.push_back(v);
        }
    }

    Rat& operator()(long i, long j) { return a[static_cast<size_t>(i * cols + j)]; }
    const Rat& operator()(long i, long j) const { return a[static_cast<size_t>(i * cols + j)]; }

    static Mat identity(long n) {
        Mat m(n, n);
        for (long i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

    bool is_zero() const {
        for (const auto& v : a)
            if (v != 0) return false;
        return true;
    }

    std::string str() const {
        std::ostringstream os;
        os << "[";
        for (long i = 0; i < rows; ++i) {
            os << (i ? "; " : "");
            for (long j = 0; j < cols; ++j) os << (j ? " " : "") << rat_str((*this)(i, j));
        }
        os << "]";
        return os.str();
    }
};

inline Mat operator+(const Mat& x, const Mat& y) {
    if (x.rows != y.rows || x.cols != y.cols) fail(errc::bad_input, "matrix shape mismatch");
    Mat r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
    return r;
}

inline Mat operator-(const Mat& x, const Mat& y) {
    if (x.rows != y.rows || x.cols != y.cols) fail(errc::bad_input, "matrix shape mismatch");
    Mat r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
    return r;
}

inline Mat operator*(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) fail(errc::bad_input, "matrix shape mismatch in product");
    Mat r(x.rows, y.cols);
    for (long i = 0; i < x.rows; ++i)
        for (long k = 0; k < x.cols; ++k) {
            const Rat& v = x(i, k);
            if (v == 0) continue;
            for (long j = 0; j < y.cols; ++j) r(i, j) += v * y(k, j);
        }
    return r;
}

inline Mat operator*(const Mat& x, const Rat& k) {
    Mat r = x;
    for (auto& v : r.a) v *= k;
    return r;
}

inline Mat transpose(const Mat& x) {
    Mat r(x.cols, x.rows);
    for (long i = 0; i < x.rows; ++i)
        for (long j = 0; j < x.cols; ++j) r(j, i) = x(i, j);
    return r;
}

// In-place reduced row echelon form; returns pivot column indices.
inline std::vector<long> rref(Mat& m) {
    std::vector<long> pivots;
    long row = 0;
    for (long col = 0; col < m.cols && row < m.rows; ++col) {
        long p = -1;
        for (long i = row; i < m.rows; ++i)
            if (m(i, col) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != row)
            for (long j = 0; j < m.cols; ++j) std::swap(m(p, j), m(row, j));
        Rat inv = Rat(1) / m(row, col);
        for (long j = col; j < m.cols; ++j) m(row, j) *= inv;
        for (long i = 0; i < m.rows; ++i) {
            if (i == row || m(i, col) == 0) continue;
            Rat f = m(i, col);
            for (long j = col; j < m.cols; ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline long rank(Mat m) { return static_cast<long>(rref(m).size()); }

// Kernel basis as columns, deterministic from the RREF free variables.
inline std::vector<std::vector<Rat>> kernel_basis(Mat m) {
    long n = m.cols;
    std::vector<long> piv = rref(m);
    std::vector<bool> is_pivot(n, false);
    for (long c : piv) is_pivot[c] = true;
    std::vector<std::vector<Rat>> basis;
    for (long free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rat> v(n, Rat(0));
        v[free] = 1;
        for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(static_cast<long>(r), free);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline bool invertible(const Mat& m) { return m.rows == m.cols && rank(m) == m.rows; }

inline Mat inverse(const Mat& m) {
    if (m.rows != m.cols) fail(errc::bad_input, "inverse of a non-square matrix");
    long n = m.rows;
    Mat aug(n, 2 * n);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    std::vector<long> piv = rref(aug);
    if ((long)piv.size() != n || piv[n - 1] != n - 1)
        fail(errc::bad_input, "matrix is singular");
    Mat r(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) r(i, j) = aug(i, n + j);
    return r;
}

// Solve A X = B exactly (any shape); fails when inconsistent. The solution
// with free variables set to zero is returned, deterministically.
inline Mat solve_exact(const Mat& A, const Mat& B) {
    if (A.rows != B.rows) fail(errc::bad_input, "solve_exact shape mismatch");
    Mat aug(A.rows, A.cols + B.cols);
    for (long i = 0; i < A.rows; ++i) {
        for (long j = 0; j < A.cols; ++j) aug(i, j) = A(i, j);
        for (long j = 0; j < B.cols; ++j) aug(i, A.cols + j) = B(i, j);
    }
    std::vector<long> piv = rref(aug);
    for (long r = 0; r < (long)piv.size(); ++r)
        if (piv[r] >= A.cols) fail(errc::bad_input, "inconsistent linear system");
    Mat X(A.cols, B.cols);
    for (long r = 0; r < (long)piv.size(); ++r)
        for (long j = 0; j < B.cols; ++j) X(piv[r], j) = aug(r, A.cols + j);
    return X;
}

// Column-space factorization A = B * C with B the pivot columns of A
// (leftmost pivots) and C the nonzero RREF rows.
struct ColFactor {
    Mat basis;   // n x r
    Mat coords;  // r x m
};

inline ColFactor column_space_factor(const Mat& A) {
    Mat R = A;
    std::vector<long> piv = rref(R);
    long r = static_cast<long>(piv.size());
    ColFactor f;
    f.basis = Mat(A.rows, r);
    f.coords = Mat(r, A.cols);
    for (long k = 0; k < r; ++k) {
        for (long i = 0; i < A.rows; ++i) f.basis(i, k) = A(i, piv[k]);
        for (long j = 0; j < A.cols; ++j) f.coords(k, j) = R(k, j);
    }
    return f;
}

inline Mat kron(const Mat& A, const Mat& B) {
    Mat r(A.rows * B.rows, A.cols * B.cols);
    for (long i = 0; i < A.rows; ++i)
        for (long j = 0; j < A.cols; ++j) {
            if (A(i, j) == 0) continue;
            for (long k = 0; k < B.rows; ++k)
                for (long l = 0; l < B.cols; ++l)
                    r(i * B.rows + k, j * B.cols + l) = A(i, j) * B(k, l);
        }
    return r;
}

// Jordan block sizes of a nilpotent matrix, from the rank sequence:
// #blocks of size >= s equals rank(N^{s-1}) - rank(N^s).
inline std::vector<long> nilpotent_block_sizes(const Mat& N) {
    if (N.rows != N.cols) fail(errc::bad_input, "nilpotent_block_sizes needs a square matrix");
    long n = N.rows;
    std::vector<long> ranks{n};  // rank(N^0)
    Mat P = Mat::identity(n);
    for (long s = 1; s <= n; ++s) {
        P = P * N;
        ranks.push_back(rank(P));
        if (ranks.back() == 0) break;
    }
    if (ranks.back() != 0) fail(errc::bad_input, "matrix is not nilpotent");
    std::vector<long> sizes;
    for (long s = 1; s < (long)ranks.size(); ++s) {
        long ge_s = ranks[s - 1] - ranks[s];
        long ge_s1 = s < (long)ranks.size() - 1 ? ranks[s] - ranks[s + 1] : 0;
        for (long k = 0; k < ge_s - ge_s1; ++k) sizes.push_back(s);
    }
    std::sort(sizes.rbegin(), sizes.rend());
    return sizes;
}

// ---------------------------------------------------------------------------
// Invariant factors of xI - A via Smith normal form over Q[x]; two square
// matrices are conjugate over Q iff these lists agree.
// ---------------------------------------------------------------------------

namespace detail {

using PolyMat = std::vector<std::vector<QPoly>>;

inline void snf_step(PolyMat& M, long off) {
    long n = static_cast<long>(M.size());
    auto nonzero_left = [&]() {
        for (long i = off; i < n; ++i)
            for (long j = off; j < n; ++j)
                if (!M[i][j].zero()) return true;
        return false;
    };
    while (nonzero_left()) {
        // Move a minimal-degree entry to the corner.
        long bi = -1, bj = -1;
        for (long i = off; i < n; ++i)
            for (long j = off; j < n; ++j)
                if (!M[i][j].zero() && (bi < 0 || M[i][j].deg() < M[bi][bj].deg())) {
                    bi = i;
                    bj = j;
                }
        std::swap(M[off], M[bi]);
        for (long i = off; i < n; ++i) std::swap(M[i][off], M[i][bj]);

        bool clean = true;
        for (long j = off + 1; j < n; ++j) {
            auto [q, r] = divmod(M[off][j], M[off][off]);
            if (!q.zero())
                for (long i = off; i < n; ++i) M[i][j] = M[i][j] - M[i][off] * q;
            if (!r.zero()) clean = false;
        }
        for (long i = off + 1; i < n; ++i) {
            auto [q, r] = divmod(M[i][off], M[off][off]);
            if (!q.zero())
                for (long j = off; j < n; ++j) M[i][j] = M[i][j] - M[off][j] * q;
            if (!r.zero()) clean = false;
        }
        if (!clean) continue;

        bool divides_all = true;
        for (long i = off + 1; i < n && divides_all; ++i)
            for (long j = off + 1; j < n && divides_all; ++j)
                if (!divmod(M[i][j], M[off][off]).second.zero()) {
                    // Fold the offending row into the pivot row and restart.
                    for (long k = off; k < n; ++k) M[off][k] = M[off][k] + M[i][k];
                    divides_all = false;
                }
        if (divides_all) return;
    }
}

}  // namespace detail

inline std::vector<QPoly> invariant_factors(const Mat& A) {
    if (A.rows != A.cols) fail(errc::bad_input, "invariant factors of a non-square matrix");
    long n = A.rows;
    detail::PolyMat M(n, std::vector<QPoly>(n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            M[i][j] = QPoly(-A(i, j));
            if (i == j) M[i][j] = M[i][j] + QPoly::x();
        }
    for (long off = 0; off < n; ++off) detail::snf_step(M, off);
    std::vector<QPoly> f;
    for (long i = 0; i < n; ++i) f.push_back(monic(M[i][i]));
    return f;
}

inline bool conjugate(const Mat& A, const Mat& B) {
    if (A.rows != B.rows || A.cols != B.cols || A.rows != A.cols) return false;
    return invariant_factors(A) == invariant_factors(B);
}

}  // namespace dmod
