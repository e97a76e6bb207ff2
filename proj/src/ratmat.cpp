#include "strata/ratmat.hpp"

#include <algorithm>

namespace strata {

QMat QMat::identity(int n) {
    QMat I(n, n);
    for (int i = 0; i < n; ++i)
        I.at(i, i) = 1;
    return I;
}

QMat QMat::transposed() const {
    QMat T(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            T.at(j, i) = at(i, j);
    return T;
}

QMat qmat_mul(const QMat& A, const QMat& B) {
    if (A.cols() != B.rows())
        throw StrataError("qmat_mul: dimension mismatch");
    QMat C(A.rows(), B.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int k = 0; k < A.cols(); ++k) {
            const mpq_class& v = A.at(i, k);
            if (v == 0)
                continue;
            for (int j = 0; j < B.cols(); ++j) {
                const mpq_class& w = B.at(k, j);
                if (w != 0)
                    C.at(i, j) += v * w;
            }
        }
    return C;
}

QMat qmat_hcat(const QMat& A, const QMat& B) {
    if (A.rows() != B.rows())
        throw StrataError("qmat_hcat: row mismatch");
    QMat C(A.rows(), A.cols() + B.cols());
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j)
            C.at(i, j) = A.at(i, j);
        for (int j = 0; j < B.cols(); ++j)
            C.at(i, A.cols() + j) = B.at(i, j);
    }
    return C;
}

QMat qmat_vcat(const QMat& A, const QMat& B) {
    if (A.cols() != B.cols())
        throw StrataError("qmat_vcat: column mismatch");
    QMat C(A.rows() + B.rows(), A.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            C.at(i, j) = A.at(i, j);
    for (int i = 0; i < B.rows(); ++i)
        for (int j = 0; j < B.cols(); ++j)
            C.at(A.rows() + i, j) = B.at(i, j);
    return C;
}

namespace {

// In-place row echelon; returns pivot columns.  Prefers ±1 pivots to keep
// entries small on incidence-style inputs.
std::vector<int> echelonize(QMat& A) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < A.cols() && row < A.rows(); ++col) {
        int piv = -1;
        for (int i = row; i < A.rows(); ++i) {
            if (A.at(i, col) == 0)
                continue;
            if (piv < 0)
                piv = i;
            if (A.at(i, col) == 1 || A.at(i, col) == -1) {
                piv = i;
                break;
            }
        }
        if (piv < 0)
            continue;
        if (piv != row)
            for (int j = col; j < A.cols(); ++j)
                std::swap(A.at(piv, j), A.at(row, j));
        const mpq_class inv = 1 / A.at(row, col);
        for (int j = col; j < A.cols(); ++j)
            A.at(row, j) *= inv;
        for (int i = 0; i < A.rows(); ++i) {
            if (i == row || A.at(i, col) == 0)
                continue;
            const mpq_class f = A.at(i, col);
            for (int j = col; j < A.cols(); ++j)
                A.at(i, j) -= f * A.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

int qmat_rank(QMat A) { return static_cast<int>(echelonize(A).size()); }

QMat qmat_nullspace(const QMat& A) {
    QMat E = A;
    const std::vector<int> pivots = echelonize(E);
    std::vector<char> is_pivot(static_cast<size_t>(A.cols()), 0);
    for (int c : pivots)
        is_pivot[static_cast<size_t>(c)] = 1;
    std::vector<int> free_cols;
    for (int c = 0; c < A.cols(); ++c)
        if (!is_pivot[static_cast<size_t>(c)])
            free_cols.push_back(c);
    QMat N(A.cols(), static_cast<int>(free_cols.size()));
    for (size_t k = 0; k < free_cols.size(); ++k) {
        const int fc = free_cols[k];
        N.at(fc, static_cast<int>(k)) = 1;
        for (size_t r = 0; r < pivots.size(); ++r)
            N.at(pivots[r], static_cast<int>(k)) = -E.at(static_cast<int>(r), fc);
    }
    return N;
}

bool qmat_solve(const QMat& A, const std::vector<mpq_class>& b, std::vector<mpq_class>& x) {
    if (static_cast<int>(b.size()) != A.rows())
        throw StrataError("qmat_solve: rhs length mismatch");
    QMat E(A.rows(), A.cols() + 1);
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j)
            E.at(i, j) = A.at(i, j);
        E.at(i, A.cols()) = b[static_cast<size_t>(i)];
    }
    const std::vector<int> pivots = echelonize(E);
    if (!pivots.empty() && pivots.back() == A.cols())
        return false;  // pivot in the rhs column: inconsistent
    x.assign(static_cast<size_t>(A.cols()), mpq_class(0));
    for (size_t r = 0; r < pivots.size(); ++r)
        x[static_cast<size_t>(pivots[r])] = E.at(static_cast<int>(r), A.cols());
    return true;
}

bool qmat_image_contains(const QMat& A, const QMat& B) {
    if (A.rows() != B.rows())
        throw StrataError("qmat_image_contains: row mismatch");
    const int rA = qmat_rank(A);
    return qmat_rank(qmat_hcat(A, B)) == rA;
}

}  // namespace strata
