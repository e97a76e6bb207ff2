#pragma once

#include <gmpxx.h>

#include <vector>

#include "strata/errors.hpp"

namespace strata {

/* Dense exact-rational matrices.  Everything downstream needs ranks,
 * nullspaces and membership tests computed exactly over Q; desk-scale sizes,
 * so plain Gaussian elimination on mpq entries is enough. */
class QMat {
public:
    QMat() = default;
    QMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    mpq_class& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const mpq_class& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    static QMat identity(int n);
    QMat transposed() const;
    bool operator==(const QMat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<mpq_class> a_;
};

QMat qmat_mul(const QMat& A, const QMat& B);
QMat qmat_hcat(const QMat& A, const QMat& B);
QMat qmat_vcat(const QMat& A, const QMat& B);

int qmat_rank(QMat A);

// Basis of the right nullspace, as columns of the returned matrix.
QMat qmat_nullspace(const QMat& A);

// Any solution x of A x = b; returns false when inconsistent.
bool qmat_solve(const QMat& A, const std::vector<mpq_class>& b, std::vector<mpq_class>& x);

// rank [A | b-columns] == rank A for every column of B, i.e. im(B) ⊆ im(A).
bool qmat_image_contains(const QMat& A, const QMat& B);

}  // namespace strata
