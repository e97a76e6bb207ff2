#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "strata/errors.hpp"

namespace strata {

/* Arithmetic in F_q = F_p[x]/(modulus), q = p^m.  Elements are coefficient
 * vectors of length m with entries in [0,p); the modulus is stored so that
 * serialized data is reproducible bit for bit. */
class FqField {
public:
    using Elem = std::vector<long>;

    // Picks the lexicographically smallest monic irreducible of degree m
    // (coefficients read as base-p digits, constant term least significant).
    FqField(long p, int m);
    FqField(long p, std::vector<long> monic_modulus);

    long p() const { return p_; }
    int m() const { return m_; }
    long q() const { return q_; }
    const std::vector<long>& modulus() const { return modulus_; }

    Elem zero() const { return Elem(static_cast<size_t>(m_), 0); }
    Elem one() const;
    Elem from_int(long v) const;
    Elem gen() const;  // class of x (equals from_int(p mod ...) representation-wise)

    bool is_zero(const Elem& a) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem pow(Elem a, long e) const;
    Elem inv(const Elem& a) const;
    Elem frob(const Elem& a) const;      // x -> x^p
    Elem frob_inv(const Elem& a) const;  // frob applied m-1 times

    // All q elements, ordered by base-p digit value; index_of is the inverse.
    std::vector<Elem> all_elements() const;
    long index_of(const Elem& a) const;

    std::string to_string(const Elem& a) const;

    bool operator==(const FqField& o) const {
        return p_ == o.p_ && m_ == o.m_ && modulus_ == o.modulus_;
    }

private:
    long p_ = 0;
    int m_ = 0;
    long q_ = 0;
    std::vector<long> modulus_;  // length m+1, monic
};

bool is_prime(long n);

/* 2x2 matrices over F_q, row major: [a b; c d]. */
struct FqMat2 {
    FqField::Elem a, b, c, d;
};

FqMat2 fq_mat_zero(const FqField& F);
FqMat2 fq_mat_identity(const FqField& F);
FqMat2 fq_mat_mul(const FqField& F, const FqMat2& A, const FqMat2& B);
FqMat2 fq_mat_add(const FqField& F, const FqMat2& A, const FqMat2& B);
FqMat2 fq_mat_scale(const FqField& F, const FqField::Elem& s, const FqMat2& A);
FqMat2 fq_mat_adj(const FqField& F, const FqMat2& A);
FqField::Elem fq_mat_det(const FqField& F, const FqMat2& A);
FqMat2 fq_mat_frob(const FqField& F, const FqMat2& A);      // entrywise x -> x^p
FqMat2 fq_mat_frob_inv(const FqField& F, const FqMat2& A);  // entrywise inverse twist
int fq_mat_rank(const FqField& F, const FqMat2& A);
bool fq_mat_eq(const FqField& F, const FqMat2& A, const FqMat2& B);
bool fq_mat_is_zero(const FqField& F, const FqMat2& A);

/* A line in F_q^2, normalized to its reduced echelon generator: (1,t) or
 * (0,1).  Dimension-0 and full subspaces are handled separately. */
struct FqLine {
    FqField::Elem x, y;
    bool operator==(const FqLine& o) const { return x == o.x && y == o.y; }
};

FqLine fq_line_through(const FqField& F, const FqField::Elem& x, const FqField::Elem& y);
bool fq_line_contains(const FqField& F, const FqLine& L, const FqField::Elem& x,
                      const FqField::Elem& y);
// Column space of a rank-1 matrix.
FqLine fq_mat_image_line(const FqField& F, const FqMat2& A);
// Kernel of v -> A * frob^twist(v); twist in {-1,0,+1}.
FqLine fq_mat_kernel_line(const FqField& F, const FqMat2& A, int twist);

}  // namespace strata
