#pragma once

#include <memory>
#include <string>
#include <vector>

#include "strata/gf.hpp"

namespace strata {

/* The Galois ring (Z/p^N)[x]/(modulus): the length-N truncation of the Witt
 * vectors of F_{p^m}.  The modulus is the entrywise lift of an irreducible
 * modulus over F_p, and the Frobenius automorphism is the unique ring
 * automorphism reducing to x -> x^p mod p (computed by Newton lifting the
 * root of the modulus). */
class GaloisRing {
public:
    using Elem = std::vector<long>;  // length m, coefficients in [0, p^N)

    GaloisRing(long p, int N, int m);  // uses FqField(p, m) default modulus
    GaloisRing(const FqField& k, int N);

    long p() const { return p_; }
    int N() const { return N_; }
    int m() const { return m_; }
    long pN() const { return pN_; }
    const std::vector<long>& modulus() const { return modulus_; }
    const FqField& residue_field() const { return *k_; }

    Elem zero() const { return Elem(static_cast<size_t>(m_), 0); }
    Elem one() const;
    Elem from_int(long v) const;

    bool is_zero(const Elem& a) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem scale(long c, const Elem& a) const;

    // u is a unit iff its reduction mod p is nonzero.
    bool is_unit(const Elem& a) const;
    Elem inv_unit(const Elem& a) const;

    Elem frob(const Elem& a) const;
    Elem frob_inv(const Elem& a) const;

    // Largest k <= N with p^k dividing every coefficient.
    int val(const Elem& a) const;
    // Exact division by p^k; requires val(a) >= k.  The result is well
    // defined only modulo p^(N-k); the high digits are set to zero... callers
    // lower the precision afterwards.
    Elem divp(const Elem& a, int k) const;

    FqField::Elem to_residue(const Elem& a) const;
    Elem lift(const FqField::Elem& a) const;

    // Reduction into a ring of smaller N over the same residue field.
    Elem truncate_into(const GaloisRing& lower, const Elem& a) const;

    std::string to_string(const Elem& a) const;

    bool operator==(const GaloisRing& o) const {
        return p_ == o.p_ && N_ == o.N_ && m_ == o.m_ && modulus_ == o.modulus_;
    }

private:
    void init();

    long p_ = 0;
    int N_ = 0;
    int m_ = 0;
    long pN_ = 0;
    std::vector<long> modulus_;  // length m+1, monic, lift of k_->modulus()
    std::shared_ptr<FqField> k_;
    // Frobenius and inverse as m x m matrices over Z/p^N acting on
    // coefficient vectors.
    std::vector<std::vector<long>> frob_mat_, frob_inv_mat_;
};

/* 2x2 matrices over a Galois ring, row major. */
struct GrMat2 {
    GaloisRing::Elem a, b, c, d;
};

GrMat2 gr_mat_zero(const GaloisRing& R);
GrMat2 gr_mat_identity(const GaloisRing& R);
GrMat2 gr_mat_scalar(const GaloisRing& R, const GaloisRing::Elem& s);
GrMat2 gr_mat_mul(const GaloisRing& R, const GrMat2& A, const GrMat2& B);
GrMat2 gr_mat_add(const GaloisRing& R, const GrMat2& A, const GrMat2& B);
GrMat2 gr_mat_sub(const GaloisRing& R, const GrMat2& A, const GrMat2& B);
GrMat2 gr_mat_scale(const GaloisRing& R, const GaloisRing::Elem& s, const GrMat2& A);
GrMat2 gr_mat_adj(const GaloisRing& R, const GrMat2& A);
GaloisRing::Elem gr_mat_det(const GaloisRing& R, const GrMat2& A);
GrMat2 gr_mat_frob(const GaloisRing& R, const GrMat2& A);
GrMat2 gr_mat_frob_inv(const GaloisRing& R, const GrMat2& A);
bool gr_mat_eq(const GaloisRing& R, const GrMat2& A, const GrMat2& B);
// Valuation of det: 0, 1, ..., capped at 2N when det == 0 in the ring.
int gr_mat_det_val(const GaloisRing& R, const GrMat2& A);
FqMat2 gr_mat_to_residue(const GaloisRing& R, const GrMat2& A);
GrMat2 gr_mat_lift(const GaloisRing& R, const FqMat2& A);
GrMat2 gr_mat_truncate(const GaloisRing& R, const GaloisRing& lower, const GrMat2& A);

}  // namespace strata
