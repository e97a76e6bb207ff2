#include "strata/galois_ring.hpp"

#include <algorithm>

namespace strata {

namespace {

long ipow(long b, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i)
        r *= b;
    return r;
}

}  // namespace

GaloisRing::GaloisRing(long p, int N, int m) : GaloisRing(FqField(p, m), N) {}

GaloisRing::GaloisRing(const FqField& k, int N)
    : p_(k.p()), N_(N), m_(k.m()), k_(std::make_shared<FqField>(k)) {
    if (N_ < 1 || N_ > 10)
        throw StrataError("GaloisRing: N must be in [1,10]");
    pN_ = ipow(p_, N_);
    modulus_.assign(k.modulus().begin(), k.modulus().end());
    init();
}

void GaloisRing::init() {
    // Newton-lift the residue root x of the modulus to a root r mod p^N with
    // r = x^p mod p; the Frobenius then sends the class of x to r.
    Elem r = zero();
    if (m_ == 1) {
        frob_mat_ = {{1}};
        frob_inv_mat_ = {{1}};
        return;
    }
    r[1] = 1;  // start from the class of x itself
    r = [&] {
        Elem acc = one();
        for (long e = 0; e < p_; ++e)
            acc = mul(acc, r);
        return acc;
    }();  // x^p

    auto eval_poly = [&](const std::vector<long>& poly, const Elem& at) {
        Elem acc = zero(), power = one();
        for (long coeff : poly) {
            acc = add(acc, scale(coeff, power));
            power = mul(power, at);
        }
        return acc;
    };
    std::vector<long> deriv(modulus_.size() - 1);
    for (size_t i = 1; i < modulus_.size(); ++i)
        deriv[i - 1] = (static_cast<long>(i) * modulus_[i]) % pN_;

    for (int it = 0; it < N_ + 2; ++it) {
        const Elem fr = eval_poly(modulus_, r);
        if (is_zero(fr))
            break;
        const Elem dfr = eval_poly(deriv, r);
        if (!is_unit(dfr))
            throw StrataError("GaloisRing: modulus is not separable");
        r = sub(r, mul(fr, inv_unit(dfr)));
    }
    if (!is_zero(eval_poly(modulus_, r)))
        throw StrataError("GaloisRing: Frobenius root lift failed");

    frob_mat_.assign(static_cast<size_t>(m_), Elem(static_cast<size_t>(m_), 0));
    Elem power = one();
    for (int j = 0; j < m_; ++j) {
        for (int i = 0; i < m_; ++i)
            frob_mat_[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                power[static_cast<size_t>(i)];
        power = mul(power, r);
    }
    // The Frobenius has order m; invert by iterating m-1 times.
    auto mat_mul = [&](const std::vector<std::vector<long>>& A,
                       const std::vector<std::vector<long>>& B) {
        std::vector<std::vector<long>> C(static_cast<size_t>(m_),
                                         Elem(static_cast<size_t>(m_), 0));
        for (int i = 0; i < m_; ++i)
            for (int k = 0; k < m_; ++k)
                for (int j = 0; j < m_; ++j)
                    C[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                        (C[static_cast<size_t>(i)][static_cast<size_t>(j)] +
                         A[static_cast<size_t>(i)][static_cast<size_t>(k)] *
                             B[static_cast<size_t>(k)][static_cast<size_t>(j)]) %
                        pN_;
        return C;
    };
    frob_inv_mat_ = frob_mat_;
    for (int i = 0; i < m_ - 2; ++i)
        frob_inv_mat_ = mat_mul(frob_inv_mat_, frob_mat_);
    if (m_ == 1)
        frob_inv_mat_ = frob_mat_;
}

GaloisRing::Elem GaloisRing::one() const {
    Elem e = zero();
    e[0] = 1 % pN_;
    return e;
}

GaloisRing::Elem GaloisRing::from_int(long v) const {
    Elem e = zero();
    e[0] = ((v % pN_) + pN_) % pN_;
    return e;
}

bool GaloisRing::is_zero(const Elem& a) const {
    for (long v : a)
        if (v != 0)
            return false;
    return true;
}

GaloisRing::Elem GaloisRing::add(const Elem& a, const Elem& b) const {
    Elem c(static_cast<size_t>(m_));
    for (int i = 0; i < m_; ++i)
        c[static_cast<size_t>(i)] =
            (a[static_cast<size_t>(i)] + b[static_cast<size_t>(i)]) % pN_;
    return c;
}

GaloisRing::Elem GaloisRing::sub(const Elem& a, const Elem& b) const {
    Elem c(static_cast<size_t>(m_));
    for (int i = 0; i < m_; ++i)
        c[static_cast<size_t>(i)] =
            ((a[static_cast<size_t>(i)] - b[static_cast<size_t>(i)]) % pN_ + pN_) % pN_;
    return c;
}

GaloisRing::Elem GaloisRing::neg(const Elem& a) const { return sub(zero(), a); }

GaloisRing::Elem GaloisRing::mul(const Elem& a, const Elem& b) const {
    std::vector<long> c(2 * static_cast<size_t>(m_) - 1, 0);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j)
            c[static_cast<size_t>(i + j)] =
                (c[static_cast<size_t>(i + j)] +
                 a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)]) %
                pN_;
    // reduce modulo the monic modulus
    for (int k = static_cast<int>(c.size()) - 1; k >= m_; --k) {
        const long lead = c[static_cast<size_t>(k)];
        if (lead == 0)
            continue;
        for (int i = 0; i <= m_; ++i) {
            long& v = c[static_cast<size_t>(k - m_ + i)];
            v = ((v - lead * modulus_[static_cast<size_t>(i)]) % pN_ + pN_) % pN_;
        }
    }
    c.resize(static_cast<size_t>(m_));
    return c;
}

GaloisRing::Elem GaloisRing::scale(long s, const Elem& a) const {
    s = ((s % pN_) + pN_) % pN_;
    Elem c(static_cast<size_t>(m_));
    for (int i = 0; i < m_; ++i)
        c[static_cast<size_t>(i)] = (a[static_cast<size_t>(i)] * s) % pN_;
    return c;
}

bool GaloisRing::is_unit(const Elem& a) const {
    for (long v : a)
        if (v % p_ != 0)
            return true;
    return false;
}

GaloisRing::Elem GaloisRing::inv_unit(const Elem& a) const {
    if (!is_unit(a))
        throw StrataError("GaloisRing: not a unit");
    // Newton from the residue-field inverse: v <- v(2 - av) doubles precision.
    Elem v = lift(k_->inv(to_residue(a)));
    for (int it = 0; it < N_ + 1; ++it) {
        const Elem av = mul(a, v);
        v = mul(v, sub(from_int(2), av));
        if (is_zero(sub(av, one())))
            break;
    }
    if (!is_zero(sub(mul(a, v), one())))
        throw StrataError("GaloisRing: inversion failed");
    return v;
}

GaloisRing::Elem GaloisRing::frob(const Elem& a) const {
    Elem c(static_cast<size_t>(m_), 0);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j)
            c[static_cast<size_t>(i)] =
                (c[static_cast<size_t>(i)] +
                 frob_mat_[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                     a[static_cast<size_t>(j)]) %
                pN_;
    return c;
}

GaloisRing::Elem GaloisRing::frob_inv(const Elem& a) const {
    Elem c(static_cast<size_t>(m_), 0);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j)
            c[static_cast<size_t>(i)] =
                (c[static_cast<size_t>(i)] +
                 frob_inv_mat_[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                     a[static_cast<size_t>(j)]) %
                pN_;
    return c;
}

int GaloisRing::val(const Elem& a) const {
    int k = 0;
    long pk = 1;
    while (k < N_) {
        const long pk1 = pk * p_;
        for (long v : a)
            if (v % pk1 != 0)
                return k;
        pk = pk1;
        ++k;
    }
    return N_;
}

GaloisRing::Elem GaloisRing::divp(const Elem& a, int k) const {
    if (val(a) < k)
        throw StrataError("GaloisRing: inexact division by p^k");
    const long pk = ipow(p_, k);
    Elem c(static_cast<size_t>(m_));
    for (int i = 0; i < m_; ++i)
        c[static_cast<size_t>(i)] = a[static_cast<size_t>(i)] / pk;
    return c;
}

FqField::Elem GaloisRing::to_residue(const Elem& a) const {
    FqField::Elem c(static_cast<size_t>(m_));
    for (int i = 0; i < m_; ++i)
        c[static_cast<size_t>(i)] = a[static_cast<size_t>(i)] % p_;
    return c;
}

GaloisRing::Elem GaloisRing::lift(const FqField::Elem& a) const {
    Elem c(static_cast<size_t>(m_));
    for (int i = 0; i < m_; ++i)
        c[static_cast<size_t>(i)] = a[static_cast<size_t>(i)];
    return c;
}

GaloisRing::Elem GaloisRing::truncate_into(const GaloisRing& lower, const Elem& a) const {
    if (lower.p_ != p_ || lower.m_ != m_ || lower.N_ > N_)
        throw StrataError("GaloisRing: incompatible truncation target");
    Elem c(static_cast<size_t>(m_));
    for (int i = 0; i < m_; ++i)
        c[static_cast<size_t>(i)] = a[static_cast<size_t>(i)] % lower.pN_;
    return c;
}

std::string GaloisRing::to_string(const Elem& a) const {
    std::string s = "[";
    for (int i = 0; i < m_; ++i) {
        if (i)
            s += ",";
        s += std::to_string(a[static_cast<size_t>(i)]);
    }
    return s + "]";
}

GrMat2 gr_mat_zero(const GaloisRing& R) { return {R.zero(), R.zero(), R.zero(), R.zero()}; }

GrMat2 gr_mat_identity(const GaloisRing& R) { return {R.one(), R.zero(), R.zero(), R.one()}; }

GrMat2 gr_mat_scalar(const GaloisRing& R, const GaloisRing::Elem& s) {
    return {s, R.zero(), R.zero(), s};
}

GrMat2 gr_mat_mul(const GaloisRing& R, const GrMat2& A, const GrMat2& B) {
    return {R.add(R.mul(A.a, B.a), R.mul(A.b, B.c)), R.add(R.mul(A.a, B.b), R.mul(A.b, B.d)),
            R.add(R.mul(A.c, B.a), R.mul(A.d, B.c)), R.add(R.mul(A.c, B.b), R.mul(A.d, B.d))};
}

GrMat2 gr_mat_add(const GaloisRing& R, const GrMat2& A, const GrMat2& B) {
    return {R.add(A.a, B.a), R.add(A.b, B.b), R.add(A.c, B.c), R.add(A.d, B.d)};
}

GrMat2 gr_mat_sub(const GaloisRing& R, const GrMat2& A, const GrMat2& B) {
    return {R.sub(A.a, B.a), R.sub(A.b, B.b), R.sub(A.c, B.c), R.sub(A.d, B.d)};
}

GrMat2 gr_mat_scale(const GaloisRing& R, const GaloisRing::Elem& s, const GrMat2& A) {
    return {R.mul(s, A.a), R.mul(s, A.b), R.mul(s, A.c), R.mul(s, A.d)};
}

GrMat2 gr_mat_adj(const GaloisRing& R, const GrMat2& A) {
    return {A.d, R.neg(A.b), R.neg(A.c), A.a};
}

GaloisRing::Elem gr_mat_det(const GaloisRing& R, const GrMat2& A) {
    return R.sub(R.mul(A.a, A.d), R.mul(A.b, A.c));
}

GrMat2 gr_mat_frob(const GaloisRing& R, const GrMat2& A) {
    return {R.frob(A.a), R.frob(A.b), R.frob(A.c), R.frob(A.d)};
}

GrMat2 gr_mat_frob_inv(const GaloisRing& R, const GrMat2& A) {
    return {R.frob_inv(A.a), R.frob_inv(A.b), R.frob_inv(A.c), R.frob_inv(A.d)};
}

bool gr_mat_eq(const GaloisRing& R, const GrMat2& A, const GrMat2& B) {
    (void)R;
    return A.a == B.a && A.b == B.b && A.c == B.c && A.d == B.d;
}

int gr_mat_det_val(const GaloisRing& R, const GrMat2& A) {
    const auto det = gr_mat_det(R, A);
    if (R.is_zero(det))
        return 2 * R.N();
    return R.val(det);
}

FqMat2 gr_mat_to_residue(const GaloisRing& R, const GrMat2& A) {
    return {R.to_residue(A.a), R.to_residue(A.b), R.to_residue(A.c), R.to_residue(A.d)};
}

GrMat2 gr_mat_lift(const GaloisRing& R, const FqMat2& A) {
    return {R.lift(A.a), R.lift(A.b), R.lift(A.c), R.lift(A.d)};
}

GrMat2 gr_mat_truncate(const GaloisRing& R, const GaloisRing& lower, const GrMat2& A) {
    return {R.truncate_into(lower, A.a), R.truncate_into(lower, A.b),
            R.truncate_into(lower, A.c), R.truncate_into(lower, A.d)};
}

}  // namespace strata
