#include "strata/gf.hpp"

#include <algorithm>

namespace strata {

bool is_prime(long n) {
    if (n < 2)
        return false;
    for (long k = 2; k * k <= n; ++k)
        if (n % k == 0)
            return false;
    return true;
}

namespace {

using Poly = std::vector<long>;  // little-endian coefficients

Poly poly_trim(Poly a) {
    while (!a.empty() && a.back() == 0)
        a.pop_back();
    return a;
}

// a mod b over F_p, b monic.
Poly poly_mod(Poly a, const Poly& b, long p) {
    a = poly_trim(std::move(a));
    const size_t db = b.size() - 1;
    while (a.size() > db) {
        const long lead = a.back();
        const size_t shift = a.size() - 1 - db;
        for (size_t i = 0; i <= db; ++i) {
            long& v = a[shift + i];
            v = ((v - lead * b[i]) % p + p) % p;
        }
        a = poly_trim(std::move(a));
    }
    return a;
}

Poly poly_mul(const Poly& a, const Poly& b, long p) {
    if (a.empty() || b.empty())
        return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return poly_trim(std::move(c));
}

bool poly_is_irreducible(const Poly& f, long p) {
    const size_t m = f.size() - 1;
    if (m == 0)
        return false;
    if (m == 1)
        return true;
    // Trial division by every monic polynomial of degree 1..m/2.
    for (size_t deg = 1; deg <= m / 2; ++deg) {
        long count = 1;
        for (size_t i = 0; i < deg; ++i)
            count *= p;
        for (long v = 0; v < count; ++v) {
            Poly g(deg + 1, 0);
            long t = v;
            for (size_t i = 0; i < deg; ++i) {
                g[i] = t % p;
                t /= p;
            }
            g[deg] = 1;
            if (poly_mod(f, g, p).empty())
                return false;
        }
    }
    return true;
}

Poly smallest_irreducible(long p, int m) {
    long count = 1;
    for (int i = 0; i < m; ++i)
        count *= p;
    for (long v = 0; v < count; ++v) {
        Poly f(static_cast<size_t>(m) + 1, 0);
        long t = v;
        for (int i = 0; i < m; ++i) {
            f[static_cast<size_t>(i)] = t % p;
            t /= p;
        }
        f[static_cast<size_t>(m)] = 1;
        if (poly_is_irreducible(f, p))
            return f;
    }
    throw StrataError("no irreducible polynomial found");  // unreachable
}

}  // namespace

FqField::FqField(long p, int m) : FqField(p, smallest_irreducible(p, m)) {}

FqField::FqField(long p, std::vector<long> monic_modulus)
    : p_(p), m_(static_cast<int>(monic_modulus.size()) - 1), modulus_(std::move(monic_modulus)) {
    if (!is_prime(p_))
        throw StrataError("FqField: p must be prime");
    if (m_ < 1)
        throw StrataError("FqField: modulus must have degree >= 1");
    if (modulus_.back() != 1)
        throw StrataError("FqField: modulus must be monic");
    for (long& c : modulus_)
        c = ((c % p_) + p_) % p_;
    if (!poly_is_irreducible(modulus_, p_))
        throw StrataError("FqField: modulus is reducible");
    q_ = 1;
    for (int i = 0; i < m_; ++i)
        q_ *= p_;
}

FqField::Elem FqField::one() const {
    Elem e = zero();
    e[0] = 1 % p_;
    return e;
}

FqField::Elem FqField::from_int(long v) const {
    Elem e = zero();
    e[0] = ((v % p_) + p_) % p_;
    return e;
}

FqField::Elem FqField::gen() const {
    Elem e = zero();
    if (m_ == 1) {
        // class of x = -c0
        e[0] = ((-modulus_[0]) % p_ + p_) % p_;
    } else {
        e[1] = 1;
    }
    return e;
}

bool FqField::is_zero(const Elem& a) const {
    for (long v : a)
        if (v != 0)
            return false;
    return true;
}

FqField::Elem FqField::add(const Elem& a, const Elem& b) const {
    Elem c(static_cast<size_t>(m_));
    for (int i = 0; i < m_; ++i)
        c[static_cast<size_t>(i)] =
            (a[static_cast<size_t>(i)] + b[static_cast<size_t>(i)]) % p_;
    return c;
}

FqField::Elem FqField::sub(const Elem& a, const Elem& b) const {
    Elem c(static_cast<size_t>(m_));
    for (int i = 0; i < m_; ++i)
        c[static_cast<size_t>(i)] =
            ((a[static_cast<size_t>(i)] - b[static_cast<size_t>(i)]) % p_ + p_) % p_;
    return c;
}

FqField::Elem FqField::neg(const Elem& a) const { return sub(zero(), a); }

FqField::Elem FqField::mul(const Elem& a, const Elem& b) const {
    Poly c = poly_mul(a, b, p_);
    c = poly_mod(std::move(c), modulus_, p_);
    c.resize(static_cast<size_t>(m_), 0);
    return c;
}

FqField::Elem FqField::pow(Elem a, long e) const {
    Elem acc = one();
    while (e > 0) {
        if (e & 1)
            acc = mul(acc, a);
        a = mul(a, a);
        e >>= 1;
    }
    return acc;
}

FqField::Elem FqField::inv(const Elem& a) const {
    if (is_zero(a))
        throw StrataError("FqField: division by zero");
    return pow(a, q_ - 2);
}

FqField::Elem FqField::frob(const Elem& a) const { return pow(a, p_); }

FqField::Elem FqField::frob_inv(const Elem& a) const {
    Elem b = a;
    for (int i = 0; i < m_ - 1; ++i)
        b = frob(b);
    return b;
}

std::vector<FqField::Elem> FqField::all_elements() const {
    std::vector<Elem> out;
    out.reserve(static_cast<size_t>(q_));
    for (long v = 0; v < q_; ++v) {
        Elem e(static_cast<size_t>(m_));
        long t = v;
        for (int i = 0; i < m_; ++i) {
            e[static_cast<size_t>(i)] = t % p_;
            t /= p_;
        }
        out.push_back(std::move(e));
    }
    return out;
}

long FqField::index_of(const Elem& a) const {
    long v = 0, mult = 1;
    for (int i = 0; i < m_; ++i) {
        v += a[static_cast<size_t>(i)] * mult;
        mult *= p_;
    }
    return v;
}

std::string FqField::to_string(const Elem& a) const {
    std::string s = "[";
    for (int i = 0; i < m_; ++i) {
        if (i)
            s += ",";
        s += std::to_string(a[static_cast<size_t>(i)]);
    }
    return s + "]";
}

FqMat2 fq_mat_zero(const FqField& F) { return {F.zero(), F.zero(), F.zero(), F.zero()}; }

FqMat2 fq_mat_identity(const FqField& F) { return {F.one(), F.zero(), F.zero(), F.one()}; }

FqMat2 fq_mat_mul(const FqField& F, const FqMat2& A, const FqMat2& B) {
    return {F.add(F.mul(A.a, B.a), F.mul(A.b, B.c)), F.add(F.mul(A.a, B.b), F.mul(A.b, B.d)),
            F.add(F.mul(A.c, B.a), F.mul(A.d, B.c)), F.add(F.mul(A.c, B.b), F.mul(A.d, B.d))};
}

FqMat2 fq_mat_add(const FqField& F, const FqMat2& A, const FqMat2& B) {
    return {F.add(A.a, B.a), F.add(A.b, B.b), F.add(A.c, B.c), F.add(A.d, B.d)};
}

FqMat2 fq_mat_scale(const FqField& F, const FqField::Elem& s, const FqMat2& A) {
    return {F.mul(s, A.a), F.mul(s, A.b), F.mul(s, A.c), F.mul(s, A.d)};
}

FqMat2 fq_mat_adj(const FqField& F, const FqMat2& A) {
    return {A.d, F.neg(A.b), F.neg(A.c), A.a};
}

FqField::Elem fq_mat_det(const FqField& F, const FqMat2& A) {
    return F.sub(F.mul(A.a, A.d), F.mul(A.b, A.c));
}

FqMat2 fq_mat_frob(const FqField& F, const FqMat2& A) {
    return {F.frob(A.a), F.frob(A.b), F.frob(A.c), F.frob(A.d)};
}

FqMat2 fq_mat_frob_inv(const FqField& F, const FqMat2& A) {
    return {F.frob_inv(A.a), F.frob_inv(A.b), F.frob_inv(A.c), F.frob_inv(A.d)};
}

int fq_mat_rank(const FqField& F, const FqMat2& A) {
    if (!F.is_zero(fq_mat_det(F, A)))
        return 2;
    return fq_mat_is_zero(F, A) ? 0 : 1;
}

bool fq_mat_eq(const FqField& F, const FqMat2& A, const FqMat2& B) {
    (void)F;
    return A.a == B.a && A.b == B.b && A.c == B.c && A.d == B.d;
}

bool fq_mat_is_zero(const FqField& F, const FqMat2& A) {
    return F.is_zero(A.a) && F.is_zero(A.b) && F.is_zero(A.c) && F.is_zero(A.d);
}

FqLine fq_line_through(const FqField& F, const FqField::Elem& x, const FqField::Elem& y) {
    if (!F.is_zero(x)) {
        const auto ix = F.inv(x);
        return {F.one(), F.mul(ix, y)};
    }
    if (F.is_zero(y))
        throw StrataError("fq_line_through: zero vector spans no line");
    return {F.zero(), F.one()};
}

bool fq_line_contains(const FqField& F, const FqLine& L, const FqField::Elem& x,
                      const FqField::Elem& y) {
    // (x,y) is proportional to (L.x, L.y)
    return F.is_zero(F.sub(F.mul(x, L.y), F.mul(y, L.x)));
}

FqLine fq_mat_image_line(const FqField& F, const FqMat2& A) {
    if (fq_mat_rank(F, A) != 1)
        throw StrataError("fq_mat_image_line: matrix is not of rank one");
    if (!F.is_zero(A.a) || !F.is_zero(A.c))
        return fq_line_through(F, A.a, A.c);
    return fq_line_through(F, A.b, A.d);
}

FqLine fq_mat_kernel_line(const FqField& F, const FqMat2& A, int twist) {
    if (fq_mat_rank(F, A) != 1)
        throw StrataError("fq_mat_kernel_line: matrix is not of rank one");
    // Untwisted kernel of A: spanned by (-b, a) or (-d, c).
    FqField::Elem kx, ky;
    if (!F.is_zero(A.a) || !F.is_zero(A.b)) {
        kx = F.neg(A.b);
        ky = A.a;
    } else {
        kx = F.neg(A.d);
        ky = A.c;
    }
    // Kernel of v -> A * frob^twist(v) is frob^-twist of the plain kernel.
    if (twist == 1) {
        kx = F.frob_inv(kx);
        ky = F.frob_inv(ky);
    } else if (twist == -1) {
        kx = F.frob(kx);
        ky = F.frob(ky);
    }
    return fq_line_through(F, kx, ky);
}

}  // namespace strata
