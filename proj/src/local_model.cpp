#include "strata/local_model.hpp"

namespace strata {

namespace {

std::vector<FqLine> all_lines(const FqField& F) {
    // (1, t) for t in F_q, then (0, 1): q+1 lines, echelon-lexicographic.
    std::vector<FqLine> out;
    for (const auto& t : F.all_elements())
        out.push_back({F.one(), t});
    out.push_back({F.zero(), F.one()});
    return out;
}

}  // namespace

bool factor_beta_vanishes(const FqField& F, const FactorPoint& fp) {
    // alpha restricted to V is zero iff V = ker(alpha) = span(e2).
    return F.is_zero(fp.V.x);
}

bool factor_beta_prime_vanishes(const FqField& F, const FactorPoint& fp) {
    // alpha' restricted to V' is zero iff V' = ker(alpha') = span(e1').
    return F.is_zero(fp.Vprime.y);
}

std::vector<FactorPoint> enumerate_factor_points(const FqField& F) {
    std::vector<FactorPoint> out;
    const auto lines = all_lines(F);
    for (const auto& V : lines) {
        for (const auto& Vp : lines) {
            // alpha(V) ⊆ V': alpha(x,y) = (x, 0) in the primed plane.
            if (!F.is_zero(V.x) && !fq_line_contains(F, Vp, V.x, F.zero()))
                continue;
            // alpha'(V') ⊆ V: alpha'(x',y') = (0, y').
            if (!F.is_zero(Vp.y) && !fq_line_contains(F, V, F.zero(), Vp.y))
                continue;
            out.push_back({V, Vp});
        }
    }
    return out;
}

std::vector<ModelPoint> enumerate_points(const EmbeddingSet& E, long q, long max_points) {
    long p = 0;
    for (long c = 2; c <= q; ++c) {
        if (q % c == 0) {
            p = c;
            break;
        }
    }
    int m = 0;
    long t = q;
    while (t > 1) {
        if (t % p != 0)
            throw StrataError("enumerate_points: q is not a prime power");
        t /= p;
        ++m;
    }
    const FqField F(p, m);
    const auto factor = enumerate_factor_points(F);

    long total = 1;
    for (int i = 0; i < E.d(); ++i) {
        total *= static_cast<long>(factor.size());
        if (total > max_points)
            throw TooLarge("enumerate_points: product exceeds the enumeration bound");
    }
    std::vector<ModelPoint> out;
    out.reserve(static_cast<size_t>(total));
    std::vector<size_t> idx(static_cast<size_t>(E.d()), 0);
    for (long n = 0; n < total; ++n) {
        ModelPoint pt;
        pt.factors.reserve(static_cast<size_t>(E.d()));
        for (int i = 0; i < E.d(); ++i)
            pt.factors.push_back(factor[idx[static_cast<size_t>(i)]]);
        out.push_back(std::move(pt));
        for (int i = 0; i < E.d(); ++i) {
            if (++idx[static_cast<size_t>(i)] < factor.size())
                break;
            idx[static_cast<size_t>(i)] = 0;
        }
    }
    return out;
}

std::pair<TauSubset, TauSubset> classify_point(const FqField& F, const ModelPoint& pt) {
    TauSubset S, Sp;
    for (size_t i = 0; i < pt.factors.size(); ++i) {
        if (factor_beta_vanishes(F, pt.factors[i]))
            S = S.with(static_cast<int>(i));
        if (factor_beta_prime_vanishes(F, pt.factors[i]))
            Sp = Sp.with(static_cast<int>(i));
    }
    return {S, Sp};
}

LocalRingSignature local_ring_signature(const EmbeddingSet& E, TauSubset S, TauSubset Sprime) {
    if ((S | Sprime) != TauSubset::full(E.d()))
        throw NotCovering("local_ring_signature: S ∪ S' must cover all embeddings");
    LocalRingSignature sig;
    for (int tau : S.indices())
        sig.variables.push_back({'X', tau});
    for (int tau : Sprime.indices())
        sig.variables.push_back({'Y', tau});
    for (int tau : (S & Sprime).indices())
        sig.relation_taus.push_back(tau);
    return sig;
}

CubeFace cube_face_of(const EmbeddingSet& E, TauSubset S, TauSubset Sprime) {
    if ((S | Sprime) != TauSubset::full(E.d()))
        throw NotCovering("cube_face_of: S ∪ S' must cover all embeddings");
    CubeFace f;
    for (int tau = 0; tau < E.d(); ++tau) {
        const bool inS = S.contains(tau), inSp = Sprime.contains(tau);
        if (inS && !inSp)
            f.zero_set = f.zero_set.with(tau);
        else if (inSp && !inS)
            f.one_set = f.one_set.with(tau);
    }
    f.dim = (S & Sprime).size();
    return f;
}

bool cube_face_contains(const CubeFace& a, const CubeFace& b) {
    // Every pinned coordinate of a is pinned the same way in b.
    return (a.zero_set & b.zero_set) == a.zero_set && (a.one_set & b.one_set) == a.one_set;
}

}  // namespace strata
