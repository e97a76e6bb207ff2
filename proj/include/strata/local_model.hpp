#pragma once

#include <utility>
#include <vector>

#include "strata/embeddings.hpp"
#include "strata/gf.hpp"

namespace strata {

/* One factor of the special fiber of the level-p local model: a pair of
 * lines V in span(e1,e2) and V' in span(e1',e2') with alpha(V) ⊆ V' and
 * alpha'(V') ⊆ V, where mod p
 *     alpha  = [e1 -> e1', e2 -> 0],    alpha' = [e1' -> 0, e2' -> e2]. */
struct FactorPoint {
    FqLine V;       // line in the source plane
    FqLine Vprime;  // line in the target plane
    bool operator==(const FactorPoint& o) const { return V == o.V && Vprime == o.Vprime; }
};

struct ModelPoint {
    std::vector<FactorPoint> factors;  // one per embedding
};

// All F_q-points of a single factor, lexicographic in echelon coordinates.
// The count is 2q+1: two projective lines meeting at one point.
std::vector<FactorPoint> enumerate_factor_points(const FqField& F);

// Product over the d embeddings, factor-0 fastest varying.  Throws TooLarge
// when the product exceeds max_points.
std::vector<ModelPoint> enumerate_points(const EmbeddingSet& E, long q,
                                         long max_points = 2000000);

// tau in S iff the induced map beta vanishes (V = span(e2)); tau in S' iff
// beta' vanishes (V' = span(e1')).  The two sections compose to p, so
// S ∪ S' is always the full set.
std::pair<TauSubset, TauSubset> classify_point(const FqField& F, const ModelPoint& pt);
bool factor_beta_vanishes(const FqField& F, const FactorPoint& fp);
bool factor_beta_prime_vanishes(const FqField& F, const FactorPoint& fp);

/* The completed local ring at a point of the (S,S')-stratum: formal
 * variables X_tau for tau in S, Y_tau for tau in S', one relation
 * X_tau * Y_tau - p per tau in the intersection. */
struct LocalRingSignature {
    struct Variable {
        char kind;  // 'X' or 'Y'
        int tau;
    };
    std::vector<Variable> variables;
    std::vector<int> relation_taus;  // X_tau Y_tau - p for these tau
};

LocalRingSignature local_ring_signature(const EmbeddingSet& E, TauSubset S, TauSubset Sprime);

/* Face of the cube [0,1]^S attached to a stratum label: coordinates pinned
 * to 0 on S \ S', to 1 on S' \ S, free on S ∩ S'. */
struct CubeFace {
    TauSubset zero_set;
    TauSubset one_set;
    int dim;
    bool operator==(const CubeFace& o) const {
        return zero_set == o.zero_set && one_set == o.one_set;
    }
};

CubeFace cube_face_of(const EmbeddingSet& E, TauSubset S, TauSubset Sprime);

// face a ⊇ face b (all constraints of a hold on b).
bool cube_face_contains(const CubeFace& a, const CubeFace& b);

}  // namespace strata
