#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "strata/cube.hpp"
#include "strata/embeddings.hpp"
#include "strata/ratmat.hpp"

namespace strata {

/* Synthetic double-coset scenario: finite sets X1 (prime-to-p level) and Xp
 * (level p) with the two degeneracy maps Xp -> X1.  sigma must be a single
 * even cycle so that the alternating split S, S' = sigma(S) exists; tau_of_i
 * fixes the bijection between cube axes and embeddings. */
struct CosetScenario {
    EmbeddingSet E;
    std::vector<int> tau_of_i;
    int n1 = 0;
    int np = 0;
    std::vector<int> deg1, deg2;  // size np, values in [0, n1)
    std::optional<std::uint64_t> seed;
    // Optional correspondences acting on functions, checked for equivariance.
    std::optional<std::vector<std::vector<long>>> hecke1;  // n1 x n1
    std::optional<std::vector<std::vector<long>>> heckep;  // np x np
};

struct ScenarioProfile {
    enum Kind { Uniform, Fibered } kind = Uniform;
    int fiber = 0;
    static ScenarioProfile uniform() { return {Uniform, 0}; }
    static ScenarioProfile fibered(int k) { return {Fibered, k}; }
};

// Deterministic maps from the seed; fibered(k) requires np == k * n1
// (InfeasibleProfile otherwise) and makes every deg1-fiber size exactly k.
CosetScenario generate_scenario(int d, std::uint64_t seed, int n1, int np,
                                ScenarioProfile profile);

// Alternating split along the unique cycle, starting at its smallest
// element; throws OddCycle unless sigma is a single even cycle.
std::pair<TauSubset, TauSubset> level_split(const EmbeddingSet& E);

void validate_scenario(const CosetScenario& sc);

std::string scenario_to_json(const CosetScenario& sc);
CosetScenario scenario_from_json(const std::string& text);

/* Component index sets of the special-fiber intersections in codimensions
 * d and d-1: a top simplex contributes one component per Xp point; a
 * (d-1)-simplex contributes Xp components when interior (a rational-curve
 * bundle over the deepest stratum) and X1 components when it lies in a cube
 * facet (it maps isomorphically onto a one-dimensional stratum). */
struct YComponent {
    int simplex;  // index into tops (r = d) or faces[d-1] (r = d-1)
    int geom;     // index into Xp or X1 per the classification
};

std::vector<YComponent> components_Y(const TriangulatedCube& T, const CosetScenario& sc, int r);

/* The commutative square computed by top_restriction_map:
 *
 *        strata functions  --top-->  functions on the deepest stratum
 *            |  left                          | right
 *        functions on Y^(d-1)  --bottom-->  functions on Y^(d)
 *
 * Column blocks of `top` and `left`: for each cube axis i, first the
 * x_i = 0 stratum block then the x_i = 1 block, each n1 wide.  Which
 * degeneracy map a block carries depends on whether tau_i lies in S or S'.
 */
struct WeightTopDiagram {
    QMat top, bottom, left, right;
    std::vector<YComponent> comps_d, comps_d1;
    TauSubset S, Sprime;
};

WeightTopDiagram top_restriction_map(const TriangulatedCube& T, const CosetScenario& sc);

struct QuasiIsoReport {
    bool commutes = false;
    int coker_top = -1, coker_bottom = -1;
    int ker_top = -1, ker_bottom = -1;
    bool induced_injective = false, induced_surjective = false;
    bool induced_bijective = false;
    bool passed() const { return commutes && coker_top == coker_bottom && induced_bijective; }
};

QuasiIsoReport check_combinatorial_quasiiso(const TriangulatedCube& T, const CosetScenario& sc);

// Cokernel dimension of the bottom map alone, under explicit orientations
// (for re-orientation invariance experiments).
int coker_bottom_dim(const TriangulatedCube& T, const CosetScenario& sc,
                     const std::vector<int>& top_orient, const std::vector<int>& face_orient);

// (quotient, subspace): np minus the rank of the two stacked degeneracy
// pullbacks, resp. of their duals; equal over an exact field.
std::pair<int, int> p_new_dims(const CosetScenario& sc);

// Shape of the first page: false when no summand H^{q-2i}(Y^(p+2i)) is
// admissible.
bool e1_support(int d, int p, int q);

// Equivariance of the optional correspondences with both degeneracy
// pullbacks; nullopt when the scenario carries none.
std::optional<bool> hecke_equivariant(const CosetScenario& sc);

}  // namespace strata
