#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "strata/embeddings.hpp"
#include "strata/galois_ring.hpp"
#include "strata/gf.hpp"

namespace strata {

/* Graded mod-p module with one rank-2 component per embedding.
 *
 * Conventions (fixed once and used everywhere):
 *   F_tau: comp(tau) -> comp(sigma tau),     F(x) = F[tau] * frob(x)
 *   V_tau: comp(tau) -> comp(sigma^-1 tau),  V(x) = V[tau] * frob_inv(x)
 * Only the p_tau components are stored; the q_tau side is recovered by
 * duality and never represented. */
struct GradedModule {
    EmbeddingSet E;
    std::shared_ptr<const FqField> field;
    std::vector<FqMat2> F;
    std::vector<FqMat2> V;
};

struct Violation {
    enum Kind {
        CompositeFV,   // F∘V != 0 at a component
        CompositeVF,   // V∘F != 0 at a component
        KerFNotImV,    // ker F != im V at a component
        KerVNotImF,    // ker V != im F at a component
        CharPolyRank,  // im V not one-dimensional (not a point of X)
    } kind;
    int tau;
    std::string detail;
};

std::vector<Violation> validate(const GradedModule& D);
bool is_valid(const GradedModule& D);

// True iff im V(comp(sigma tau)) == im F(comp(sigma^-1 tau)) inside
// comp(tau).  Throws InvalidModule.
bool hasse_vanishes(const GradedModule& D, int tau);

// { tau : hasse_vanishes(D, tau) }.
TauSubset stratum_membership(const GradedModule& D);

// Tensor of the supersingular elliptic-curve module with the grading: F and
// V of rank one with im F = im V on every component.  Requires every cycle
// length of sigma to divide the field degree (IncompatibleField).
GradedModule supersingular_example(const EmbeddingSet& E, const FqField& k);

// im F and im V complementary at every component (empty stratum).
GradedModule ordinary_example(const EmbeddingSet& E, const FqField& k);

// Module assembled from prescribed lines: L[tau] = im V = ker F and
// M[tau] = im F = ker V at each component.  Any choice yields a valid
// module; hasse_vanishes(tau) iff L[tau] == M[tau].
GradedModule module_from_lines(const EmbeddingSet& E, const FqField& k,
                               const std::vector<FqLine>& L, const std::vector<FqLine>& M);

// Seeded generator used by property tests and the selftest.
GradedModule random_valid_module(const EmbeddingSet& E, const FqField& k, std::uint64_t seed);

/* Witness submodule M for a sparse S contained in the stratum of D:
 * the full component off S, the Lie* line (im V) on S; quotient_ranks are
 * the Lie ranks of the quotient isogeny target, computed from a truncated
 * lattice lift. */
struct WitnessSubmodule {
    std::vector<std::optional<FqLine>> lines;  // nullopt = full component
    std::vector<int> quotient_ranks;
};

WitnessSubmodule witness_submodule(const GradedModule& D, TauSubset S);

/* Rank-2 free module per component over the length-N Witt truncation, with
 * F, V semilinear and F∘V = V∘F = p exactly. */
struct DieudonneLattice {
    EmbeddingSet E;
    std::shared_ptr<const GaloisRing> ring;
    std::vector<GrMat2> F;
    std::vector<GrMat2> V;
};

// Throws InvalidModule when F∘V != p or V∘F != p somewhere.
void assert_lattice(const DieudonneLattice& L);

GradedModule reduce(const DieudonneLattice& L);

DieudonneLattice supersingular_lattice(const EmbeddingSet& E, const FqField& k, int N);

// Entrywise lift with the determinant corrected so that F V = V F = p holds
// exactly; reduces back to D.
DieudonneLattice canonical_lift(const GradedModule& D, int N);

DieudonneLattice truncate_lattice(const DieudonneLattice& L, int N);

// New basis per component; g[tau] columns = new basis vectors in old
// coordinates, det a unit.
DieudonneLattice apply_basis_change(const DieudonneLattice& L, const std::vector<GrMat2>& g);

// Lie ranks per component: 2 - v_p(det V into the component), resolved via
// det F * sigma(det V) = p^2 when the ring precision cannot see v_p directly.
std::vector<int> lie_ranks(const DieudonneLattice& L);

/* Per-component shape of a sublattice: the whole component, the preimage of
 * a residue line, or p times the component (preimage of zero). */
struct SubSpec {
    enum Kind { Full, Line, Zero } kind = Full;
    FqLine line;  // used when kind == Line
    static SubSpec full() { return {Full, {}}; }
    static SubSpec zero() { return {Zero, {}}; }
    static SubSpec of_line(FqLine l) { return {Line, std::move(l)}; }
};

struct SublatticeResult {
    DieudonneLattice lattice;       // precision drops by the worst division
    std::vector<GrMat2> inclusion;  // T[tau]: new coordinates -> old, over the old ring
};

// Restricts F and V to the sublattice; throws NotInStratum when the
// prescribed lines are not F,V-stable (a division fails to be exact).
SublatticeResult preimage_sublattice(const DieudonneLattice& L, const std::vector<SubSpec>& spec);

/* Level structure datum: lattices for A' and B with the inclusion phi:
 * D(B) -> D(A') whose cokernel is one-dimensional per component, plus the
 * mod-p level submodule. */
struct Gamma0Datum {
    DieudonneLattice A_prime;
    DieudonneLattice B;
    std::vector<GrMat2> phi;          // over A_prime.ring
    std::vector<FqLine> level_lines;  // M_{A'} per component, in A' coordinates
};

// Requires S' = sigma(S), disjoint, covering, and the reduction of A in the
// deepest stratum.  Builds A -> A' (witness quotient on S), the level
// submodule, and B.
Gamma0Datum gamma0_forward(const DieudonneLattice& A, TauSubset S, TauSubset Sprime);

// Reconstructs A from the datum: the sublattice of A' that is phi(D(B)) on
// S and p*D(A') on S'; checks that the reduction lands back in the deepest
// stratum.  Throws InvalidDatum.
DieudonneLattice gamma0_inverse(const Gamma0Datum& datum, TauSubset S, TauSubset Sprime);

enum class IsoResult {
    Isomorphic,    // certificate found
    NoSolution,    // the intertwining equations have only degenerate solutions
    NoUnitFound,   // solution module nonzero but no invertible sample found
};

// Searches for graded unit intertwiners g with g F1 = F2 sigma(g) and
// g V1 = V2 sigma^-1(g), at the common precision of the two lattices.
IsoResult lattice_isomorphic(const DieudonneLattice& A, const DieudonneLattice& B,
                             std::uint64_t seed = 1, int tries = 4000);

// Pair of intertwiners additionally commuting with phi.
IsoResult datum_isomorphic(const Gamma0Datum& a, const Gamma0Datum& b, std::uint64_t seed = 1,
                           int tries = 4000);

// Canonical JSON forms (field modulus, row-major matrices, coefficient
// residues as integer lists).
std::string graded_module_to_json(const GradedModule& D);
GradedModule graded_module_from_json(const std::string& text);
std::string lattice_to_json(const DieudonneLattice& L);
DieudonneLattice lattice_from_json(const std::string& text);

}  // namespace strata
