#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "strata/errors.hpp"

namespace strata {

/* The finite index set of real embeddings together with the Frobenius
 * permutation sigma.  Cycle lengths of sigma are the residue degrees of the
 * primes above p; embeddings themselves are opaque indices 0..d-1. */
class EmbeddingSet {
public:
    EmbeddingSet(int d, std::vector<int> sigma);

    // One cycle per entry, consecutive index blocks, i -> i+1 inside a block.
    static EmbeddingSet from_residue_degrees(const std::vector<int>& degrees);
    // Single d-cycle (p inert).
    static EmbeddingSet inert(int d);
    // Identity permutation (p totally split).
    static EmbeddingSet split(int d);

    int d() const { return d_; }
    int sigma(int tau) const { return sigma_[static_cast<size_t>(tau)]; }
    int sigma_inv(int tau) const { return sigma_inv_[static_cast<size_t>(tau)]; }
    const std::vector<int>& sigma() const { return sigma_; }

    // Cycle lengths in order of smallest cycle representative.
    std::vector<int> cycle_lengths() const;

    bool operator==(const EmbeddingSet& o) const {
        return d_ == o.d_ && sigma_ == o.sigma_;
    }

private:
    int d_ = 0;
    std::vector<int> sigma_;
    std::vector<int> sigma_inv_;
};

/* Subset of {0,..,d-1} with bitset semantics. */
class TauSubset {
public:
    TauSubset() = default;
    explicit TauSubset(std::uint64_t bits) : bits_(bits) {}
    static TauSubset of(std::initializer_list<int> taus);
    static TauSubset full(int d) {
        return TauSubset(d >= 64 ? ~0ULL : ((1ULL << d) - 1ULL));
    }

    bool contains(int tau) const { return (bits_ >> tau) & 1ULL; }
    TauSubset with(int tau) const { return TauSubset(bits_ | (1ULL << tau)); }
    TauSubset without(int tau) const { return TauSubset(bits_ & ~(1ULL << tau)); }
    int size() const;
    bool empty() const { return bits_ == 0; }
    std::uint64_t bits() const { return bits_; }
    std::vector<int> indices() const;
    std::string to_string() const;  // e.g. "{0,2}"

    friend TauSubset operator&(TauSubset a, TauSubset b) { return TauSubset(a.bits_ & b.bits_); }
    friend TauSubset operator|(TauSubset a, TauSubset b) { return TauSubset(a.bits_ | b.bits_); }
    bool operator==(const TauSubset& o) const { return bits_ == o.bits_; }
    bool operator!=(const TauSubset& o) const { return bits_ != o.bits_; }

private:
    std::uint64_t bits_ = 0;
};

/* Archimedean signature data: r[tau] ones and s[tau] = 2 - r[tau] minus-ones
 * per embedding. */
struct ArchInvariants {
    std::vector<int> r;
    std::vector<int> s;

    static ArchInvariants from_r(std::vector<int> r);
    int d() const { return static_cast<int>(r.size()); }
    bool operator==(const ArchInvariants& o) const { return r == o.r && s == o.s; }
};

bool is_sparse(const EmbeddingSet& E, TauSubset S);

// All S with sigma(S) disjoint from S, ordered lexicographically as sorted
// index sequences; the empty set satisfies the condition vacuously and is
// always first.
std::vector<TauSubset> enumerate_sparse(const EmbeddingSet& E);

// Sigma = { tau in S' : sigma^-1(tau) in S },  Theta = { tau not in S' :
// sigma^-1(tau) not in S }.
std::pair<TauSubset, TauSubset> sigma_theta(const EmbeddingSet& E, TauSubset S,
                                            TauSubset Sprime);

// r' = 2 on S, 0 on sigma(S), 1 elsewhere; s' = 2 - r'.  Throws NotSparse.
ArchInvariants transfer_invariants(const EmbeddingSet& E, TauSubset S);

// Sum of r[tau] * s[tau].
int expected_dimension(const ArchInvariants& inv);

// True (no obstruction) iff sum r == sum r' mod 2.  Throws LengthMismatch.
bool parity_obstruction(const ArchInvariants& r, const ArchInvariants& rprime);

// |S ∩ S'| for a covering pair; throws NotCovering when S ∪ S' is proper.
int stratum_codimension(const EmbeddingSet& E, TauSubset S, TauSubset Sprime);

}  // namespace strata
