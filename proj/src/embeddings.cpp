#include "strata/embeddings.hpp"

#include <algorithm>
#include <bit>

namespace strata {

EmbeddingSet::EmbeddingSet(int d, std::vector<int> sigma) : d_(d), sigma_(std::move(sigma)) {
    if (d <= 0 || d > 62)
        throw StrataError("EmbeddingSet: d must be in [1,62]");
    if (static_cast<int>(sigma_.size()) != d)
        throw StrataError("EmbeddingSet: sigma has wrong length");
    std::vector<char> seen(static_cast<size_t>(d), 0);
    for (int v : sigma_) {
        if (v < 0 || v >= d || seen[static_cast<size_t>(v)])
            throw StrataError("EmbeddingSet: sigma is not a permutation");
        seen[static_cast<size_t>(v)] = 1;
    }
    sigma_inv_.assign(static_cast<size_t>(d), 0);
    for (int i = 0; i < d; ++i)
        sigma_inv_[static_cast<size_t>(sigma_[static_cast<size_t>(i)])] = i;
}

EmbeddingSet EmbeddingSet::from_residue_degrees(const std::vector<int>& degrees) {
    int d = 0;
    for (int f : degrees) {
        if (f <= 0)
            throw StrataError("from_residue_degrees: degrees must be positive");
        d += f;
    }
    std::vector<int> sigma(static_cast<size_t>(d));
    int base = 0;
    for (int f : degrees) {
        for (int i = 0; i < f; ++i)
            sigma[static_cast<size_t>(base + i)] = base + (i + 1) % f;
        base += f;
    }
    return EmbeddingSet(d, std::move(sigma));
}

EmbeddingSet EmbeddingSet::inert(int d) { return from_residue_degrees({d}); }

EmbeddingSet EmbeddingSet::split(int d) {
    return from_residue_degrees(std::vector<int>(static_cast<size_t>(d), 1));
}

std::vector<int> EmbeddingSet::cycle_lengths() const {
    std::vector<int> out;
    std::vector<char> seen(static_cast<size_t>(d_), 0);
    for (int i = 0; i < d_; ++i) {
        if (seen[static_cast<size_t>(i)])
            continue;
        int len = 0;
        for (int j = i; !seen[static_cast<size_t>(j)]; j = sigma_[static_cast<size_t>(j)]) {
            seen[static_cast<size_t>(j)] = 1;
            ++len;
        }
        out.push_back(len);
    }
    return out;
}

TauSubset TauSubset::of(std::initializer_list<int> taus) {
    std::uint64_t b = 0;
    for (int t : taus)
        b |= 1ULL << t;
    return TauSubset(b);
}

int TauSubset::size() const { return std::popcount(bits_); }

std::vector<int> TauSubset::indices() const {
    std::vector<int> out;
    for (int i = 0; i < 64; ++i)
        if ((bits_ >> i) & 1ULL)
            out.push_back(i);
    return out;
}

std::string TauSubset::to_string() const {
    std::string s = "{";
    bool first = true;
    for (int i : indices()) {
        if (!first)
            s += ",";
        s += std::to_string(i);
        first = false;
    }
    return s + "}";
}

ArchInvariants ArchInvariants::from_r(std::vector<int> r) {
    ArchInvariants inv;
    inv.s.reserve(r.size());
    for (int v : r) {
        if (v < 0 || v > 2)
            throw StrataError("ArchInvariants: r entries must lie in [0,2]");
        inv.s.push_back(2 - v);
    }
    inv.r = std::move(r);
    return inv;
}

bool is_sparse(const EmbeddingSet& E, TauSubset S) {
    for (int tau : S.indices())
        if (S.contains(E.sigma(tau)))
            return false;
    return true;
}

namespace {

// Lexicographic order on the sorted index sequences, empty set first.
bool lex_less(const TauSubset& a, const TauSubset& b) {
    auto ia = a.indices(), ib = b.indices();
    return std::lexicographical_compare(ia.begin(), ia.end(), ib.begin(), ib.end());
}

}  // namespace

std::vector<TauSubset> enumerate_sparse(const EmbeddingSet& E) {
    std::vector<TauSubset> out;
    const std::uint64_t n = 1ULL << E.d();
    for (std::uint64_t b = 0; b < n; ++b) {
        TauSubset S(b);
        if (is_sparse(E, S))
            out.push_back(S);
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

std::pair<TauSubset, TauSubset> sigma_theta(const EmbeddingSet& E, TauSubset S,
                                            TauSubset Sprime) {
    TauSubset Sig, The;
    for (int tau = 0; tau < E.d(); ++tau) {
        const bool pre_in_S = S.contains(E.sigma_inv(tau));
        if (Sprime.contains(tau) && pre_in_S)
            Sig = Sig.with(tau);
        if (!Sprime.contains(tau) && !pre_in_S)
            The = The.with(tau);
    }
    return {Sig, The};
}

ArchInvariants transfer_invariants(const EmbeddingSet& E, TauSubset S) {
    if (!is_sparse(E, S))
        throw NotSparse("transfer_invariants: " + S.to_string() + " is not sparse");
    std::vector<int> r(static_cast<size_t>(E.d()), 1);
    for (int tau : S.indices()) {
        r[static_cast<size_t>(tau)] = 2;
        r[static_cast<size_t>(E.sigma(tau))] = 0;
    }
    return ArchInvariants::from_r(std::move(r));
}

int expected_dimension(const ArchInvariants& inv) {
    int acc = 0;
    for (size_t i = 0; i < inv.r.size(); ++i)
        acc += inv.r[i] * inv.s[i];
    return acc;
}

bool parity_obstruction(const ArchInvariants& r, const ArchInvariants& rprime) {
    if (r.d() != rprime.d())
        throw LengthMismatch("parity_obstruction: invariant lengths differ");
    int a = 0, b = 0;
    for (int v : r.r)
        a += v;
    for (int v : rprime.r)
        b += v;
    return (a - b) % 2 == 0;
}

int stratum_codimension(const EmbeddingSet& E, TauSubset S, TauSubset Sprime) {
    if ((S | Sprime) != TauSubset::full(E.d()))
        throw NotCovering("stratum_codimension: S ∪ S' must be the full embedding set");
    return (S & Sprime).size();
}

}  // namespace strata
