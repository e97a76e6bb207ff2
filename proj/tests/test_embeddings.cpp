#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "strata/embeddings.hpp"

using namespace strata;

namespace {

// Independent brute-force oracle: filter the full power set.
std::vector<TauSubset> sparse_oracle(const EmbeddingSet& E) {
    std::vector<TauSubset> out;
    for (std::uint64_t b = 0; b < (1ULL << E.d()); ++b) {
        bool ok = true;
        for (int t = 0; t < E.d() && ok; ++t)
            if (((b >> t) & 1) && ((b >> E.sigma(t)) & 1))
                ok = false;
        if (ok)
            out.push_back(TauSubset(b));
    }
    return out;
}

// All cycle types of a given total size, as sorted partitions.
void partitions_into(int n, int max_part, std::vector<int>& cur,
                     std::vector<std::vector<int>>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (int k = std::min(n, max_part); k >= 1; --k) {
        cur.push_back(k);
        partitions_into(n - k, k, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> cycle_types(int d) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    partitions_into(d, d, cur, out);
    return out;
}

}  // namespace

TEST_CASE("sparse enumeration, quadratic inert") {
    const auto E = EmbeddingSet::inert(2);
    const auto sparse = enumerate_sparse(E);
    REQUIRE(sparse.size() == 3);
    CHECK(sparse[0] == TauSubset());
    CHECK(sparse[1] == TauSubset::of({0}));
    CHECK(sparse[2] == TauSubset::of({1}));
}

TEST_CASE("sparse enumeration, split case has only the empty set") {
    const auto E = EmbeddingSet::split(2);
    const auto sparse = enumerate_sparse(E);
    REQUIRE(sparse.size() == 1);
    CHECK(sparse[0].empty());
}

TEST_CASE("sparse enumeration, 4-cycle") {
    const auto E = EmbeddingSet::inert(4);
    const auto sparse = enumerate_sparse(E);
    REQUIRE(sparse.size() == 7);
    int max_order = 0;
    for (const auto& S : sparse)
        max_order = std::max(max_order, S.size());
    CHECK(max_order == 2);  // up to d/2
    const auto has = [&](TauSubset S) {
        return std::find(sparse.begin(), sparse.end(), S) != sparse.end();
    };
    CHECK(has(TauSubset::of({0, 2})));
    CHECK(has(TauSubset::of({1, 3})));
    CHECK_FALSE(has(TauSubset::of({0, 1})));
}

TEST_CASE("sparse enumeration matches the power-set oracle for d <= 7") {
    for (int d = 1; d <= 7; ++d) {
        for (const auto& type : cycle_types(d)) {
            const auto E = EmbeddingSet::from_residue_degrees(type);
            auto expected = sparse_oracle(E);
            auto got = enumerate_sparse(E);
            REQUIRE(got.size() == expected.size());
            std::sort(expected.begin(), expected.end(),
                      [](TauSubset a, TauSubset b) { return a.bits() < b.bits(); });
            std::sort(got.begin(), got.end(),
                      [](TauSubset a, TauSubset b) { return a.bits() < b.bits(); });
            for (size_t i = 0; i < got.size(); ++i)
                CHECK(got[i] == expected[i]);
        }
    }
}

TEST_CASE("sigma_theta on the quadratic example") {
    const auto E = EmbeddingSet::inert(2);
    SUBCASE("S = {0}, S' = {1}") {
        const auto [Sig, The] = sigma_theta(E, TauSubset::of({0}), TauSubset::of({1}));
        CHECK(Sig == TauSubset::of({1}));
        CHECK(The == TauSubset::of({0}));
    }
    SUBCASE("S full, S' empty") {
        const auto [Sig, The] = sigma_theta(E, TauSubset::full(2), TauSubset());
        CHECK(Sig.empty());
        CHECK(The.empty());
    }
    SUBCASE("both full") {
        const auto [Sig, The] = sigma_theta(E, TauSubset::full(2), TauSubset::full(2));
        CHECK(Sig == TauSubset::full(2));
        CHECK(The.empty());
    }
}

TEST_CASE("sigma_theta of a disjoint pair is sparse, exhaustively for d <= 6") {
    for (int d = 1; d <= 6; ++d) {
        for (const auto& type : cycle_types(d)) {
            const auto E = EmbeddingSet::from_residue_degrees(type);
            for (std::uint64_t sb = 0; sb < (1ULL << d); ++sb) {
                const TauSubset S(sb);
                // complement, and all disjoint subsets of it
                const std::uint64_t comp = TauSubset::full(d).bits() & ~sb;
                for (std::uint64_t sub = comp;; sub = (sub - 1) & comp) {
                    const TauSubset Sp(sub);
                    const auto [Sig, The] = sigma_theta(E, S, Sp);
                    (void)The;
                    CHECK(is_sparse(E, Sig));
                    if (sub == 0)
                        break;
                }
            }
        }
    }
}

TEST_CASE("transfer_invariants rules") {
    SUBCASE("d=4 4-cycle, S={0,2}") {
        const auto E = EmbeddingSet::inert(4);
        const auto inv = transfer_invariants(E, TauSubset::of({0, 2}));
        CHECK(inv.r == std::vector<int>{2, 0, 2, 0});
        CHECK(inv.s == std::vector<int>{0, 2, 0, 2});
    }
    SUBCASE("empty S gives all ones") {
        const auto E = EmbeddingSet::inert(4);
        const auto inv = transfer_invariants(E, TauSubset());
        CHECK(inv.r == std::vector<int>{1, 1, 1, 1});
    }
    SUBCASE("d=2, S={0}") {
        const auto E = EmbeddingSet::inert(2);
        const auto inv = transfer_invariants(E, TauSubset::of({0}));
        CHECK(inv.r == std::vector<int>{2, 0});
    }
    SUBCASE("non-sparse input throws") {
        const auto E = EmbeddingSet::inert(4);
        CHECK_THROWS_AS(transfer_invariants(E, TauSubset::of({0, 1})), NotSparse);
    }
}

TEST_CASE("expected_dimension") {
    CHECK(expected_dimension(ArchInvariants::from_r({1, 1, 1, 1})) == 4);
    const auto E4 = EmbeddingSet::inert(4);
    CHECK(expected_dimension(transfer_invariants(E4, TauSubset::of({0, 2}))) == 0);
    const auto E2 = EmbeddingSet::inert(2);
    CHECK(expected_dimension(transfer_invariants(E2, TauSubset::of({0}))) == 0);
}

TEST_CASE("dimension formula d - 2|S| for every sparse S, d <= 6") {
    for (int d = 1; d <= 6; ++d) {
        for (const auto& type : cycle_types(d)) {
            const auto E = EmbeddingSet::from_residue_degrees(type);
            for (const auto& S : enumerate_sparse(E)) {
                const auto inv = transfer_invariants(E, S);
                int sum_r = 0;
                for (int v : inv.r)
                    sum_r += v;
                CHECK(sum_r == d);
                CHECK(expected_dimension(inv) == d - 2 * S.size());
                CHECK(parity_obstruction(ArchInvariants::from_r(std::vector<int>(d, 1)), inv));
            }
        }
    }
}

TEST_CASE("parity_obstruction") {
    CHECK(parity_obstruction(ArchInvariants::from_r({1, 1}), ArchInvariants::from_r({2, 0})));
    CHECK_FALSE(
        parity_obstruction(ArchInvariants::from_r({1, 1}), ArchInvariants::from_r({2, 1})));
    const auto r = ArchInvariants::from_r({0, 1, 2});
    CHECK(parity_obstruction(r, r));
    CHECK_THROWS_AS(
        parity_obstruction(ArchInvariants::from_r({1, 1}), ArchInvariants::from_r({1, 1, 1})),
        LengthMismatch);
}

TEST_CASE("stratum_codimension") {
    const auto E = EmbeddingSet::inert(2);
    CHECK(stratum_codimension(E, TauSubset::of({0}), TauSubset::of({1})) == 0);
    CHECK(stratum_codimension(E, TauSubset::full(2), TauSubset::full(2)) == 2);
    CHECK(stratum_codimension(E, TauSubset::of({0, 1}), TauSubset::of({1})) == 1);
    CHECK_THROWS_AS(stratum_codimension(E, TauSubset::of({0}), TauSubset()), NotCovering);
}

TEST_CASE("residue degree helper builds the expected permutation") {
    const auto E = EmbeddingSet::from_residue_degrees({2, 1, 1});
    CHECK(E.d() == 4);
    CHECK(E.sigma(0) == 1);
    CHECK(E.sigma(1) == 0);
    CHECK(E.sigma(2) == 2);
    CHECK(E.sigma(3) == 3);
    CHECK(E.cycle_lengths() == std::vector<int>{2, 1, 1});
}
