#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "strata/local_model.hpp"

using namespace strata;

namespace {

// Independent oracle: count line pairs satisfying the two inclusion
// constraints by direct enumeration over all (q+1)^2 candidates.
long factor_count_oracle(const FqField& F) {
    std::vector<FqLine> lines;
    for (const auto& t : F.all_elements())
        lines.push_back({F.one(), t});
    lines.push_back({F.zero(), F.one()});
    long count = 0;
    for (const auto& V : lines)
        for (const auto& Vp : lines) {
            // alpha(x,y) = (x,0); alpha'(x',y') = (0,y')
            bool ok = true;
            for (const auto& c : F.all_elements()) {
                const auto vx = F.mul(c, V.x);
                if (!F.is_zero(vx) && !fq_line_contains(F, Vp, vx, F.zero()))
                    ok = false;
                const auto vy = F.mul(c, Vp.y);
                if (!F.is_zero(vy) && !fq_line_contains(F, V, F.zero(), vy))
                    ok = false;
            }
            if (ok)
                ++count;
        }
    return count;
}

}  // namespace

TEST_CASE("factor point counts are 2q+1") {
    struct {
        long p;
        int m;
        long q;
        long expect;
    } cases[] = {{2, 1, 2, 5}, {3, 1, 3, 7}, {2, 2, 4, 9}, {5, 1, 5, 11}};
    for (const auto& cs : cases) {
        const FqField F(cs.p, cs.m);
        const auto pts = enumerate_factor_points(F);
        CHECK(static_cast<long>(pts.size()) == cs.expect);
        CHECK(factor_count_oracle(F) == cs.expect);
        // exactly one point with both sections vanishing
        int doubly = 0;
        for (const auto& fp : pts)
            if (factor_beta_vanishes(F, fp) && factor_beta_prime_vanishes(F, fp))
                ++doubly;
        CHECK(doubly == 1);
    }
}

TEST_CASE("product point count at d=2, q=2") {
    const auto E = EmbeddingSet::inert(2);
    CHECK(enumerate_points(E, 2).size() == 25);
}

TEST_CASE("classification of special points") {
    const FqField F(3, 1);
    const auto E = EmbeddingSet::inert(2);
    SUBCASE("double zero at every factor") {
        ModelPoint pt;
        for (int i = 0; i < 2; ++i)
            pt.factors.push_back({FqLine{F.zero(), F.one()}, FqLine{F.one(), F.zero()}});
        const auto [S, Sp] = classify_point(F, pt);
        CHECK(S == TauSubset::full(2));
        CHECK(Sp == TauSubset::full(2));
    }
    SUBCASE("V = span(e1) forces only beta' to vanish") {
        ModelPoint pt;
        pt.factors.push_back({FqLine{F.one(), F.zero()}, FqLine{F.one(), F.zero()}});
        pt.factors.push_back({FqLine{F.zero(), F.one()}, FqLine{F.zero(), F.one()}});
        const auto [S, Sp] = classify_point(F, pt);
        CHECK_FALSE(S.contains(0));
        CHECK(Sp.contains(0));
    }
    SUBCASE("every enumerated point covers") {
        for (long q : {2L, 3L, 4L}) {
            const FqField Fq(q == 4 ? 2 : q, q == 4 ? 2 : 1);
            for (const auto& pt : enumerate_points(E, q)) {
                const auto [S, Sp] = classify_point(Fq, pt);
                CHECK((S | Sp) == TauSubset::full(2));
            }
        }
    }
}

TEST_CASE("local ring signatures") {
    const auto E = EmbeddingSet::inert(2);
    SUBCASE("deepest stratum") {
        const auto sig = local_ring_signature(E, TauSubset::full(2), TauSubset::full(2));
        CHECK(sig.variables.size() == 4);
        CHECK(sig.relation_taus.size() == 2);
    }
    SUBCASE("smooth component point") {
        const auto sig = local_ring_signature(E, TauSubset::full(2), TauSubset());
        CHECK(sig.variables.size() == 2);
        for (const auto& v : sig.variables)
            CHECK(v.kind == 'X');
        CHECK(sig.relation_taus.empty());
    }
    SUBCASE("codimension one") {
        const auto sig = local_ring_signature(E, TauSubset::full(2), TauSubset::of({1}));
        CHECK(sig.variables.size() == 3);
        CHECK(sig.relation_taus == std::vector<int>{1});
    }
    SUBCASE("non-covering pair throws") {
        CHECK_THROWS_AS(local_ring_signature(E, TauSubset::of({0}), TauSubset()), NotCovering);
    }
}

TEST_CASE("cube faces of strata") {
    const auto E = EmbeddingSet::inert(2);
    SUBCASE("complementary pair gives a vertex") {
        const auto f = cube_face_of(E, TauSubset::of({0}), TauSubset::of({1}));
        CHECK(f.dim == 0);
        CHECK(f.zero_set == TauSubset::of({0}));
        CHECK(f.one_set == TauSubset::of({1}));
    }
    SUBCASE("full pair gives the whole cube") {
        const auto f = cube_face_of(E, TauSubset::full(2), TauSubset::full(2));
        CHECK(f.dim == 2);
        CHECK(f.zero_set.empty());
        CHECK(f.one_set.empty());
    }
    SUBCASE("edge x_0 = 0") {
        const auto f = cube_face_of(E, TauSubset::full(2), TauSubset::of({1}));
        CHECK(f.dim == 1);
        CHECK(f.zero_set == TauSubset::of({0}));
        CHECK(f.one_set.empty());
    }
}

TEST_CASE("face correspondence reverses stratum containment, d <= 4") {
    for (int d = 1; d <= 4; ++d) {
        const auto E = EmbeddingSet::inert(d);
        const auto full = TauSubset::full(d);
        std::vector<std::pair<TauSubset, TauSubset>> labels;
        for (std::uint64_t a = 0; a < (1ULL << d); ++a)
            for (std::uint64_t b = 0; b < (1ULL << d); ++b)
                if ((TauSubset(a) | TauSubset(b)) == full)
                    labels.push_back({TauSubset(a), TauSubset(b)});
        for (const auto& [S1, Sp1] : labels)
            for (const auto& [S2, Sp2] : labels) {
                const bool contained = (S2 & S1) == S2 && (Sp2 & Sp1) == Sp2;
                const bool face = cube_face_contains(cube_face_of(E, S1, Sp1),
                                                     cube_face_of(E, S2, Sp2));
                CHECK(contained == face);
            }
    }
}
