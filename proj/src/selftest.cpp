#include "strata/selftest.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <numeric>

#include "strata/cube.hpp"
#include "strata/dieudonne.hpp"
#include "strata/local_model.hpp"
#include "strata/rng.hpp"
#include "strata/weight.hpp"

namespace strata {

namespace {

std::vector<std::vector<int>> cycle_types(int d) {
    std::vector<std::vector<int>> out;
    std::function<void(int, int, std::vector<int>&)> rec = [&](int n, int mx, std::vector<int>& cur) {
        if (n == 0) {
            out.push_back(cur);
            return;
        }
        for (int k = std::min(n, mx); k >= 1; --k) {
            cur.push_back(k);
            rec(n - k, k, cur);
            cur.pop_back();
        }
    };
    std::vector<int> cur;
    rec(d, d, cur);
    return out;
}

bool brute_force_hasse(const GradedModule& D, int tau) {
    // Enumerate the two candidate lines pointwise and compare as sets.
    const auto& k = *D.field;
    const auto vin = fq_mat_image_line(k, D.V[static_cast<size_t>(D.E.sigma(tau))]);
    const auto fin = fq_mat_image_line(k, D.F[static_cast<size_t>(D.E.sigma_inv(tau))]);
    std::vector<std::pair<long, long>> a, b;
    for (const auto& c : k.all_elements()) {
        a.push_back({k.index_of(k.mul(c, vin.x)), k.index_of(k.mul(c, vin.y))});
        b.push_back({k.index_of(k.mul(c, fin.x)), k.index_of(k.mul(c, fin.y))});
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

struct Ctx {
    const SelfTestOptions& opt;
    SelfTestReport& report;

    void check(const std::string& anchor, bool pass, const std::string& detail) {
        report.checks.push_back({anchor, pass, detail});
    }
};

void check_sparse_calculus(Ctx& c) {
    const int dmax = c.opt.quick ? 4 : 6;
    bool enum_ok = true, dim_ok = true, parity_ok = true, theta_ok = true;
    long enum_count = 0;
    for (int d = 1; d <= dmax && enum_ok; ++d) {
        for (const auto& type : cycle_types(d)) {
            const auto E = EmbeddingSet::from_residue_degrees(type);
            std::vector<TauSubset> brute;
            for (std::uint64_t b = 0; b < (1ULL << d); ++b) {
                bool sparse = true;
                for (int t = 0; t < d && sparse; ++t)
                    if (((b >> t) & 1) && ((b >> E.sigma(t)) & 1))
                        sparse = false;
                if (sparse)
                    brute.push_back(TauSubset(b));
            }
            auto got = enumerate_sparse(E);
            enum_count += static_cast<long>(got.size());
            std::sort(got.begin(), got.end(),
                      [](TauSubset x, TauSubset y) { return x.bits() < y.bits(); });
            std::sort(brute.begin(), brute.end(),
                      [](TauSubset x, TauSubset y) { return x.bits() < y.bits(); });
            if (got.size() != brute.size() || !std::equal(got.begin(), got.end(), brute.begin()))
                enum_ok = false;

            const auto ones = ArchInvariants::from_r(std::vector<int>(static_cast<size_t>(d), 1));
            for (const auto& S : got) {
                const auto inv = transfer_invariants(E, S);
                const int sum_r = std::accumulate(inv.r.begin(), inv.r.end(), 0);
                if (sum_r != d || expected_dimension(inv) != d - 2 * S.size())
                    dim_ok = false;
                if (!parity_obstruction(ones, inv))
                    parity_ok = false;
            }
            for (std::uint64_t sb = 0; sb < (1ULL << d); ++sb) {
                const std::uint64_t comp = TauSubset::full(d).bits() & ~sb;
                for (std::uint64_t sp = comp;; sp = (sp - 1) & comp) {
                    const auto [Sig, The] = sigma_theta(E, TauSubset(sb), TauSubset(sp));
                    (void)The;
                    if (!is_sparse(E, Sig))
                        theta_ok = false;
                    if (sp == 0)
                        break;
                }
            }
        }
    }
    c.check("sparse-enumeration", enum_ok,
            "power-set oracle, d <= " + std::to_string(dmax) + ", " + std::to_string(enum_count) +
                " sparse sets");
    c.check("invariant-transfer", dim_ok, "sum r' = d and dimension d - 2|S|");
    c.check("parity-realizability", parity_ok, "every transfer passes the parity test");
    c.check("sigma-theta-sparsity", theta_ok, "Sigma of disjoint pairs is sparse");
}

void check_dieudonne(Ctx& c) {
    bool ss_ok = true, hasse_ok = true, rank_ok = true;
    // supersingular example lies in the deepest stratum
    for (long p : {2L, 3L}) {
        for (int d : {1, 2, 4}) {
            const auto E = EmbeddingSet::inert(d);
            const FqField k(p, d);
            const auto D = supersingular_example(E, k);
            if (!is_valid(D) || stratum_membership(D) != TauSubset::full(d))
                ss_ok = false;
            const auto O = ordinary_example(E, k);
            if (stratum_membership(O) != TauSubset())
                ss_ok = false;
        }
    }
    // oracle agreement on seeded random modules
    const int per_config = c.opt.quick ? 25 : 100;
    SplitMix64 seeds(c.opt.seed);
    for (long p : {2L, 3L}) {
        for (int d : {1, 2, 4}) {
            const auto E = EmbeddingSet::inert(d);
            const FqField k(p, d <= 2 ? 2 : 1);
            for (int it = 0; it < per_config; ++it) {
                const auto D = random_valid_module(E, k, seeds.next());
                for (int tau = 0; tau < d; ++tau)
                    if (hasse_vanishes(D, tau) != brute_force_hasse(D, tau))
                        hasse_ok = false;
            }
        }
    }
    // witness quotient ranks match the transfer rule
    for (long p : {2L, 3L}) {
        for (int d = 1; d <= 4; ++d) {
            for (const auto& type : cycle_types(d)) {
                int m = 1;
                for (int len : type)
                    m = std::lcm(m, len);
                if (p == 3L && m > 4)
                    continue;  // keep q at desk scale
                const auto E = EmbeddingSet::from_residue_degrees(type);
                const FqField k(p, m);
                const auto D = supersingular_example(E, k);
                for (const auto& S : enumerate_sparse(E)) {
                    const auto w = witness_submodule(D, S);
                    const auto inv = transfer_invariants(E, S);
                    if (w.quotient_ranks != inv.r)
                        rank_ok = false;
                }
            }
        }
    }
    c.check("supersingular-stratum", ss_ok, "deepest stratum for d in {1,2,4}, p in {2,3}");
    c.check("hasse-subspace-oracle", hasse_ok,
            std::to_string(per_config) + " random modules per configuration");
    c.check("lie-rank-witness", rank_ok, "quotient ranks match the transfer rule, d <= 4");
}

void check_gamma0(Ctx& c) {
    bool ok = true, datum_ok = true;
    std::string detail;
    const int variants = c.opt.quick ? 2 : 4;
    for (long p : {2L, 3L}) {
        const auto E = EmbeddingSet::inert(2);
        const FqField k(p, 2);
        const auto S = TauSubset::of({0}), Sp = TauSubset::of({1});
        SplitMix64 rng(c.opt.seed + static_cast<std::uint64_t>(p));
        for (int v = 0; v < variants; ++v) {
            DieudonneLattice A = supersingular_lattice(E, k, 6);
            if (v > 0) {
                // random graded basis change
                const auto& R = *A.ring;
                std::vector<GrMat2> g;
                for (int tau = 0; tau < 2; ++tau) {
                    GrMat2 gt;
                    do {
                        auto rnd = [&] {
                            GaloisRing::Elem e(static_cast<size_t>(R.m()));
                            for (auto& x : e)
                                x = static_cast<long>(rng.below(static_cast<std::uint64_t>(R.pN())));
                            return e;
                        };
                        gt = {rnd(), rnd(), rnd(), rnd()};
                    } while (!R.is_unit(gr_mat_det(R, gt)));
                    g.push_back(gt);
                }
                A = apply_basis_change(A, g);
            }
            const auto datum = gamma0_forward(A, S, Sp);
            const auto rec = gamma0_inverse(datum, S, Sp);
            if (stratum_membership(reduce(rec)) != TauSubset::full(2))
                ok = false;
            if (lattice_isomorphic(rec, A, c.opt.seed) != IsoResult::Isomorphic)
                ok = false;
            const auto datum2 = gamma0_forward(rec, S, Sp);
            if (datum_isomorphic(datum, datum2, c.opt.seed) != IsoResult::Isomorphic)
                datum_ok = false;
        }
    }
    c.check("gamma0-roundtrip", ok, "inverse(forward) is the identity on classes, p in {2,3}");
    c.check("gamma0-datum-roundtrip", datum_ok, "forward(inverse) reproduces the datum");
}

void check_local_model(Ctx& c) {
    bool count_ok = true, cover_ok = true, ring_ok = true, face_ok = true;
    for (long q : {2L, 3L, 4L, 5L}) {
        long p = q == 4 ? 2 : q;
        int m = q == 4 ? 2 : 1;
        const FqField F(p, m);
        const auto pts = enumerate_factor_points(F);
        if (static_cast<long>(pts.size()) != 2 * q + 1)
            count_ok = false;
        int doubly = 0;
        for (const auto& fp : pts)
            if (factor_beta_vanishes(F, fp) && factor_beta_prime_vanishes(F, fp))
                ++doubly;
        if (doubly != 1)
            count_ok = false;
    }
    {
        const auto E = EmbeddingSet::inert(2);
        for (long q : {2L, 3L}) {
            const FqField F(q, 1);
            for (const auto& pt : enumerate_points(E, q)) {
                const auto [S, Sp] = classify_point(F, pt);
                if ((S | Sp) != TauSubset::full(2))
                    cover_ok = false;
            }
        }
    }
    {
        const auto E = EmbeddingSet::inert(2);
        const auto sig = local_ring_signature(E, TauSubset::full(2), TauSubset::full(2));
        ring_ok = sig.variables.size() == 4 && sig.relation_taus.size() == 2;
        const auto sig2 = local_ring_signature(E, TauSubset::full(2), TauSubset::of({1}));
        ring_ok = ring_ok && sig2.variables.size() == 3 && sig2.relation_taus.size() == 1;
    }
    for (int d = 1; d <= 4 && face_ok; ++d) {
        const auto E = EmbeddingSet::inert(d);
        const auto full = TauSubset::full(d);
        std::vector<std::pair<TauSubset, TauSubset>> labels;
        for (std::uint64_t sb = 0; sb < (1ULL << d); ++sb)
            for (std::uint64_t spb = 0; spb < (1ULL << d); ++spb) {
                const TauSubset S(sb), Sp(spb);
                if ((S | Sp) == full)
                    labels.push_back({S, Sp});
            }
        for (const auto& [S1, Sp1] : labels) {
            for (const auto& [S2, Sp2] : labels) {
                const bool stratum_contained =
                    (S2 & S1) == S2 && (Sp2 & Sp1) == Sp2;  // X_{S1,Sp1} ⊆ X_{S2,Sp2}
                const bool face_contains =
                    cube_face_contains(cube_face_of(E, S1, Sp1), cube_face_of(E, S2, Sp2));
                if (stratum_contained != face_contains)
                    face_ok = false;
                if (cube_face_of(E, S1, Sp1).dim != stratum_codimension(E, S1, Sp1))
                    face_ok = false;
            }
        }
    }
    c.check("local-model-count", count_ok, "2q+1 points per factor, one doubly vanishing");
    c.check("local-model-cover", cover_ok, "classify_point always covers");
    c.check("local-ring-signature", ring_ok, "variable and relation counts");
    c.check("face-poset-order", face_ok, "order-reversing face correspondence, d <= 4");
}

void check_cube(Ctx& c) {
    const int dmax = c.opt.quick ? 5 : 6;
    bool uni_ok = true, euler_ok = true, fvec_ok = true, cobound_ok = true, common_ok = true;
    for (int d = 1; d <= dmax; ++d) {
        const auto T = build_triangulation(d);
        for (const auto& P : T.tops)
            if (!is_unimodular(P, d))
                uni_ok = false;
        long long alt = 0;
        for (size_t kdim = 0; kdim < T.f_vector.size(); ++kdim)
            alt += (kdim % 2 == 0 ? 1 : -1) * T.f_vector[kdim];
        if (alt != 1)
            euler_ok = false;
    }
    {
        const auto T2 = build_triangulation(2);
        fvec_ok = T2.f_vector == std::vector<long long>{4, 5, 2};
        const auto T3 = build_triangulation(3);
        fvec_ok = fvec_ok && T3.f_vector == std::vector<long long>{8, 19, 18, 6};
    }
    for (int d = 2; d <= 4; ++d) {
        const auto T = build_triangulation(d);
        for (int r = 0; r + 2 <= d; ++r) {
            const auto A = incidence_matrix(T, r);
            const auto B = incidence_matrix(T, r + 1);
            // rows(A) x cols(B) composite must vanish
            for (int i = 0; i < A.rows && cobound_ok; ++i)
                for (int j = 0; j < B.cols; ++j) {
                    long acc = 0;
                    for (int k = 0; k < A.cols; ++k)
                        acc += static_cast<long>(A.at(i, k)) * B.at(k, j);
                    if (acc != 0) {
                        cobound_ok = false;
                        break;
                    }
                }
        }
        // pairwise intersections of top simplices are common faces
        if (d <= 4) {
            for (size_t a = 0; a < T.tops.size() && common_ok; ++a)
                for (size_t b = a + 1; b < T.tops.size(); ++b) {
                    std::vector<VertexMask> inter;
                    std::set_intersection(T.tops[a].verts.begin(), T.tops[a].verts.end(),
                                          T.tops[b].verts.begin(), T.tops[b].verts.end(),
                                          std::back_inserter(inter));
                    if (inter.empty())
                        continue;
                    if (T.face_index(static_cast<int>(inter.size()) - 1, inter) < 0) {
                        common_ok = false;
                        break;
                    }
                }
        }
    }
    c.check("cube-unimodularity", uni_ok, "all d! staircase simplices, d <= " + std::to_string(dmax));
    c.check("cube-euler", euler_ok, "alternating f-vector sum is 1");
    c.check("cube-f-vectors", fvec_ok, "(4,5,2) at d=2 and (8,19,18,6) at d=3");
    c.check("cube-coboundary-square", cobound_ok, "composite incidence maps vanish");
    c.check("cube-common-faces", common_ok, "pairwise top intersections are faces");
}

void check_weight(Ctx& c) {
    bool quasi_ok = true, pnew_ok = true, coker_ok = true, orient_ok = true, split_ok = true;
    const int seeds_per_d = c.opt.quick ? 10 : 100;
    SplitMix64 master(c.opt.seed + 17);
    for (int d : {2, 4}) {
        const auto T = build_triangulation(d);
        const int runs = (d == 4 && c.opt.quick) ? 5 : seeds_per_d;
        for (int it = 0; it < runs; ++it) {
            const std::uint64_t sd = master.next();
            const int n1 = 1 + static_cast<int>(sd % 2);
            const int np = n1 + 1 + static_cast<int>((sd >> 8) % 3);
            const auto sc = generate_scenario(d, sd, n1, np, ScenarioProfile::uniform());
            const auto rep = check_combinatorial_quasiiso(T, sc);
            if (!rep.passed())
                quasi_ok = false;
            const auto [quot, sub] = p_new_dims(sc);
            if (quot != sub)
                pnew_ok = false;
            if (rep.coker_bottom != quot || rep.coker_top != quot)
                coker_ok = false;
            // random re-orientation leaves the bottom cokernel alone
            std::vector<int> to = default_top_orientations(T);
            std::vector<int> fo(T.faces[static_cast<size_t>(d - 1)].size(), 1);
            SplitMix64 flip(sd ^ 0xabcdef);
            for (auto& s : to)
                if (flip.below(2))
                    s = -s;
            for (auto& s : fo)
                if (flip.below(2))
                    s = -s;
            if (coker_bottom_dim(T, sc, to, fo) != rep.coker_bottom)
                orient_ok = false;
        }
    }
    {
        // block split: the x_i = 0 and x_i = 1 blocks never carry the same map
        const auto T = build_triangulation(2);
        const auto sc = generate_scenario(2, 99, 2, 5, ScenarioProfile::uniform());
        const auto W = top_restriction_map(T, sc);
        const auto [S, Sp] = level_split(sc.E);
        (void)S;
        for (int axis = 0; axis < 2; ++axis) {
            const int tau = sc.tau_of_i[static_cast<size_t>(axis)];
            const bool zero_forgets = Sp.contains(tau);
            const auto& deg_zero = zero_forgets ? sc.deg1 : sc.deg2;
            const auto& deg_one = zero_forgets ? sc.deg2 : sc.deg1;
            for (int x = 0; x < sc.np; ++x) {
                if (W.top.at(x, (axis * 2 + 0) * sc.n1 + deg_zero[static_cast<size_t>(x)]) != 1)
                    split_ok = false;
                if (W.top.at(x, (axis * 2 + 1) * sc.n1 + deg_one[static_cast<size_t>(x)]) != 1)
                    split_ok = false;
            }
        }
    }
    c.check("combinatorial-quasiiso", quasi_ok,
            std::to_string(seeds_per_d) + " seeded scenarios at d in {2,4}");
    c.check("p-new-selfduality", pnew_ok, "quotient equals subspace dimension");
    c.check("coker-matches-p-new", coker_ok, "bottom cokernel equals the p-new dimension");
    c.check("orientation-invariance", orient_ok, "cokernel stable under re-orientation");
    c.check("degeneracy-block-split", split_ok, "x_i=0 and x_i=1 strata carry distinct maps");
}

void check_determinism(Ctx& c) {
    const auto a = scenario_to_json(generate_scenario(2, 42, 2, 6, ScenarioProfile::fibered(3)));
    const auto b = scenario_to_json(generate_scenario(2, 42, 2, 6, ScenarioProfile::fibered(3)));
    bool fib_ok = true;
    const auto sc = generate_scenario(2, 42, 2, 6, ScenarioProfile::fibered(3));
    std::vector<int> fiber(static_cast<size_t>(sc.n1), 0);
    for (int v : sc.deg1)
        ++fiber[static_cast<size_t>(v)];
    for (int f : fiber)
        if (f != 3)
            fib_ok = false;
    bool infeasible_ok = false;
    try {
        generate_scenario(2, 1, 2, 5, ScenarioProfile::fibered(3));
    } catch (const InfeasibleProfile&) {
        infeasible_ok = true;
    }
    c.check("scenario-determinism", a == b, "identical seeds give identical serializations");
    c.check("fibered-profile", fib_ok && infeasible_ok,
            "fibered(3) fibers have size 3; np=5 rejected");
}

}  // namespace

bool SelfTestReport::all_pass() const {
    for (const auto& ck : checks)
        if (!ck.pass)
            return false;
    return true;
}

std::string SelfTestReport::to_json() const {
    nlohmann::ordered_json j;
    j["report"] = "selftest";
    j["quick"] = quick;
    j["seed"] = seed;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& ck : checks) {
        nlohmann::ordered_json cj;
        cj["anchor"] = ck.anchor;
        cj["pass"] = ck.pass;
        cj["detail"] = ck.detail;
        arr.push_back(std::move(cj));
    }
    j["checks"] = std::move(arr);
    j["all_pass"] = all_pass();
    return j.dump(2);
}

std::string SelfTestReport::to_table() const {
    std::string out;
    size_t width = 0;
    for (const auto& ck : checks)
        width = std::max(width, ck.anchor.size());
    for (const auto& ck : checks) {
        out += ck.anchor;
        out += std::string(width - ck.anchor.size() + 1, ' ');
        out += ck.pass ? "PASS" : "FAIL";
        out += "  (" + ck.detail + ")\n";
    }
    out += all_pass() ? "selftest: all checks passed\n" : "selftest: FAILURES present\n";
    return out;
}

SelfTestReport run_selftest(const SelfTestOptions& opt) {
    SelfTestReport report;
    report.quick = opt.quick;
    report.seed = opt.seed;
    Ctx ctx{opt, report};
    check_sparse_calculus(ctx);
    check_dieudonne(ctx);
    check_gamma0(ctx);
    check_local_model(ctx);
    check_cube(ctx);
    check_weight(ctx);
    check_determinism(ctx);
    return report;
}

}  // namespace strata
