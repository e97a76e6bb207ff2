#include "strata/weight.hpp"

#include <json.hpp>

#include <algorithm>

#include "strata/rng.hpp"

namespace strata {

namespace {

using json = nlohmann::ordered_json;

int block_col(int axis, int side, int n1, int c) { return (axis * 2 + side) * n1 + c; }

// Degeneracy map attached to the stratum block (axis, side): the x_i = 0
// stratum pairs with "forget" when tau_i lies in S', with "mod out"
// otherwise; the x_i = 1 stratum carries the other map.
const std::vector<int>& block_deg(const CosetScenario& sc, TauSubset Sprime, int axis, int side) {
    const int tau = sc.tau_of_i[static_cast<size_t>(axis)];
    const bool forget = Sprime.contains(tau) == (side == 0);
    return forget ? sc.deg1 : sc.deg2;
}

}  // namespace

std::pair<TauSubset, TauSubset> level_split(const EmbeddingSet& E) {
    const auto cycles = E.cycle_lengths();
    if (cycles.size() != 1 || cycles[0] % 2 != 0)
        throw OddCycle("level_split: sigma must be a single cycle of even length");
    TauSubset S, Sp;
    int tau = 0;  // smallest element of the unique cycle
    for (int step = 0; step < E.d(); ++step) {
        if (step % 2 == 0)
            S = S.with(tau);
        else
            Sp = Sp.with(tau);
        tau = E.sigma(tau);
    }
    return {S, Sp};
}

void validate_scenario(const CosetScenario& sc) {
    if (sc.n1 < 1 || sc.np < 1)
        throw StrataError("scenario: X1 and Xp must be nonempty");
    if (static_cast<int>(sc.deg1.size()) != sc.np || static_cast<int>(sc.deg2.size()) != sc.np)
        throw StrataError("scenario: degeneracy maps must be total on Xp");
    for (int v : sc.deg1)
        if (v < 0 || v >= sc.n1)
            throw StrataError("scenario: deg1 out of range");
    for (int v : sc.deg2)
        if (v < 0 || v >= sc.n1)
            throw StrataError("scenario: deg2 out of range");
    if (static_cast<int>(sc.tau_of_i.size()) != sc.E.d())
        throw StrataError("scenario: tau_of_i must be a bijection on axes");
    std::vector<char> seen(static_cast<size_t>(sc.E.d()), 0);
    for (int t : sc.tau_of_i) {
        if (t < 0 || t >= sc.E.d() || seen[static_cast<size_t>(t)])
            throw StrataError("scenario: tau_of_i must be a bijection on axes");
        seen[static_cast<size_t>(t)] = 1;
    }
    level_split(sc.E);
}

CosetScenario generate_scenario(int d, std::uint64_t seed, int n1, int np,
                                ScenarioProfile profile) {
    if (n1 < 1 || np < 1)
        throw StrataError("generate_scenario: n1 and np must be positive");
    CosetScenario sc{EmbeddingSet::inert(d), {}, n1, np, {}, {}, seed, {}, {}};
    sc.tau_of_i.resize(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i)
        sc.tau_of_i[static_cast<size_t>(i)] = i;

    SplitMix64 rng(seed);
    sc.deg1.resize(static_cast<size_t>(np));
    sc.deg2.resize(static_cast<size_t>(np));
    if (profile.kind == ScenarioProfile::Fibered) {
        const int k = profile.fiber;
        if (k < 1 || np % k != 0 || np != k * n1)
            throw InfeasibleProfile("generate_scenario: fibered(k) needs np = k * n1");
        for (int x = 0; x < np; ++x)
            sc.deg1[static_cast<size_t>(x)] = x / k;
        for (int x = 0; x < np; ++x)
            sc.deg2[static_cast<size_t>(x)] = static_cast<int>(rng.below(static_cast<std::uint64_t>(n1)));
    } else {
        for (int x = 0; x < np; ++x)
            sc.deg1[static_cast<size_t>(x)] = static_cast<int>(rng.below(static_cast<std::uint64_t>(n1)));
        for (int x = 0; x < np; ++x)
            sc.deg2[static_cast<size_t>(x)] = static_cast<int>(rng.below(static_cast<std::uint64_t>(n1)));
    }
    validate_scenario(sc);
    return sc;
}

std::string scenario_to_json(const CosetScenario& sc) {
    json j;
    j["d"] = sc.E.d();
    j["sigma"] = sc.E.sigma();
    j["tau_of_i"] = sc.tau_of_i;
    j["X1"] = sc.n1;
    j["Xp"] = sc.np;
    j["deg1"] = sc.deg1;
    j["deg2"] = sc.deg2;
    if (sc.seed)
        j["seed"] = *sc.seed;
    if (sc.hecke1)
        j["hecke1"] = *sc.hecke1;
    if (sc.heckep)
        j["heckep"] = *sc.heckep;
    return j.dump();
}

CosetScenario scenario_from_json(const std::string& text) {
    const json j = json::parse(text);
    CosetScenario sc{EmbeddingSet(j.at("d").get<int>(), j.at("sigma").get<std::vector<int>>()),
                     j.at("tau_of_i").get<std::vector<int>>(),
                     j.at("X1").get<int>(),
                     j.at("Xp").get<int>(),
                     j.at("deg1").get<std::vector<int>>(),
                     j.at("deg2").get<std::vector<int>>(),
                     {},
                     {},
                     {}};
    if (j.contains("seed"))
        sc.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("hecke1"))
        sc.hecke1 = j.at("hecke1").get<std::vector<std::vector<long>>>();
    if (j.contains("heckep"))
        sc.heckep = j.at("heckep").get<std::vector<std::vector<long>>>();
    validate_scenario(sc);
    return sc;
}

std::vector<YComponent> components_Y(const TriangulatedCube& T, const CosetScenario& sc, int r) {
    validate_scenario(sc);
    if (T.d != sc.E.d())
        throw StrataError("components_Y: triangulation dimension mismatch");
    if (r != T.d && r != T.d - 1)
        throw DimensionOutOfRange("components_Y: only r in {d-1, d} is modeled");
    std::vector<YComponent> out;
    if (r == T.d) {
        for (int s = 0; s < static_cast<int>(T.tops.size()); ++s)
            for (int x = 0; x < sc.np; ++x)
                out.push_back({s, x});
        return out;
    }
    const auto& faces = T.faces[static_cast<size_t>(T.d - 1)];
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
        const auto cls = classify_codim1(faces[static_cast<size_t>(f)], T.d);
        const int count = cls.kind == Codim1Class::InteriorBundle ? sc.np : sc.n1;
        for (int g = 0; g < count; ++g)
            out.push_back({f, g});
    }
    return out;
}

namespace {

struct BottomLayout {
    std::vector<int> col_start;                // per (d-1)-face
    std::vector<Codim1Class> face_class;       // per (d-1)-face
    int total_cols = 0;
};

BottomLayout bottom_layout(const TriangulatedCube& T, const CosetScenario& sc) {
    BottomLayout L;
    const auto& faces = T.faces[static_cast<size_t>(T.d - 1)];
    for (const auto& fv : faces) {
        const auto cls = classify_codim1(fv, T.d);
        L.col_start.push_back(L.total_cols);
        L.face_class.push_back(cls);
        L.total_cols += cls.kind == Codim1Class::InteriorBundle ? sc.np : sc.n1;
    }
    return L;
}

QMat build_bottom(const TriangulatedCube& T, const CosetScenario& sc, TauSubset Sprime,
                  const BottomLayout& L, const std::vector<int>& top_orient,
                  const std::vector<int>& face_orient) {
    const int d = T.d;
    QMat B(static_cast<int>(T.tops.size()) * sc.np, L.total_cols);
    for (int c = 0; c < static_cast<int>(T.tops.size()); ++c) {
        const auto& P = T.tops[static_cast<size_t>(c)];
        for (int j = 0; j <= d; ++j) {
            std::vector<VertexMask> facet;
            for (int i = 0; i <= d; ++i)
                if (i != j)
                    facet.push_back(P.verts[static_cast<size_t>(i)]);
            const int f = T.face_index(d - 1, facet);
            const int sign = (j % 2 == 0 ? 1 : -1) * top_orient[static_cast<size_t>(c)] *
                             face_orient[static_cast<size_t>(f)];
            const auto& cls = L.face_class[static_cast<size_t>(f)];
            for (int x = 0; x < sc.np; ++x) {
                const int row = c * sc.np + x;
                int geom = x;
                if (cls.kind != Codim1Class::InteriorBundle) {
                    const int side = cls.kind == Codim1Class::FaceZero ? 0 : 1;
                    geom = block_deg(sc, Sprime, cls.axis, side)[static_cast<size_t>(x)];
                }
                B.at(row, L.col_start[static_cast<size_t>(f)] + geom) += sign;
            }
        }
    }
    return B;
}

}  // namespace

WeightTopDiagram top_restriction_map(const TriangulatedCube& T, const CosetScenario& sc) {
    validate_scenario(sc);
    if (T.d != sc.E.d())
        throw StrataError("top_restriction_map: triangulation dimension mismatch");
    const auto [S, Sp] = level_split(sc.E);
    const int d = T.d;
    const int strata_cols = 2 * d * sc.n1;

    WeightTopDiagram W;
    W.S = S;
    W.Sprime = Sp;
    W.comps_d = components_Y(T, sc, d);
    W.comps_d1 = components_Y(T, sc, d - 1);

    // top: restriction of stratum functions to the deepest stratum, block
    // per (axis, side), each block the pullback of one degeneracy map.
    W.top = QMat(sc.np, strata_cols);
    for (int axis = 0; axis < d; ++axis)
        for (int side = 0; side < 2; ++side) {
            const auto& deg = block_deg(sc, Sp, axis, side);
            for (int x = 0; x < sc.np; ++x)
                W.top.at(x, block_col(axis, side, sc.n1, deg[static_cast<size_t>(x)])) = 1;
        }

    // right: plain pullback of functions on the deepest stratum.
    W.right = QMat(static_cast<int>(T.tops.size()) * sc.np, sc.np);
    for (int c = 0; c < static_cast<int>(T.tops.size()); ++c)
        for (int x = 0; x < sc.np; ++x)
            W.right.at(c * sc.np + x, x) = 1;

    const BottomLayout L = bottom_layout(T, sc);
    const std::vector<int> face_orient(T.faces[static_cast<size_t>(d - 1)].size(), 1);
    W.bottom = build_bottom(T, sc, Sp, L, default_top_orientations(T), face_orient);

    // left: one scalar weight per ((d-1)-face, block), solved so that the
    // square commutes; the weights depend only on the triangulation.
    const auto& faces = T.faces[static_cast<size_t>(d - 1)];
    const int nfaces = static_cast<int>(faces.size());
    // signed facet incidence sign(P, P'), 0 when P' is not a facet of P
    IntMat inc = top_incidence_matrix(T);
    // For each (axis, side): solve sum_{P' facet of P} inc(P',P) * u_{P'} = 1
    // over the unknowns supported on that face's boundary simplices plus all
    // interior ones.
    std::vector<std::vector<mpq_class>> weights(
        static_cast<size_t>(nfaces), std::vector<mpq_class>(static_cast<size_t>(2 * d), 0));
    for (int axis = 0; axis < d; ++axis) {
        for (int side = 0; side < 2; ++side) {
            std::vector<int> unknown_faces;
            for (int f = 0; f < nfaces; ++f) {
                const auto& cls = L.face_class[static_cast<size_t>(f)];
                const bool boundary_here =
                    (cls.kind == Codim1Class::FaceZero && side == 0 && cls.axis == axis) ||
                    (cls.kind == Codim1Class::FaceOne && side == 1 && cls.axis == axis);
                if (cls.kind == Codim1Class::InteriorBundle || boundary_here)
                    unknown_faces.push_back(f);
            }
            QMat A(static_cast<int>(T.tops.size()), static_cast<int>(unknown_faces.size()));
            for (int c = 0; c < static_cast<int>(T.tops.size()); ++c)
                for (size_t uf = 0; uf < unknown_faces.size(); ++uf)
                    A.at(c, static_cast<int>(uf)) = inc.at(unknown_faces[uf], c);
            std::vector<mpq_class> ones(T.tops.size(), mpq_class(1)), u;
            if (!qmat_solve(A, ones, u))
                throw DiagramNotCommuting(
                    "top_restriction_map: no commuting pullback weights exist");
            for (size_t uf = 0; uf < unknown_faces.size(); ++uf)
                weights[static_cast<size_t>(unknown_faces[uf])][static_cast<size_t>(axis * 2 + side)] =
                    u[uf];
        }
    }

    W.left = QMat(static_cast<int>(W.comps_d1.size()), strata_cols);
    {
        int row = 0;
        for (int f = 0; f < nfaces; ++f) {
            const auto& cls = L.face_class[static_cast<size_t>(f)];
            if (cls.kind == Codim1Class::InteriorBundle) {
                for (int x = 0; x < sc.np; ++x, ++row)
                    for (int axis = 0; axis < d; ++axis)
                        for (int side = 0; side < 2; ++side) {
                            const auto& deg = block_deg(sc, Sp, axis, side);
                            W.left.at(row,
                                      block_col(axis, side, sc.n1, deg[static_cast<size_t>(x)])) +=
                                weights[static_cast<size_t>(f)][static_cast<size_t>(axis * 2 + side)];
                        }
            } else {
                const int side = cls.kind == Codim1Class::FaceZero ? 0 : 1;
                for (int cidx = 0; cidx < sc.n1; ++cidx, ++row)
                    W.left.at(row, block_col(cls.axis, side, sc.n1, cidx)) =
                        weights[static_cast<size_t>(f)][static_cast<size_t>(cls.axis * 2 + side)];
            }
        }
    }

    if (!(qmat_mul(W.bottom, W.left) == qmat_mul(W.right, W.top)))
        throw DiagramNotCommuting("top_restriction_map: constructed square does not commute");
    return W;
}

QuasiIsoReport check_combinatorial_quasiiso(const TriangulatedCube& T, const CosetScenario& sc) {
    const WeightTopDiagram W = top_restriction_map(T, sc);
    QuasiIsoReport rep;
    rep.commutes = true;  // enforced by construction

    const int rank_top = qmat_rank(W.top);
    const int rank_bottom = qmat_rank(W.bottom);
    rep.coker_top = W.top.rows() - rank_top;
    rep.coker_bottom = W.bottom.rows() - rank_bottom;
    rep.ker_top = W.top.cols() - rank_top;
    rep.ker_bottom = W.bottom.cols() - rank_bottom;

    // induced map coker(top) -> coker(bottom), [v] -> [right v]
    // injective iff { v : right v in im(bottom) } is exactly im(top)
    QMat stacked = qmat_hcat(W.right, W.bottom);
    const QMat null_st = qmat_nullspace(stacked);
    QMat vpart(W.right.cols(), null_st.cols());
    for (int i = 0; i < W.right.cols(); ++i)
        for (int j = 0; j < null_st.cols(); ++j)
            vpart.at(i, j) = null_st.at(i, j);
    rep.induced_injective = qmat_rank(vpart) == rank_top;
    rep.induced_surjective = qmat_rank(qmat_hcat(W.bottom, W.right)) == W.bottom.rows();
    rep.induced_bijective = rep.induced_injective && rep.induced_surjective;
    return rep;
}

int coker_bottom_dim(const TriangulatedCube& T, const CosetScenario& sc,
                     const std::vector<int>& top_orient, const std::vector<int>& face_orient) {
    validate_scenario(sc);
    const auto [S, Sp] = level_split(sc.E);
    (void)S;
    const BottomLayout L = bottom_layout(T, sc);
    const QMat B = build_bottom(T, sc, Sp, L, top_orient, face_orient);
    return B.rows() - qmat_rank(B);
}

std::pair<int, int> p_new_dims(const CosetScenario& sc) {
    validate_scenario(sc);
    QMat P1(sc.np, sc.n1), P2(sc.np, sc.n1);
    for (int x = 0; x < sc.np; ++x) {
        P1.at(x, sc.deg1[static_cast<size_t>(x)]) = 1;
        P2.at(x, sc.deg2[static_cast<size_t>(x)]) = 1;
    }
    const int quotient = sc.np - qmat_rank(qmat_hcat(P1, P2));
    const int subspace = sc.np - qmat_rank(qmat_vcat(P1.transposed(), P2.transposed()));
    return {quotient, subspace};
}

bool e1_support(int d, int p, int q) {
    if (p > d || p < -d)
        return false;
    if (q < 0)
        return false;
    for (int i = std::max(0, -p); 2 * i <= q; ++i)
        if (p + 2 * i <= d)
            return true;
    return false;
}

std::optional<bool> hecke_equivariant(const CosetScenario& sc) {
    if (!sc.hecke1 || !sc.heckep)
        return std::nullopt;
    const auto& H1 = *sc.hecke1;
    const auto& Hp = *sc.heckep;
    if (static_cast<int>(H1.size()) != sc.n1 || static_cast<int>(Hp.size()) != sc.np)
        throw StrataError("hecke_equivariant: matrix size mismatch");
    QMat Q1(sc.n1, sc.n1), Qp(sc.np, sc.np);
    for (int i = 0; i < sc.n1; ++i)
        for (int j = 0; j < sc.n1; ++j)
            Q1.at(i, j) = H1[static_cast<size_t>(i)][static_cast<size_t>(j)];
    for (int i = 0; i < sc.np; ++i)
        for (int j = 0; j < sc.np; ++j)
            Qp.at(i, j) = Hp[static_cast<size_t>(i)][static_cast<size_t>(j)];
    QMat P1(sc.np, sc.n1), P2(sc.np, sc.n1);
    for (int x = 0; x < sc.np; ++x) {
        P1.at(x, sc.deg1[static_cast<size_t>(x)]) = 1;
        P2.at(x, sc.deg2[static_cast<size_t>(x)]) = 1;
    }
    return qmat_mul(Qp, P1) == qmat_mul(P1, Q1) && qmat_mul(Qp, P2) == qmat_mul(P2, Q1);
}

}  // namespace strata
