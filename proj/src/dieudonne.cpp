#include "strata/dieudonne.hpp"

#include <json.hpp>

#include <algorithm>

#include "strata/rng.hpp"

namespace strata {

namespace {

using Elem = FqField::Elem;
using GrElem = GaloisRing::Elem;

// im of the rank-1 semilinear map x -> A * twist(x); the twist does not move
// the column space.
FqLine map_image_line(const FqField& k, const FqMat2& A) { return fq_mat_image_line(k, A); }

bool line_eq(const FqField& k, const FqLine& a, const FqLine& b) {
    (void)k;
    return a == b;
}

// F-composite at comp(tau): F[sigma^-1 tau] ∘ V[tau] as a plain matrix.
FqMat2 composite_FV(const GradedModule& D, int tau) {
    const auto& k = *D.field;
    const int pre = D.E.sigma_inv(tau);
    // F(V(x)) = F[pre] * frob(V[tau] * frob_inv(x)) = F[pre] * frob(V[tau]) * x
    return fq_mat_mul(k, D.F[static_cast<size_t>(pre)],
                      fq_mat_frob(k, D.V[static_cast<size_t>(tau)]));
}

FqMat2 composite_VF(const GradedModule& D, int tau) {
    const auto& k = *D.field;
    const int post = D.E.sigma(tau);
    // V(F(x)) = V[post] * frob_inv(F[tau] * frob(x)) = V[post] * frob_inv(F[tau]) * x
    return fq_mat_mul(k, D.V[static_cast<size_t>(post)],
                      fq_mat_frob_inv(k, D.F[static_cast<size_t>(tau)]));
}

}  // namespace

std::vector<Violation> validate(const GradedModule& D) {
    std::vector<Violation> out;
    const auto& k = *D.field;
    const int d = D.E.d();
    if (static_cast<int>(D.F.size()) != d || static_cast<int>(D.V.size()) != d) {
        out.push_back({Violation::CharPolyRank, -1, "component count does not match d"});
        return out;
    }
    for (int tau = 0; tau < d; ++tau) {
        if (!fq_mat_is_zero(k, composite_FV(D, tau)))
            out.push_back({Violation::CompositeFV, tau, "F∘V != 0"});
        if (!fq_mat_is_zero(k, composite_VF(D, tau)))
            out.push_back({Violation::CompositeVF, tau, "V∘F != 0"});

        const auto& Ftau = D.F[static_cast<size_t>(tau)];
        const auto& Vin = D.V[static_cast<size_t>(D.E.sigma(tau))];  // lands in comp(tau)
        const auto& Fin = D.F[static_cast<size_t>(D.E.sigma_inv(tau))];
        const auto& Vtau = D.V[static_cast<size_t>(tau)];

        if (fq_mat_rank(k, Vin) != 1) {
            out.push_back({Violation::CharPolyRank, tau, "im V is not one-dimensional"});
            continue;  // the line comparisons below assume rank one
        }
        if (fq_mat_rank(k, Ftau) != 1 || fq_mat_rank(k, Fin) != 1 || fq_mat_rank(k, Vtau) != 1) {
            out.push_back({Violation::CharPolyRank, tau, "F or V is not of rank one"});
            continue;
        }
        // ker F_tau = im V_{sigma tau} inside comp(tau)
        if (!line_eq(k, fq_mat_kernel_line(k, Ftau, 1), map_image_line(k, Vin)))
            out.push_back({Violation::KerFNotImV, tau, "ker F != im V"});
        // ker V_tau = im F_{sigma^-1 tau} inside comp(tau)
        if (!line_eq(k, fq_mat_kernel_line(k, Vtau, -1), map_image_line(k, Fin)))
            out.push_back({Violation::KerVNotImF, tau, "ker V != im F"});
    }
    return out;
}

bool is_valid(const GradedModule& D) { return validate(D).empty(); }

bool hasse_vanishes(const GradedModule& D, int tau) {
    if (!is_valid(D))
        throw InvalidModule("hasse_vanishes: module violates its invariants");
    const auto& k = *D.field;
    const auto vin = map_image_line(k, D.V[static_cast<size_t>(D.E.sigma(tau))]);
    const auto fin = map_image_line(k, D.F[static_cast<size_t>(D.E.sigma_inv(tau))]);
    return line_eq(k, vin, fin);
}

TauSubset stratum_membership(const GradedModule& D) {
    if (!is_valid(D))
        throw InvalidModule("stratum_membership: module violates its invariants");
    TauSubset S;
    const auto& k = *D.field;
    for (int tau = 0; tau < D.E.d(); ++tau) {
        const auto vin = map_image_line(k, D.V[static_cast<size_t>(D.E.sigma(tau))]);
        const auto fin = map_image_line(k, D.F[static_cast<size_t>(D.E.sigma_inv(tau))]);
        if (line_eq(k, vin, fin))
            S = S.with(tau);
    }
    return S;
}

namespace {

void require_compatible(const EmbeddingSet& E, const FqField& k, const char* who) {
    for (int len : E.cycle_lengths())
        if (k.m() % len != 0)
            throw IncompatibleField(std::string(who) +
                                    ": every residue degree must divide the field degree");
}

}  // namespace

GradedModule supersingular_example(const EmbeddingSet& E, const FqField& k) {
    require_compatible(E, k, "supersingular_example");
    GradedModule D{E, std::make_shared<FqField>(k), {}, {}};
    const FqMat2 ss{k.zero(), k.zero(), k.one(), k.zero()};  // e1 -> e2, e2 -> 0
    D.F.assign(static_cast<size_t>(E.d()), ss);
    D.V.assign(static_cast<size_t>(E.d()), ss);
    return D;
}

GradedModule ordinary_example(const EmbeddingSet& E, const FqField& k) {
    require_compatible(E, k, "ordinary_example");
    GradedModule D{E, std::make_shared<FqField>(k), {}, {}};
    const FqMat2 f{k.one(), k.zero(), k.zero(), k.zero()};  // e1 -> e1
    const FqMat2 v{k.zero(), k.zero(), k.zero(), k.one()};  // e2 -> e2
    D.F.assign(static_cast<size_t>(E.d()), f);
    D.V.assign(static_cast<size_t>(E.d()), v);
    return D;
}

GradedModule module_from_lines(const EmbeddingSet& E, const FqField& k,
                               const std::vector<FqLine>& L, const std::vector<FqLine>& M) {
    const int d = E.d();
    if (static_cast<int>(L.size()) != d || static_cast<int>(M.size()) != d)
        throw StrataError("module_from_lines: need one line per embedding");
    GradedModule D{E, std::make_shared<FqField>(k), {}, {}};
    D.F.resize(static_cast<size_t>(d));
    D.V.resize(static_cast<size_t>(d));
    for (int tau = 0; tau < d; ++tau) {
        // F_tau: kernel L[tau], image M[sigma tau].
        const auto& img = M[static_cast<size_t>(E.sigma(tau))];
        const Elem w1 = k.frob(L[static_cast<size_t>(tau)].y);
        const Elem w2 = k.neg(k.frob(L[static_cast<size_t>(tau)].x));
        D.F[static_cast<size_t>(tau)] = {k.mul(img.x, w1), k.mul(img.x, w2), k.mul(img.y, w1),
                                         k.mul(img.y, w2)};
        // V_tau: kernel M[tau], image L[sigma^-1 tau].
        const auto& imgv = L[static_cast<size_t>(E.sigma_inv(tau))];
        const Elem u1 = k.frob_inv(M[static_cast<size_t>(tau)].y);
        const Elem u2 = k.neg(k.frob_inv(M[static_cast<size_t>(tau)].x));
        D.V[static_cast<size_t>(tau)] = {k.mul(imgv.x, u1), k.mul(imgv.x, u2), k.mul(imgv.y, u1),
                                         k.mul(imgv.y, u2)};
    }
    return D;
}

GradedModule random_valid_module(const EmbeddingSet& E, const FqField& k, std::uint64_t seed) {
    SplitMix64 rng(seed);
    const auto elems = k.all_elements();
    const auto random_line = [&] {
        // q+1 lines: (1,t) or (0,1)
        const std::uint64_t i = rng.below(static_cast<std::uint64_t>(k.q()) + 1);
        if (i == static_cast<std::uint64_t>(k.q()))
            return FqLine{k.zero(), k.one()};
        return FqLine{k.one(), elems[static_cast<size_t>(i)]};
    };
    std::vector<FqLine> L, M;
    for (int tau = 0; tau < E.d(); ++tau) {
        L.push_back(random_line());
        M.push_back(random_line());
    }
    auto D = module_from_lines(E, k, L, M);
    // random unit rescalings keep every invariant and exercise the generic case
    for (int tau = 0; tau < E.d(); ++tau) {
        const auto unit = [&] {
            Elem u;
            do {
                u = elems[static_cast<size_t>(rng.below(static_cast<std::uint64_t>(k.q())))];
            } while (k.is_zero(u));
            return u;
        };
        D.F[static_cast<size_t>(tau)] = fq_mat_scale(k, unit(), D.F[static_cast<size_t>(tau)]);
        D.V[static_cast<size_t>(tau)] = fq_mat_scale(k, unit(), D.V[static_cast<size_t>(tau)]);
    }
    return D;
}

/* ------------------------------------------------------------------ */
/* lattices                                                           */
/* ------------------------------------------------------------------ */

void assert_lattice(const DieudonneLattice& L) {
    const auto& R = *L.ring;
    const int d = L.E.d();
    if (static_cast<int>(L.F.size()) != d || static_cast<int>(L.V.size()) != d)
        throw InvalidModule("lattice: component count does not match d");
    const GrMat2 pI = gr_mat_scalar(R, R.from_int(R.p()));
    for (int tau = 0; tau < d; ++tau) {
        const auto& A = L.F[static_cast<size_t>(tau)];
        const auto& B = L.V[static_cast<size_t>(L.E.sigma(tau))];
        if (!gr_mat_eq(R, gr_mat_mul(R, A, gr_mat_frob(R, B)), pI))
            throw InvalidModule("lattice: F∘V != p at component " + std::to_string(tau));
        if (!gr_mat_eq(R, gr_mat_mul(R, B, gr_mat_frob_inv(R, A)), pI))
            throw InvalidModule("lattice: V∘F != p at component " + std::to_string(tau));
    }
}

GradedModule reduce(const DieudonneLattice& L) {
    const auto& R = *L.ring;
    GradedModule D{L.E, std::make_shared<FqField>(R.residue_field()), {}, {}};
    for (int tau = 0; tau < L.E.d(); ++tau) {
        D.F.push_back(gr_mat_to_residue(R, L.F[static_cast<size_t>(tau)]));
        D.V.push_back(gr_mat_to_residue(R, L.V[static_cast<size_t>(tau)]));
    }
    return D;
}

DieudonneLattice supersingular_lattice(const EmbeddingSet& E, const FqField& k, int N) {
    require_compatible(E, k, "supersingular_lattice");
    DieudonneLattice L{E, std::make_shared<GaloisRing>(k, N), {}, {}};
    const auto& R = *L.ring;
    const GrMat2 ss{R.zero(), R.from_int(R.p()), R.one(), R.zero()};  // e1 -> e2, e2 -> p e1
    L.F.assign(static_cast<size_t>(E.d()), ss);
    L.V.assign(static_cast<size_t>(E.d()), ss);
    assert_lattice(L);
    return L;
}

DieudonneLattice canonical_lift(const GradedModule& D, int N) {
    if (!is_valid(D))
        throw InvalidModule("canonical_lift: module violates its invariants");
    const auto& k = *D.field;
    DieudonneLattice L{D.E, std::make_shared<GaloisRing>(k, N), {}, {}};
    const auto& R = *L.ring;
    const int d = D.E.d();
    L.F.resize(static_cast<size_t>(d));
    L.V.resize(static_cast<size_t>(d));
    for (int tau = 0; tau < d; ++tau) {
        const auto& A0 = D.F[static_cast<size_t>(tau)];
        const auto& B0 = D.V[static_cast<size_t>(D.E.sigma(tau))];
        // sigma(B0) = lambda * adj(A0) for a scalar lambda (both rank one with
        // matching image and kernel).
        const FqMat2 sB0 = fq_mat_frob(k, B0);
        const FqMat2 adj0 = fq_mat_adj(k, A0);
        Elem lambda = k.zero();
        {
            const Elem* pairs[4][2] = {{&sB0.a, &adj0.a}, {&sB0.b, &adj0.b},
                                       {&sB0.c, &adj0.c}, {&sB0.d, &adj0.d}};
            for (auto& pr : pairs)
                if (!k.is_zero(*pr[1])) {
                    lambda = k.mul(*pr[0], k.inv(*pr[1]));
                    break;
                }
            if (!fq_mat_eq(k, sB0, fq_mat_scale(k, lambda, adj0)))
                throw InvalidModule("canonical_lift: V is not proportional to adj(F)");
        }
        // Lift A entrywise, then fix det(A) = p * mu with mu = lambda^{-1}
        // by a single-entry correction (which leaves det affine in X).
        GrMat2 A = gr_mat_lift(R, A0);
        const GrElem mu_target = R.inv_unit(R.lift(lambda));
        const GrElem det = gr_mat_det(R, A);
        if (R.val(det) < 1)
            throw InvalidModule("canonical_lift: det of lifted F is a unit");
        const GrElem c = R.divp(det, 1);
        const GrElem delta = R.sub(mu_target, c);
        // tr(adj(A) X) = delta with X supported on one entry (j,i) where
        // adj(A)_{ij} is a unit.
        const GrMat2 adjA = gr_mat_adj(R, A);
        GrMat2 X = gr_mat_zero(R);
        if (R.is_unit(adjA.a))
            X.a = R.mul(delta, R.inv_unit(adjA.a));
        else if (R.is_unit(adjA.b))
            X.c = R.mul(delta, R.inv_unit(adjA.b));
        else if (R.is_unit(adjA.c))
            X.b = R.mul(delta, R.inv_unit(adjA.c));
        else
            X.d = R.mul(delta, R.inv_unit(adjA.d));
        A = gr_mat_add(R, A, gr_mat_scale(R, R.from_int(R.p()), X));
        const GrElem detA = gr_mat_det(R, A);
        const GrElem mu = R.divp(detA, 1);
        if (!R.is_unit(mu) || !(R.sub(mu, mu_target) == R.zero()))
            throw StrataError("canonical_lift: determinant correction failed");
        // sigma(V) = mu^{-1} adj(A) makes both compositions equal p exactly.
        const GrMat2 sV = gr_mat_scale(R, R.inv_unit(mu), gr_mat_adj(R, A));
        L.F[static_cast<size_t>(tau)] = A;
        L.V[static_cast<size_t>(D.E.sigma(tau))] = gr_mat_frob_inv(R, sV);
    }
    assert_lattice(L);
    return L;
}

DieudonneLattice truncate_lattice(const DieudonneLattice& L, int N) {
    if (N > L.ring->N())
        throw StrataError("truncate_lattice: cannot raise precision");
    DieudonneLattice out{L.E, std::make_shared<GaloisRing>(L.ring->residue_field(), N), {}, {}};
    for (int tau = 0; tau < L.E.d(); ++tau) {
        out.F.push_back(gr_mat_truncate(*L.ring, *out.ring, L.F[static_cast<size_t>(tau)]));
        out.V.push_back(gr_mat_truncate(*L.ring, *out.ring, L.V[static_cast<size_t>(tau)]));
    }
    return out;
}

DieudonneLattice apply_basis_change(const DieudonneLattice& L, const std::vector<GrMat2>& g) {
    const auto& R = *L.ring;
    const int d = L.E.d();
    DieudonneLattice out{L.E, L.ring, L.F, L.V};
    for (int tau = 0; tau < d; ++tau) {
        const auto& gt = g[static_cast<size_t>(tau)];
        if (!R.is_unit(gr_mat_det(R, gt)))
            throw StrataError("apply_basis_change: determinant is not a unit");
    }
    for (int tau = 0; tau < d; ++tau) {
        const int st = L.E.sigma(tau);
        const auto& gs = g[static_cast<size_t>(st)];
        const GrMat2 gs_inv =
            gr_mat_scale(R, R.inv_unit(gr_mat_det(R, gs)), gr_mat_adj(R, gs));
        out.F[static_cast<size_t>(tau)] = gr_mat_mul(
            R, gs_inv,
            gr_mat_mul(R, L.F[static_cast<size_t>(tau)], gr_mat_frob(R, g[static_cast<size_t>(tau)])));
        const int pt = L.E.sigma_inv(tau);
        const auto& gp = g[static_cast<size_t>(pt)];
        const GrMat2 gp_inv =
            gr_mat_scale(R, R.inv_unit(gr_mat_det(R, gp)), gr_mat_adj(R, gp));
        out.V[static_cast<size_t>(tau)] = gr_mat_mul(
            R, gp_inv,
            gr_mat_mul(R, L.V[static_cast<size_t>(tau)],
                       gr_mat_frob_inv(R, g[static_cast<size_t>(tau)])));
    }
    assert_lattice(out);
    return out;
}

std::vector<int> lie_ranks(const DieudonneLattice& L) {
    const auto& R = *L.ring;
    const int N = R.N();
    std::vector<int> out;
    for (int tau = 0; tau < L.E.d(); ++tau) {
        const int st = L.E.sigma(tau);
        int vV = R.val(gr_mat_det(R, L.V[static_cast<size_t>(st)]));
        if (vV >= N) {
            // invisible at this precision; recover from det F * sigma(det V) = p^2
            const int vF = R.val(gr_mat_det(R, L.F[static_cast<size_t>(tau)]));
            if (vF >= N)
                throw StrataError("lie_ranks: precision too low to resolve valuations");
            vV = 2 - vF;
        }
        if (vV > 2)
            throw StrataError("lie_ranks: determinant valuation out of range");
        out.push_back(2 - vV);
    }
    return out;
}

/* ------------------------------------------------------------------ */
/* sublattices                                                        */
/* ------------------------------------------------------------------ */

namespace {

struct Shape {
    GrMat2 T;        // inclusion matrix in the old ring
    GrMat2 core;     // T with any scalar p factor removed
    int scalar_pow;  // 1 when T = p * core (Zero case), else 0
    int core_val;    // v_p(det core): 0 (Full/Zero) or 1 (Line)
};

Shape shape_of(const GaloisRing& R, const SubSpec& s) {
    Shape sh;
    switch (s.kind) {
        case SubSpec::Full:
            sh.T = gr_mat_identity(R);
            sh.core = sh.T;
            sh.scalar_pow = 0;
            sh.core_val = 0;
            break;
        case SubSpec::Zero:
            sh.T = gr_mat_scalar(R, R.from_int(R.p()));
            sh.core = gr_mat_identity(R);
            sh.scalar_pow = 1;
            sh.core_val = 0;
            break;
        case SubSpec::Line: {
            // columns: a lift of the line generator and p times a complement
            const auto& k = R.residue_field();
            const GrElem mx = R.lift(s.line.x), my = R.lift(s.line.y);
            GrElem wx, wy;
            if (!k.is_zero(s.line.x)) {
                wx = R.zero();
                wy = R.one();
            } else {
                wx = R.one();
                wy = R.zero();
            }
            sh.T = {mx, R.scale(R.p(), wx), my, R.scale(R.p(), wy)};
            sh.core = sh.T;
            sh.scalar_pow = 0;
            sh.core_val = 1;
            break;
        }
    }
    return sh;
}

// X = T_dst^{-1} * M * twist(T_src), with p powers cancelled symbolically.
// Returns the numerator at full precision together with the exact power of p
// still to divide by; 'drop' is how many digits the division costs.
GrMat2 conjugate_step(const GaloisRing& R, const Shape& dst, const GrMat2& M, const GrMat2& src_tw,
                      int src_scalar_pow, int& drop) {
    const GrElem det_core = gr_mat_det(R, dst.core);
    const int v = dst.core_val;
    GrElem unit = det_core;
    if (v == 1)
        unit = R.divp(det_core, 1);
    if (!R.is_unit(unit))
        throw StrataError("conjugate_step: inclusion determinant has unexpected valuation");
    GrMat2 num = gr_mat_mul(R, gr_mat_adj(R, dst.core), gr_mat_mul(R, M, src_tw));
    num = gr_mat_scale(R, R.inv_unit(unit), num);
    const int e = src_scalar_pow - dst.scalar_pow - v;
    if (e >= 0) {
        drop = 0;
        GrElem pe = R.one();
        for (int i = 0; i < e; ++i)
            pe = R.scale(R.p(), pe);
        return gr_mat_scale(R, pe, num);
    }
    drop = -e;
    const auto try_div = [&](const GrElem& x) {
        if (R.val(x) < drop)
            throw NotInStratum("sublattice: prescribed lines are not F,V-stable");
        return R.divp(x, drop);
    };
    return {try_div(num.a), try_div(num.b), try_div(num.c), try_div(num.d)};
}

}  // namespace

SublatticeResult preimage_sublattice(const DieudonneLattice& L, const std::vector<SubSpec>& spec) {
    const auto& R = *L.ring;
    const int d = L.E.d();
    if (static_cast<int>(spec.size()) != d)
        throw StrataError("preimage_sublattice: need one spec per component");

    std::vector<Shape> shapes;
    shapes.reserve(static_cast<size_t>(d));
    for (const auto& s : spec)
        shapes.push_back(shape_of(R, s));

    std::vector<GrMat2> newF(static_cast<size_t>(d)), newV(static_cast<size_t>(d));
    int max_drop = 0;
    for (int tau = 0; tau < d; ++tau) {
        int drop = 0;
        {
            const int st = L.E.sigma(tau);
            const auto& src = shapes[static_cast<size_t>(tau)];
            const GrMat2 src_tw = gr_mat_frob(R, src.core);
            newF[static_cast<size_t>(tau)] =
                conjugate_step(R, shapes[static_cast<size_t>(st)], L.F[static_cast<size_t>(tau)],
                               src_tw, src.scalar_pow, drop);
            max_drop = std::max(max_drop, drop);
        }
        {
            const int pt = L.E.sigma_inv(tau);
            const auto& src = shapes[static_cast<size_t>(tau)];
            const GrMat2 src_tw = gr_mat_frob_inv(R, src.core);
            newV[static_cast<size_t>(tau)] =
                conjugate_step(R, shapes[static_cast<size_t>(pt)], L.V[static_cast<size_t>(tau)],
                               src_tw, src.scalar_pow, drop);
            max_drop = std::max(max_drop, drop);
        }
    }
    const int newN = R.N() - max_drop;
    if (newN < 1)
        throw StrataError("preimage_sublattice: precision exhausted; lift at higher N");

    SublatticeResult out{DieudonneLattice{L.E,
                                          std::make_shared<GaloisRing>(R.residue_field(), newN),
                                          {},
                                          {}},
                         {}};
    for (int tau = 0; tau < d; ++tau) {
        out.lattice.F.push_back(gr_mat_truncate(R, *out.lattice.ring, newF[static_cast<size_t>(tau)]));
        out.lattice.V.push_back(gr_mat_truncate(R, *out.lattice.ring, newV[static_cast<size_t>(tau)]));
        out.inclusion.push_back(shapes[static_cast<size_t>(tau)].T);
    }
    assert_lattice(out.lattice);
    return out;
}

/* ------------------------------------------------------------------ */
/* witness submodule                                                  */
/* ------------------------------------------------------------------ */

WitnessSubmodule witness_submodule(const GradedModule& D, TauSubset S) {
    if (!is_valid(D))
        throw InvalidModule("witness_submodule: module violates its invariants");
    if (!is_sparse(D.E, S))
        throw NotSparse("witness_submodule: S is not sparse");
    const TauSubset stratum = stratum_membership(D);
    if ((S & stratum) != S)
        throw NotInStratum("witness_submodule: S is not contained in the stratum of D");

    const auto& k = *D.field;
    const int d = D.E.d();
    WitnessSubmodule out;
    out.lines.assign(static_cast<size_t>(d), std::nullopt);
    for (int tau : S.indices())
        out.lines[static_cast<size_t>(tau)] =
            map_image_line(k, D.V[static_cast<size_t>(D.E.sigma(tau))]);

    // F,V stability of M, checked directly on the mod-p data.
    const auto line_of = [&](int tau) { return out.lines[static_cast<size_t>(tau)]; };
    const auto image_under = [&](const FqMat2& A, const FqLine& l, bool freb) -> std::optional<FqLine> {
        const Elem gx = freb ? k.frob(l.x) : k.frob_inv(l.x);
        const Elem gy = freb ? k.frob(l.y) : k.frob_inv(l.y);
        const Elem ix = k.add(k.mul(A.a, gx), k.mul(A.b, gy));
        const Elem iy = k.add(k.mul(A.c, gx), k.mul(A.d, gy));
        if (k.is_zero(ix) && k.is_zero(iy))
            return std::nullopt;  // image is zero, contained in anything
        return fq_line_through(k, ix, iy);
    };
    for (int tau = 0; tau < d; ++tau) {
        const auto target_F = line_of(D.E.sigma(tau));
        if (target_F) {
            const auto img = line_of(tau)
                                 ? image_under(D.F[static_cast<size_t>(tau)], *line_of(tau), true)
                                 : std::optional<FqLine>(
                                       map_image_line(k, D.F[static_cast<size_t>(tau)]));
            if (img && !line_eq(k, *img, *target_F))
                throw NotInStratum("witness_submodule: M is not F-stable");
        }
        const auto target_V = line_of(D.E.sigma_inv(tau));
        if (target_V) {
            const auto img = line_of(tau)
                                 ? image_under(D.V[static_cast<size_t>(tau)], *line_of(tau), false)
                                 : std::optional<FqLine>(
                                       map_image_line(k, D.V[static_cast<size_t>(tau)]));
            if (img && !line_eq(k, *img, *target_V))
                throw NotInStratum("witness_submodule: M is not V-stable");
        }
    }

    // Quotient Lie ranks from an honest truncated-lattice computation.
    const DieudonneLattice lift = canonical_lift(D, 3);
    std::vector<SubSpec> spec;
    for (int tau = 0; tau < d; ++tau)
        spec.push_back(out.lines[static_cast<size_t>(tau)]
                           ? SubSpec::of_line(*out.lines[static_cast<size_t>(tau)])
                           : SubSpec::full());
    const auto sub = preimage_sublattice(lift, spec);
    out.quotient_ranks = lie_ranks(sub.lattice);
    return out;
}

/* ------------------------------------------------------------------ */
/* level structure datum                                              */
/* ------------------------------------------------------------------ */

namespace {

void check_level_split(const EmbeddingSet& E, TauSubset S, TauSubset Sp) {
    if ((S & Sp).size() != 0 || (S | Sp) != TauSubset::full(E.d()))
        throw PreconditionViolated("gamma0: S and S' must be disjoint and covering");
    TauSubset sigmaS;
    for (int tau : S.indices())
        sigmaS = sigmaS.with(E.sigma(tau));
    if (sigmaS != Sp)
        throw PreconditionViolated("gamma0: S' must equal sigma(S)");
}

// Preimage of a residue subspace (zero or a line) under the mod-p reduction
// of T; must be a line.
FqLine preimage_line(const FqField& k, const FqMat2& Tp, const std::optional<FqLine>& target) {
    // Row w with w*z = 0 iff z lies in the target (zero space: two rows).
    std::vector<std::pair<Elem, Elem>> rows;
    if (target) {
        rows.push_back({target->y, k.neg(target->x)});
    } else {
        rows.push_back({k.one(), k.zero()});
        rows.push_back({k.zero(), k.one()});
    }
    // Solve (w * Tp) x = 0 for all rows.
    std::vector<std::pair<Elem, Elem>> eqs;
    for (const auto& [w1, w2] : rows) {
        const Elem r1 = k.add(k.mul(w1, Tp.a), k.mul(w2, Tp.c));
        const Elem r2 = k.add(k.mul(w1, Tp.b), k.mul(w2, Tp.d));
        if (!k.is_zero(r1) || !k.is_zero(r2))
            eqs.push_back({r1, r2});
    }
    if (eqs.empty())
        throw PreconditionViolated("gamma0: level preimage is two-dimensional");
    // intersect kernels of 1x2 rows; all must agree on one line
    FqLine sol = k.is_zero(eqs[0].first) && k.is_zero(eqs[0].second)
                     ? FqLine{k.one(), k.zero()}
                     : fq_line_through(k, k.neg(eqs[0].second), eqs[0].first);
    for (const auto& [r1, r2] : eqs) {
        const Elem dot = k.add(k.mul(r1, sol.x), k.mul(r2, sol.y));
        if (!k.is_zero(dot))
            throw PreconditionViolated("gamma0: level preimage is not a line");
    }
    return sol;
}

}  // namespace

Gamma0Datum gamma0_forward(const DieudonneLattice& A, TauSubset S, TauSubset Sp) {
    check_level_split(A.E, S, Sp);
    assert_lattice(A);
    const GradedModule D = reduce(A);
    if (!is_valid(D))
        throw NotInDeepStratum("gamma0_forward: reduction is not a point of X");
    if (stratum_membership(D) != TauSubset::full(A.E.d()))
        throw NotInDeepStratum("gamma0_forward: reduction does not lie in the deepest stratum");

    const auto& k = *D.field;
    const int d = A.E.d();

    // A -> A': witness quotient along S.
    std::vector<SubSpec> wit;
    for (int tau = 0; tau < d; ++tau)
        wit.push_back(S.contains(tau)
                          ? SubSpec::of_line(map_image_line(
                                k, D.V[static_cast<size_t>(A.E.sigma(tau))]))
                          : SubSpec::full());
    auto sub1 = preimage_sublattice(A, wit);

    // Level submodule M_A downstairs: zero on S, the Lie* line on S'.
    std::vector<std::optional<FqLine>> M_A(static_cast<size_t>(d), std::nullopt);
    for (int tau : Sp.indices())
        M_A[static_cast<size_t>(tau)] =
            map_image_line(k, D.V[static_cast<size_t>(A.E.sigma(tau))]);

    // M_{A'} = preimage of M_A under the reduction of the inclusion.
    std::vector<FqLine> level(static_cast<size_t>(d), FqLine{});
    for (int tau = 0; tau < d; ++tau) {
        const FqMat2 Tp = gr_mat_to_residue(*A.ring, sub1.inclusion[static_cast<size_t>(tau)]);
        level[static_cast<size_t>(tau)] = preimage_line(k, Tp, M_A[static_cast<size_t>(tau)]);
    }

    // A' -> B along the level lines.
    std::vector<SubSpec> lev;
    for (int tau = 0; tau < d; ++tau)
        lev.push_back(SubSpec::of_line(level[static_cast<size_t>(tau)]));
    auto sub2 = preimage_sublattice(sub1.lattice, lev);

    Gamma0Datum datum{std::move(sub1.lattice), std::move(sub2.lattice), std::move(sub2.inclusion),
                      std::move(level)};

    // cokernel of phi is free of rank one per component
    const auto& Rp = *datum.A_prime.ring;
    for (int tau = 0; tau < d; ++tau) {
        const auto& phi = datum.phi[static_cast<size_t>(tau)];
        if (Rp.val(gr_mat_det(Rp, phi)) != 1 ||
            fq_mat_is_zero(k, gr_mat_to_residue(Rp, phi)))
            throw StrataError("gamma0_forward: cokernel of phi is not of rank one");
    }
    return datum;
}

DieudonneLattice gamma0_inverse(const Gamma0Datum& datum, TauSubset S, TauSubset Sp) {
    const auto& Ap = datum.A_prime;
    check_level_split(Ap.E, S, Sp);
    const int d = Ap.E.d();
    try {
        assert_lattice(Ap);
        assert_lattice(datum.B);
    } catch (const InvalidModule& e) {
        throw InvalidDatum(e.what());
    }
    if (static_cast<int>(datum.phi.size()) != d)
        throw InvalidDatum("gamma0_inverse: wrong phi arity");

    const auto& R = *Ap.ring;
    const auto& k = R.residue_field();

    // phi must intertwine F and V at the precision of B.
    {
        const auto& RB = *datum.B.ring;
        const DieudonneLattice ApB = truncate_lattice(Ap, RB.N());
        for (int tau = 0; tau < d; ++tau) {
            const int st = Ap.E.sigma(tau);
            const GrMat2 phi_t = gr_mat_truncate(R, RB, datum.phi[static_cast<size_t>(tau)]);
            const GrMat2 phi_st = gr_mat_truncate(R, RB, datum.phi[static_cast<size_t>(st)]);
            const GrMat2 lhs =
                gr_mat_mul(RB, ApB.F[static_cast<size_t>(tau)], gr_mat_frob(RB, phi_t));
            const GrMat2 rhs = gr_mat_mul(RB, phi_st, datum.B.F[static_cast<size_t>(tau)]);
            if (!gr_mat_eq(RB, lhs, rhs))
                throw InvalidDatum("gamma0_inverse: phi does not intertwine F");
        }
    }

    // L = phi(D(B)) mod p on S, zero on S'.
    std::vector<SubSpec> spec(static_cast<size_t>(d), SubSpec::zero());
    for (int tau : S.indices()) {
        const FqMat2 phi_p = gr_mat_to_residue(R, datum.phi[static_cast<size_t>(tau)]);
        if (fq_mat_rank(k, phi_p) != 1)
            throw InvalidDatum("gamma0_inverse: phi mod p is not of rank one");
        spec[static_cast<size_t>(tau)] = SubSpec::of_line(fq_mat_image_line(k, phi_p));
    }

    DieudonneLattice rec{Ap.E, Ap.ring, {}, {}};
    try {
        rec = preimage_sublattice(Ap, spec).lattice;
    } catch (const NotInStratum& e) {
        throw InvalidDatum(std::string("gamma0_inverse: ") + e.what());
    }

    const GradedModule Dr = reduce(rec);
    if (!is_valid(Dr) || stratum_membership(Dr) != TauSubset::full(d))
        throw InvalidDatum("gamma0_inverse: recovered module is not in the deepest stratum");
    return rec;
}

/* ------------------------------------------------------------------ */
/* isomorphism testing                                                */
/* ------------------------------------------------------------------ */

namespace {

// Kernel of an integer matrix over Z/p^N via Howell-style elimination.
std::vector<std::vector<long>> zmod_kernel(std::vector<std::vector<long>> M, int ncols, long p,
                                           int N) {
    long q = 1;
    for (int i = 0; i < N; ++i)
        q *= p;
    const auto norm = [&](long v) { return ((v % q) + q) % q; };
    const auto val = [&](long v) {
        v = norm(v);
        if (v == 0)
            return N;
        int k = 0;
        while (v % p == 0) {
            v /= p;
            ++k;
        }
        return k;
    };
    // unit inverse mod q by extended power trick (p odd or 2; q small)
    const auto inv_unit = [&](long v) {
        v = norm(v);
        long r = 1, base = v;
        // Euler phi(q) = q - q/p
        long e = q - q / p - 1;
        while (e > 0) {
            if (e & 1)
                r = (r * base) % q;
            base = (base * base) % q;
            e >>= 1;
        }
        return r;
    };

    // Augment: rows of [M^T | I]; row-reduce the left block.
    const int nrows_a = static_cast<int>(M.size());  // number of equations
    (void)nrows_a;
    std::vector<std::vector<long>> rows;
    {
        // A = M^T: one row per unknown
        for (int i = 0; i < ncols; ++i) {
            std::vector<long> r(M.size() + static_cast<size_t>(ncols), 0);
            for (size_t e = 0; e < M.size(); ++e)
                r[e] = norm(M[e][static_cast<size_t>(i)]);
            r[M.size() + static_cast<size_t>(i)] = 1;
            rows.push_back(std::move(r));
        }
    }
    const size_t acols = M.size();
    std::vector<std::vector<long>> done;
    for (size_t col = 0; col < acols; ++col) {
        int best = -1, bestval = N;
        for (size_t i = 0; i < rows.size(); ++i) {
            const int v = val(rows[i][col]);
            if (v < bestval) {
                bestval = v;
                best = static_cast<int>(i);
            }
        }
        if (best < 0 || bestval >= N)
            continue;
        std::vector<long> piv = std::move(rows[static_cast<size_t>(best)]);
        rows.erase(rows.begin() + best);
        // normalize pivot: entry = p^v
        long pv = 1;
        for (int i = 0; i < bestval; ++i)
            pv *= p;
        const long u = inv_unit(piv[col] / pv);
        for (auto& x : piv)
            x = (x * u) % q;
        for (auto& r : rows) {
            if (r[col] % pv != 0)
                continue;  // cannot happen: pivot has minimal valuation
            const long f = norm(r[col] / pv);
            if (f == 0)
                continue;
            for (size_t j = 0; j < r.size(); ++j)
                r[j] = norm(r[j] - f * piv[j]);
        }
        if (bestval > 0) {
            // torsion companion row: p^(N-v) * pivot
            long pc = 1;
            for (int i = 0; i < N - bestval; ++i)
                pc *= p;
            std::vector<long> extra(piv.size());
            for (size_t j = 0; j < piv.size(); ++j)
                extra[j] = (piv[j] * pc) % q;
            rows.push_back(std::move(extra));
        }
        done.push_back(std::move(piv));
    }
    // Remaining rows vanish on the A block: their right halves span the kernel.
    std::vector<std::vector<long>> kernel;
    for (const auto& r : rows) {
        bool zero = true;
        for (size_t j = 0; j < acols; ++j)
            if (norm(r[j]) != 0) {
                zero = false;
                break;
            }
        if (!zero)
            continue;
        std::vector<long> g(r.begin() + static_cast<long>(acols), r.end());
        bool nz = false;
        for (long v : g)
            if (norm(v) != 0)
                nz = true;
        if (nz)
            kernel.push_back(std::move(g));
    }
    return kernel;
}

struct IntertwinerProblem {
    // scalar unknowns: for each lattice-pair component and matrix entry, m
    // coefficients; equations as integer rows mod p^N
    std::vector<std::vector<long>> eqs;
    int nunknowns = 0;
};

// index of unknown coefficient: component tau, entry e in 0..3 (row major), digit c
int unknown_index(int tau, int e, int c, int m) { return (tau * 4 + e) * m + c; }

// Regular representation of multiplication by a, as columns on coefficient vectors.
std::vector<std::vector<long>> reg_rep(const GaloisRing& R, const GrElem& a) {
    const int m = R.m();
    std::vector<std::vector<long>> cols;
    for (int j = 0; j < m; ++j) {
        GrElem basis = R.zero();
        basis[static_cast<size_t>(j)] = 1;
        cols.push_back(R.mul(a, basis));
    }
    return cols;  // cols[j][i]
}

std::vector<std::vector<long>> frob_rep(const GaloisRing& R, bool inverse) {
    const int m = R.m();
    std::vector<std::vector<long>> cols;
    for (int j = 0; j < m; ++j) {
        GrElem basis = R.zero();
        basis[static_cast<size_t>(j)] = 1;
        cols.push_back(inverse ? R.frob_inv(basis) : R.frob(basis));
    }
    return cols;
}

// Append the m scalar equations of: sum over components of
//   g[dst_tau] * L[k][j]-column-combination  -  Rmat * twist(g[src_tau]) = 0
// for the (i,j) entry of (g_dst * M1 - M2 * twist(g_src)).
void append_intertwine(IntertwinerProblem& prob, const GaloisRing& R, int dst_tau,
                       const GrMat2& M1, int src_tau, const GrMat2& M2, bool inv_twist) {
    const int m = R.m();
    const auto fr = frob_rep(R, inv_twist);
    const GrElem* m1[2][2] = {{&M1.a, &M1.b}, {&M1.c, &M1.d}};
    const GrElem* m2[2][2] = {{&M2.a, &M2.b}, {&M2.c, &M2.d}};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int digit = 0; digit < m; ++digit) {
                std::vector<long> row(static_cast<size_t>(prob.nunknowns), 0);
                // + sum_k g_dst[i][k] * M1[k][j]
                for (int kk = 0; kk < 2; ++kk) {
                    const auto rep = reg_rep(R, *m1[kk][j]);
                    for (int c = 0; c < m; ++c)
                        row[static_cast<size_t>(unknown_index(dst_tau, i * 2 + kk, c, m))] +=
                            rep[static_cast<size_t>(c)][static_cast<size_t>(digit)];
                }
                // - sum_k M2[i][k] * twist(g_src[k][j])
                for (int kk = 0; kk < 2; ++kk) {
                    const auto rep = reg_rep(R, *m2[i][kk]);
                    // composite: rep * frob acting on the coefficient vector
                    for (int c = 0; c < m; ++c) {
                        long acc = 0;
                        for (int t = 0; t < m; ++t)
                            acc += rep[static_cast<size_t>(t)][static_cast<size_t>(digit)] *
                                   fr[static_cast<size_t>(c)][static_cast<size_t>(t)];
                        row[static_cast<size_t>(unknown_index(src_tau, kk * 2 + j, c, m))] -= acc;
                    }
                }
                prob.eqs.push_back(std::move(row));
            }
        }
    }
}

IsoResult search_units(const GaloisRing& R, const std::vector<std::vector<long>>& kernel,
                       int ncomponents, std::uint64_t seed, int tries,
                       const std::function<bool(const std::vector<GrMat2>&)>& accept) {
    if (kernel.empty())
        return IsoResult::NoSolution;
    const int m = R.m();
    const long q = R.pN();
    SplitMix64 rng(seed);
    for (int t = 0; t < tries; ++t) {
        std::vector<long> sol(static_cast<size_t>(ncomponents * 4 * m), 0);
        for (const auto& g : kernel) {
            const long c = static_cast<long>(rng.below(static_cast<std::uint64_t>(q)));
            for (size_t i = 0; i < sol.size(); ++i)
                sol[i] = (sol[i] + c * g[i]) % q;
        }
        std::vector<GrMat2> gs;
        bool all_units = true;
        for (int tau = 0; tau < ncomponents && all_units; ++tau) {
            GrMat2 g = gr_mat_zero(R);
            GrElem* entries[4] = {&g.a, &g.b, &g.c, &g.d};
            for (int e = 0; e < 4; ++e)
                for (int c = 0; c < m; ++c)
                    (*entries[e])[static_cast<size_t>(c)] =
                        sol[static_cast<size_t>(unknown_index(tau, e, c, m))];
            if (!R.is_unit(gr_mat_det(R, g)))
                all_units = false;
            gs.push_back(std::move(g));
        }
        if (all_units && accept(gs))
            return IsoResult::Isomorphic;
    }
    return IsoResult::NoUnitFound;
}

}  // namespace

IsoResult lattice_isomorphic(const DieudonneLattice& A, const DieudonneLattice& B,
                             std::uint64_t seed, int tries) {
    if (!(A.E == B.E))
        return IsoResult::NoSolution;
    if (!(A.ring->residue_field() == B.ring->residue_field()))
        return IsoResult::NoSolution;
    const int N = std::min(A.ring->N(), B.ring->N());
    const DieudonneLattice A1 = truncate_lattice(A, N);
    const DieudonneLattice B1 = truncate_lattice(B, N);
    const auto& R = *A1.ring;
    const int d = A1.E.d(), m = R.m();

    IntertwinerProblem prob;
    prob.nunknowns = d * 4 * m;
    for (int tau = 0; tau < d; ++tau) {
        append_intertwine(prob, R, A1.E.sigma(tau), A1.F[static_cast<size_t>(tau)], tau,
                          B1.F[static_cast<size_t>(tau)], false);
        append_intertwine(prob, R, A1.E.sigma_inv(tau), A1.V[static_cast<size_t>(tau)], tau,
                          B1.V[static_cast<size_t>(tau)], true);
    }
    const auto kernel = zmod_kernel(prob.eqs, prob.nunknowns, R.p(), N);
    return search_units(R, kernel, d, seed, tries, [&](const std::vector<GrMat2>& g) {
        // certificate check: g intertwines exactly
        for (int tau = 0; tau < d; ++tau) {
            const GrMat2 lhs = gr_mat_mul(R, g[static_cast<size_t>(A1.E.sigma(tau))],
                                          A1.F[static_cast<size_t>(tau)]);
            const GrMat2 rhs = gr_mat_mul(R, B1.F[static_cast<size_t>(tau)],
                                          gr_mat_frob(R, g[static_cast<size_t>(tau)]));
            if (!gr_mat_eq(R, lhs, rhs))
                return false;
            const GrMat2 lv = gr_mat_mul(R, g[static_cast<size_t>(A1.E.sigma_inv(tau))],
                                         A1.V[static_cast<size_t>(tau)]);
            const GrMat2 rv = gr_mat_mul(R, B1.V[static_cast<size_t>(tau)],
                                         gr_mat_frob_inv(R, g[static_cast<size_t>(tau)]));
            if (!gr_mat_eq(R, lv, rv))
                return false;
        }
        return true;
    });
}

IsoResult datum_isomorphic(const Gamma0Datum& a, const Gamma0Datum& b, std::uint64_t seed,
                           int tries) {
    if (!(a.A_prime.E == b.A_prime.E))
        return IsoResult::NoSolution;
    const int N = std::min(std::min(a.A_prime.ring->N(), b.A_prime.ring->N()),
                           std::min(a.B.ring->N(), b.B.ring->N()));
    const DieudonneLattice Apa = truncate_lattice(a.A_prime, N), Apb = truncate_lattice(b.A_prime, N);
    const DieudonneLattice Ba = truncate_lattice(a.B, N), Bb = truncate_lattice(b.B, N);
    const auto& R = *Apa.ring;
    const int d = Apa.E.d(), m = R.m();

    // unknowns: gA' on components [0,d), gB on components [d,2d)
    IntertwinerProblem prob;
    prob.nunknowns = 2 * d * 4 * m;
    for (int tau = 0; tau < d; ++tau) {
        append_intertwine(prob, R, Apa.E.sigma(tau), Apa.F[static_cast<size_t>(tau)], tau,
                          Apb.F[static_cast<size_t>(tau)], false);
        append_intertwine(prob, R, Apa.E.sigma_inv(tau), Apa.V[static_cast<size_t>(tau)], tau,
                          Apb.V[static_cast<size_t>(tau)], true);
        append_intertwine(prob, R, d + Ba.E.sigma(tau), Ba.F[static_cast<size_t>(tau)], d + tau,
                          Bb.F[static_cast<size_t>(tau)], false);
        append_intertwine(prob, R, d + Ba.E.sigma_inv(tau), Ba.V[static_cast<size_t>(tau)],
                          d + tau, Bb.V[static_cast<size_t>(tau)], true);
    }
    // phi equivariance: gA'[tau] * phi_a[tau] = phi_b[tau] * gB[tau] (no twist)
    std::vector<GrMat2> phia, phib;
    for (int tau = 0; tau < d; ++tau) {
        phia.push_back(gr_mat_truncate(*a.A_prime.ring, R, a.phi[static_cast<size_t>(tau)]));
        phib.push_back(gr_mat_truncate(*b.A_prime.ring, R, b.phi[static_cast<size_t>(tau)]));
    }
    for (int tau = 0; tau < d; ++tau) {
        // reuse append_intertwine with an identity twist by treating frob as
        // absent: build rows manually via a zero-twist variant.
        const int m_ = m;
        const GrMat2& M1 = phia[static_cast<size_t>(tau)];
        const GrMat2& M2 = phib[static_cast<size_t>(tau)];
        const GrElem* m1[2][2] = {{&M1.a, &M1.b}, {&M1.c, &M1.d}};
        const GrElem* m2[2][2] = {{&M2.a, &M2.b}, {&M2.c, &M2.d}};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int digit = 0; digit < m_; ++digit) {
                    std::vector<long> row(static_cast<size_t>(prob.nunknowns), 0);
                    for (int kk = 0; kk < 2; ++kk) {
                        const auto rep = reg_rep(R, *m1[kk][j]);
                        for (int c = 0; c < m_; ++c)
                            row[static_cast<size_t>(unknown_index(tau, i * 2 + kk, c, m_))] +=
                                rep[static_cast<size_t>(c)][static_cast<size_t>(digit)];
                        const auto rep2 = reg_rep(R, *m2[i][kk]);
                        for (int c = 0; c < m_; ++c)
                            row[static_cast<size_t>(unknown_index(d + tau, kk * 2 + j, c, m_))] -=
                                rep2[static_cast<size_t>(c)][static_cast<size_t>(digit)];
                    }
                    prob.eqs.push_back(std::move(row));
                }
    }
    const auto kernel = zmod_kernel(prob.eqs, prob.nunknowns, R.p(), N);
    return search_units(R, kernel, 2 * d, seed, tries, [&](const std::vector<GrMat2>& g) {
        for (int tau = 0; tau < d; ++tau) {
            const GrMat2 lhs = gr_mat_mul(R, g[static_cast<size_t>(tau)], phia[static_cast<size_t>(tau)]);
            const GrMat2 rhs = gr_mat_mul(R, phib[static_cast<size_t>(tau)],
                                          g[static_cast<size_t>(d + tau)]);
            if (!gr_mat_eq(R, lhs, rhs))
                return false;
        }
        return true;
    });
}

/* ------------------------------------------------------------------ */
/* serialization                                                      */
/* ------------------------------------------------------------------ */

namespace {

using json = nlohmann::ordered_json;

json mat_to_json(const FqMat2& A) { return json::array({A.a, A.b, A.c, A.d}); }
json mat_to_json(const GrMat2& A) { return json::array({A.a, A.b, A.c, A.d}); }

FqMat2 fq_mat_from_json(const json& j) {
    return {j.at(0).get<Elem>(), j.at(1).get<Elem>(), j.at(2).get<Elem>(), j.at(3).get<Elem>()};
}

GrMat2 gr_mat_from_json(const json& j) {
    return {j.at(0).get<GrElem>(), j.at(1).get<GrElem>(), j.at(2).get<GrElem>(),
            j.at(3).get<GrElem>()};
}

}  // namespace

std::string graded_module_to_json(const GradedModule& D) {
    json j;
    j["p"] = D.field->p();
    j["m"] = D.field->m();
    j["modulus"] = D.field->modulus();
    j["d"] = D.E.d();
    j["sigma"] = D.E.sigma();
    json F = json::array(), V = json::array();
    for (int tau = 0; tau < D.E.d(); ++tau) {
        F.push_back(mat_to_json(D.F[static_cast<size_t>(tau)]));
        V.push_back(mat_to_json(D.V[static_cast<size_t>(tau)]));
    }
    j["F"] = std::move(F);
    j["V"] = std::move(V);
    return j.dump();
}

GradedModule graded_module_from_json(const std::string& text) {
    const json j = json::parse(text);
    const FqField k(j.at("p").get<long>(), j.at("modulus").get<std::vector<long>>());
    EmbeddingSet E(j.at("d").get<int>(), j.at("sigma").get<std::vector<int>>());
    GradedModule D{std::move(E), std::make_shared<FqField>(k), {}, {}};
    for (const auto& mj : j.at("F"))
        D.F.push_back(fq_mat_from_json(mj));
    for (const auto& mj : j.at("V"))
        D.V.push_back(fq_mat_from_json(mj));
    return D;
}

std::string lattice_to_json(const DieudonneLattice& L) {
    json j;
    j["p"] = L.ring->p();
    j["N"] = L.ring->N();
    j["m"] = L.ring->m();
    j["modulus"] = L.ring->residue_field().modulus();
    j["d"] = L.E.d();
    j["sigma"] = L.E.sigma();
    json F = json::array(), V = json::array();
    for (int tau = 0; tau < L.E.d(); ++tau) {
        F.push_back(mat_to_json(L.F[static_cast<size_t>(tau)]));
        V.push_back(mat_to_json(L.V[static_cast<size_t>(tau)]));
    }
    j["F"] = std::move(F);
    j["V"] = std::move(V);
    return j.dump();
}

DieudonneLattice lattice_from_json(const std::string& text) {
    const json j = json::parse(text);
    const FqField k(j.at("p").get<long>(), j.at("modulus").get<std::vector<long>>());
    EmbeddingSet E(j.at("d").get<int>(), j.at("sigma").get<std::vector<int>>());
    DieudonneLattice L{std::move(E),
                       std::make_shared<GaloisRing>(k, j.at("N").get<int>()),
                       {},
                       {}};
    for (const auto& mj : j.at("F"))
        L.F.push_back(gr_mat_from_json(mj));
    for (const auto& mj : j.at("V"))
        L.V.push_back(gr_mat_from_json(mj));
    assert_lattice(L);
    return L;
}

}  // namespace strata
