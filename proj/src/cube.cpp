#include "strata/cube.hpp"

#include <algorithm>
#include <numeric>

namespace strata {

bool vertex_lex_less(VertexMask a, VertexMask b, int d) {
    for (int i = 0; i < d; ++i) {
        const int xa = (a >> i) & 1, xb = (b >> i) & 1;
        if (xa != xb)
            return xa < xb;
    }
    return false;
}

namespace {

struct VertexLess {
    int d;
    bool operator()(VertexMask a, VertexMask b) const { return vertex_lex_less(a, b, d); }
};

long long edge_det(const std::vector<VertexMask>& verts, int d) {
    // Exact integer determinant of (v_k - v_0) by Bareiss elimination.
    std::vector<std::vector<long long>> M(static_cast<size_t>(d),
                                          std::vector<long long>(static_cast<size_t>(d)));
    for (int k = 1; k <= d; ++k)
        for (int i = 0; i < d; ++i)
            M[static_cast<size_t>(k - 1)][static_cast<size_t>(i)] =
                static_cast<long long>((verts[static_cast<size_t>(k)] >> i) & 1U) -
                static_cast<long long>((verts[0] >> i) & 1U);
    int sign = 1;
    long long prev = 1;
    for (int k = 0; k < d - 1; ++k) {
        if (M[static_cast<size_t>(k)][static_cast<size_t>(k)] == 0) {
            int piv = -1;
            for (int r = k + 1; r < d; ++r)
                if (M[static_cast<size_t>(r)][static_cast<size_t>(k)] != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0)
                return 0;
            std::swap(M[static_cast<size_t>(piv)], M[static_cast<size_t>(k)]);
            sign = -sign;
        }
        for (int i = k + 1; i < d; ++i)
            for (int j = k + 1; j < d; ++j)
                M[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    (M[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                         M[static_cast<size_t>(k)][static_cast<size_t>(k)] -
                     M[static_cast<size_t>(i)][static_cast<size_t>(k)] *
                         M[static_cast<size_t>(k)][static_cast<size_t>(j)]) /
                    prev;
        prev = M[static_cast<size_t>(k)][static_cast<size_t>(k)];
    }
    return sign * M[static_cast<size_t>(d - 1)][static_cast<size_t>(d - 1)];
}

}  // namespace

int TriangulatedCube::face_index(int k, const std::vector<VertexMask>& verts) const {
    const auto& list = faces[static_cast<size_t>(k)];
    const auto it = std::lower_bound(list.begin(), list.end(), verts);
    if (it == list.end() || *it != verts)
        return -1;
    return static_cast<int>(it - list.begin());
}

TriangulatedCube build_triangulation(int d, int max_d) {
    if (d < 1)
        throw StrataError("build_triangulation: d must be positive");
    if (d > max_d || d > 20)
        throw TooLarge("build_triangulation: d exceeds the enumeration bound");

    TriangulatedCube T;
    T.d = d;

    std::vector<int> perm(static_cast<size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        Simplex P;
        VertexMask v = 0;
        P.verts.push_back(v);
        for (int k = 1; k <= d; ++k) {
            v |= (1U << perm[static_cast<size_t>(d - k)]);
            P.verts.push_back(v);
        }
        std::sort(P.verts.begin(), P.verts.end(), VertexLess{d});
        P.orient = edge_det(P.verts, d) > 0 ? 1 : -1;
        T.tops.push_back(std::move(P));
    } while (std::next_permutation(perm.begin(), perm.end()));

    // Face closure: all vertex subsets of top simplices, deduplicated by the
    // sorted vertex list.
    T.faces.assign(static_cast<size_t>(d) + 1, {});
    for (const auto& P : T.tops) {
        const int n = static_cast<int>(P.verts.size());
        for (unsigned mask = 1; mask < (1U << n); ++mask) {
            std::vector<VertexMask> f;
            for (int i = 0; i < n; ++i)
                if ((mask >> i) & 1U)
                    f.push_back(P.verts[static_cast<size_t>(i)]);
            T.faces[f.size() - 1].push_back(std::move(f));
        }
    }
    T.f_vector.clear();
    for (auto& list : T.faces) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        T.f_vector.push_back(static_cast<long long>(list.size()));
    }
    return T;
}

long long simplex_edge_det(const Simplex& P, int d) {
    if (static_cast<int>(P.verts.size()) != d + 1)
        throw NotTopDimensional("simplex_edge_det: expected d+1 vertices");
    return edge_det(P.verts, d);
}

bool is_unimodular(const Simplex& P, int d) {
    const long long det = simplex_edge_det(P, d);
    return det == 1 || det == -1;
}

std::pair<TauSubset, TauSubset> strata_labels(const std::vector<VertexMask>& verts, int d) {
    VertexMask ones = 0, zeros = 0;
    const VertexMask full = (1U << d) - 1U;
    for (VertexMask v : verts) {
        ones |= v;
        zeros |= (~v) & full;
    }
    return {TauSubset(ones), TauSubset(zeros)};
}

Codim1Class classify_codim1(const std::vector<VertexMask>& verts, int d) {
    if (static_cast<int>(verts.size()) != d)
        throw WrongDimension("classify_codim1: expected a (d-1)-simplex");
    const auto [S, Sp] = strata_labels(verts, d);
    const TauSubset full = TauSubset::full(d);
    if (S == full && Sp == full)
        return {Codim1Class::InteriorBundle, -1};
    for (int i = 0; i < d; ++i) {
        if (!S.contains(i))
            return {Codim1Class::FaceZero, i};  // x_i = 0 on every vertex
        if (!Sp.contains(i))
            return {Codim1Class::FaceOne, i};  // x_i = 1 on every vertex
    }
    throw StrataError("classify_codim1: unreachable");
}

std::vector<int> default_top_orientations(const TriangulatedCube& T) {
    std::vector<int> out;
    out.reserve(T.tops.size());
    for (const auto& P : T.tops)
        out.push_back(P.orient);
    return out;
}

IntMat top_incidence_matrix(const TriangulatedCube& T) {
    const std::vector<int> face_orient(T.faces[static_cast<size_t>(T.d - 1)].size(), 1);
    return top_incidence_matrix(T, default_top_orientations(T), face_orient);
}

IntMat top_incidence_matrix(const TriangulatedCube& T, const std::vector<int>& top_orient,
                            const std::vector<int>& face_orient) {
    const int d = T.d;
    IntMat M(static_cast<int>(T.faces[static_cast<size_t>(d - 1)].size()),
             static_cast<int>(T.tops.size()));
    for (size_t c = 0; c < T.tops.size(); ++c) {
        const auto& P = T.tops[c];
        for (int j = 0; j <= d; ++j) {
            std::vector<VertexMask> facet;
            for (int i = 0; i <= d; ++i)
                if (i != j)
                    facet.push_back(P.verts[static_cast<size_t>(i)]);
            const int r = T.face_index(d - 1, facet);
            const int sign = (j % 2 == 0 ? 1 : -1) * top_orient[c] * face_orient[static_cast<size_t>(r)];
            M.at(r, static_cast<int>(c)) = sign;
        }
    }
    return M;
}

IntMat incidence_matrix(const TriangulatedCube& T, int r) {
    if (r < 0 || r + 1 > T.d)
        throw WrongDimension("incidence_matrix: r out of range");
    const auto& hi = T.faces[static_cast<size_t>(r + 1)];
    IntMat M(static_cast<int>(T.faces[static_cast<size_t>(r)].size()),
             static_cast<int>(hi.size()));
    for (size_t c = 0; c < hi.size(); ++c) {
        const auto& verts = hi[c];
        for (size_t j = 0; j < verts.size(); ++j) {
            std::vector<VertexMask> facet;
            for (size_t i = 0; i < verts.size(); ++i)
                if (i != j)
                    facet.push_back(verts[i]);
            const int row = T.face_index(r, facet);
            M.at(row, static_cast<int>(c)) = (j % 2 == 0) ? 1 : -1;
        }
    }
    return M;
}

}  // namespace strata
