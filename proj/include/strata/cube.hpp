#pragma once

#include <cstdint>
#include <vector>

#include "strata/embeddings.hpp"

namespace strata {

/* Staircase triangulation of Q = {1} x [0,1]^d.  Vertices are 0/1 vectors
 * encoded as bitmasks (bit i = coordinate x_i); a top simplex per permutation
 * sigma consists of the chain of vertices obtained by switching coordinates
 * to 1 in the order sigma(d), sigma(d-1), ..., sigma(1). */
using VertexMask = std::uint32_t;

// Lexicographic comparison of coordinate vectors (x_0 most significant).
bool vertex_lex_less(VertexMask a, VertexMask b, int d);

struct Simplex {
    std::vector<VertexMask> verts;  // sorted by vertex_lex_less
    int orient = 1;                 // sign relative to the sorted vertex order
};

struct TriangulatedCube {
    int d = 0;
    std::vector<Simplex> tops;                          // d! simplices, permutations in lex order
    std::vector<std::vector<std::vector<VertexMask>>> faces;  // faces[k]: sorted k-simplex list
    std::vector<long long> f_vector;                    // f_vector[k] = #k-faces

    int face_index(int k, const std::vector<VertexMask>& verts) const;
};

// Throws TooLarge beyond the enumeration bound.
TriangulatedCube build_triangulation(int d, int max_d = 8);

// Exact integer determinant test on the edge matrix (v_k - v_0);
// throws NotTopDimensional unless the simplex has d+1 vertices.
bool is_unimodular(const Simplex& P, int d);
long long simplex_edge_det(const Simplex& P, int d);

// S_P = coordinates taking value 1 somewhere on P, S'_P = value 0 somewhere.
std::pair<TauSubset, TauSubset> strata_labels(const std::vector<VertexMask>& verts, int d);

struct Codim1Class {
    enum Kind { InteriorBundle, FaceZero, FaceOne } kind;
    int axis = -1;  // for FaceZero/FaceOne
    bool operator==(const Codim1Class& o) const { return kind == o.kind && axis == o.axis; }
};

// Classification of a (d-1)-simplex; throws WrongDimension otherwise.
Codim1Class classify_codim1(const std::vector<VertexMask>& verts, int d);

struct IntMat {
    int rows = 0, cols = 0;
    std::vector<int> a;
    IntMat() = default;
    IntMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}
    int& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    int at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

// Signed incidence of (d-1)-faces (rows, in faces[d-1] order) against top
// simplices (cols): entry (P', P) = (-1)^j * orient(P) when P' is the facet
// of P omitting its j-th sorted vertex.  Lower-dimensional faces carry
// orientation +1 in their sorted order; top orientations are the signs of
// the edge-matrix determinants, so adjacent tops are coherently oriented.
IntMat top_incidence_matrix(const TriangulatedCube& T);
// Same with explicit top orientations (for re-orientation experiments).
IntMat top_incidence_matrix(const TriangulatedCube& T, const std::vector<int>& top_orient,
                            const std::vector<int>& face_orient);

// General oriented incidence between faces[r] and faces[r+1] (orientation +1
// everywhere); composing consecutive ones gives zero.
IntMat incidence_matrix(const TriangulatedCube& T, int r);

std::vector<int> default_top_orientations(const TriangulatedCube& T);

}  // namespace strata
