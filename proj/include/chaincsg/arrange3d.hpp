#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "chaincsg/geometry.hpp"
#include "chaincsg/lar.hpp"
#include "chaincsg/sparse.hpp"

namespace chaincsg {

// One input face with its chart and bounding box, precomputed once.
struct FacePre {
    PlaneFrame frame;
    std::vector<Vec3> loop;   // ordered vertex positions
    std::vector<Vec2> loop2;  // the same, projected into the chart
    Box3 box;
};

FacePre precompute_face(const LarModel& m, int face);

// 2D arrangement of one face against its overlap candidates, lifted back
// onto the supporting plane. delta0/delta1 are local coboundaries.
struct LocalComplex {
    std::vector<Vec3> V;
    SparseMatrix delta0;  // edges x vertices
    SparseMatrix delta1;  // fragments x edges
};

LocalComplex fragment_face(int face, std::span<const FacePre> pre,
                           std::span<const int> candidates, double eps);

// block-diagonal stack of the per-face complexes
struct Accumulated {
    std::vector<Vec3> V;
    SparseMatrix delta0;
    SparseMatrix delta1;
};

Accumulated accumulate(std::span<const LocalComplex> locals);

// Identification of epsilon-near vertices followed by the induced merges of
// congruent edges and faces (equal rows up to sign). Degenerate cells are
// dropped and logged; a broken chain-complex product is a hard error.
struct Congruent {
    std::vector<Vec3> V;
    SparseMatrix delta0;  // edges x vertices, rows canonical (-1 at min id)
    SparseMatrix delta1;  // faces x edges
    std::vector<std::string> log;
};

Congruent chain_congruence(const Accumulated& acc, double eps);

// Per-face derived geometry for volume, ray tests and export. Loop order and
// triangle winding agree with the stored face orientation (normal side).
struct FaceInfo {
    Vec3 normal;
    PlaneFrame frame;
    std::vector<std::vector<int>> loops;   // outer loop first
    std::vector<std::array<int, 3>> tris;  // global vertex ids
    Box3 box;
    double area = 0;
};

std::vector<FaceInfo> face_geometry(const SparseMatrix& d1, const SparseMatrix& d2,
                                    std::span<const Vec3> V);

// Cell extraction: pairs face sides around every edge by dihedral angle and
// grows each cell until its boundary closes. Columns are 2-cycles; bounded
// cells come out with outward orientation (positive volume), the per-shell
// unbounded cycle with negative volume. Throws GeometryError when an edge has
// fewer than two incident faces, naming the edge.
SparseMatrix tgw3d(const SparseMatrix& d1, const SparseMatrix& d2, std::span<const Vec3> V,
                   std::span<const FaceInfo> faces);

double cycle_volume(const SparseMatrix& d3cols, int col, std::span<const FaceInfo> faces,
                    std::span<const Vec3> V);

struct ChainComplex3;

// Splits the cycles of d3_plus into shell components, identifies each
// component's unbounded cycle, and folds interior shells into the smallest
// enclosing bounded cell so that cavities subtract. Fills d3 and the column
// bookkeeping of cx.
void cycles_to_boundaries(ChainComplex3& cx);

struct ChainComplex3 {
    std::vector<Vec3> V;
    SparseMatrix d1;       // vertices x edges
    SparseMatrix d2;       // edges x faces
    SparseMatrix d3;       // faces x bounded cells (cavity shells folded in)
    SparseMatrix d3_plus;  // faces x all extracted cycles
    std::vector<FaceInfo> faces;
    std::vector<int> outer_cols;    // one d3_plus column per shell component
    std::vector<int> bounded_cols;  // d3 column -> originating d3_plus column
    std::vector<int> col_component;
    int n_components = 0;
    // signed, per d3_plus column; a cell that absorbed cavities holds its net volume
    std::vector<double> cell_volume;
    bool cavities_folded = false;
    std::vector<std::string> log;
};

// Full space arrangement of a soup of closed face loops. Only V and FV are
// read from the input; EV may be empty.
ChainComplex3 arrangement3d(const LarModel& input, double eps = kVertexEps, int threads = 1);

}  // namespace chaincsg
