#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "chaincsg/geometry.hpp"
#include "chaincsg/lar.hpp"
#include "chaincsg/sparse.hpp"

namespace chaincsg {

// Straight-line graph: no two edges cross except at shared endpoints.
struct PlanarGraph {
    std::vector<Vec2> V;
    std::vector<std::array<int, 2>> EV;
};

// All pairwise intersections of a segment soup. Output vertices are the input
// endpoints plus intersection points merged within eps; every edge is a
// maximal crossing-free sub-segment. Collinear overlaps split at endpoint
// projections and deduplicate.
PlanarGraph intersect_segments(std::span<const std::array<Vec2, 2>> segments,
                               double eps = kVertexEps);

// Keep only edges lying on some cycle: drops dangling trees and bridges,
// then compacts away isolated vertices.
PlanarGraph regularize(const PlanarGraph& g);

// Planar face extraction: columns are the signed 1-cycles of all faces,
// including one outer (negative-area) cycle per connected component. Every
// edge lands in exactly 2 columns with opposite coefficients. The petal rule
// is face-to-the-left: continue with the clockwise-next outgoing edge after
// the reversed incoming one.
SparseMatrix tgw2d(const SparseMatrix& d1, std::span<const Vec2> V);

struct ChainComplex2 {
    std::vector<Vec2> V;
    std::vector<std::array<int, 2>> EV;
    SparseMatrix d1;       // vertices x edges
    SparseMatrix d2;       // edges x bounded cells (island outer cycles folded in as holes)
    SparseMatrix d2_plus;  // edges x all extracted cycles
    std::vector<int> outer_cols;    // one d2_plus column per component
    std::vector<int> bounded_cols;  // d2 column -> originating d2_plus column
    std::vector<int> col_component;
    std::vector<int> vertex_component;
    int n_components = 0;
    // raw per-component counts for the V - E + F = 2 check (outer face included)
    struct Counts {
        int verts = 0, edges = 0, faces = 0;
    };
    std::vector<Counts> component_counts;
};

ChainComplex2 planar_arrangement(std::span<const std::array<Vec2, 2>> segments,
                                 double eps = kVertexEps);

// same starting from an already intersected graph; regularizes internally
ChainComplex2 planar_arrangement(PlanarGraph g);

// signed area of a 1-cycle given as (edge, coefficient) pairs
double cycle_area(std::span<const Vec2> V, std::span<const std::array<int, 2>> ev,
                  std::span<const std::pair<int, int>> entries);

// ray parity of a point against a signed edge cycle
PointSide point_vs_cycle(const Vec2& p, std::span<const Vec2> V,
                         std::span<const std::array<int, 2>> ev,
                         std::span<const std::pair<int, int>> entries,
                         double tol = kPredicateTol);

// Split a signed edge cycle into closed vertex loops (loop[i] -> loop[i+1]
// follows traversal direction). The angular successor rule keeps pinched
// vertices and multiple loops consistent.
std::vector<std::vector<int>> cycle_loops(std::span<const Vec2> pts,
                                          std::span<const std::array<int, 2>> ev,
                                          std::span<const std::pair<int, int>> entries);

// column entries of a sparse matrix as (row, value) pairs
std::vector<std::pair<int, int>> column_entries(const SparseMatrix& m, int col);

}  // namespace chaincsg
