#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "chaincsg/geometry.hpp"
#include "chaincsg/sparse.hpp"

namespace chaincsg {

// Cellular model: coordinates plus cells-by-vertices incidence lists.
// Indices are 0-based in memory; text formats are 1-based.
// In 3D, FV rows are ordered boundary loops of simple planar polygons;
// in 2D, FV is incidence-only and may be absent (derivable from V, EV).
struct LarModel {
    int dim = 3;
    std::vector<Vec3> V;  // z == 0 for dim == 2
    std::vector<std::array<int, 2>> EV;
    std::vector<std::vector<int>> FV;
};

void validate_model(const LarModel& m, const std::string& name);
// every undirected FV loop edge must occur in exactly 2 faces
void validate_watertight(const LarModel& m, const std::string& name);

// row k has 1 in column j iff vertex j belongs to cell k; ncols = 1 + max index
SparseMatrix characteristic_matrix(std::span<const std::vector<int>> cells);
SparseMatrix characteristic_matrix(std::span<const std::vector<int>> cells, int nverts);
SparseMatrix characteristic_matrix(std::span<const std::array<int, 2>> cells, int nverts);

// unsigned edge-face incidence: (K1 * K2^t) kept where the shared-vertex
// count equals 2
SparseMatrix unsigned_boundary2(const SparseMatrix& k1, const SparseMatrix& k2);

// signed boundary C1 -> C0 (vertices x edges): column of edge (a,b) is
// -1 at a, +1 at b
SparseMatrix boundary1(std::span<const std::array<int, 2>> ev, int nverts);

std::vector<int> apply_boundary(const SparseMatrix& d, std::span<const int> chain);
std::vector<int> mod2(std::vector<int> v);

struct ExactnessResult {
    bool ok = true;
    Triplet witness;  // one non-zero of the product when !ok
};
// true iff dp * dp1 == 0 as an integer product
ExactnessResult check_exactness(const SparseMatrix& dp, const SparseMatrix& dp1);

// alternating sum over per-dimension cell counts
long long euler_characteristic(std::span<const long long> counts);

// copy with every vertex pushed through the map
LarModel transformed(const LarModel& m, const AffineMap& a);

// disjoint union with shifted indices; dims must agree
LarModel merge_models(std::span<const LarModel> models);

// undirected edge set induced by consecutive loop vertices, deduplicated,
// each edge stored (min, max), in first-occurrence order
std::vector<std::array<int, 2>> edges_from_faces(std::span<const std::vector<int>> fv);

}  // namespace chaincsg
