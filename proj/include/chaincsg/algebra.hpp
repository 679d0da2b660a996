#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "chaincsg/arrange3d.hpp"
#include "chaincsg/geometry.hpp"
#include "chaincsg/interval_tree.hpp"
#include "chaincsg/lar.hpp"
#include "chaincsg/planar.hpp"
#include "chaincsg/sparse.hpp"

namespace chaincsg {

// Element of the finite algebra over the arrangement's cells: one bit per
// bounded atom plus a flag for the unbounded cell, so complements stay
// inside the algebra. Unbounded elements are representable but refuse
// boundary export.
class BitChain {
public:
    BitChain() = default;
    explicit BitChain(int n, bool omega = false);

    int size() const { return n_; }
    bool omega() const { return omega_; }
    void set_omega(bool v) { omega_ = v; }
    void set(int i, bool v = true);
    bool get(int i) const;
    int count() const;
    bool any() const;
    std::vector<int> members() const;

    BitChain complement() const;  // flips every atom bit and the omega flag
    friend BitChain operator|(const BitChain& a, const BitChain& b);
    friend BitChain operator&(const BitChain& a, const BitChain& b);
    bool operator==(const BitChain& o) const;

private:
    std::vector<std::uint64_t> words_;
    int n_ = 0;
    bool omega_ = false;

    static void check_match(const BitChain& a, const BitChain& b);
};

// CSG formula over named solids; Union/Intersect/Diff are variadic.
struct CsgExpr {
    enum class Kind { Leaf, Union, Intersect, Diff, Complement };
    Kind kind = Kind::Leaf;
    std::string name;  // Leaf only
    std::vector<CsgExpr> args;
};

// union = or, intersection = and, difference = first minus the rest,
// complement = algebra complement (flips the unbounded flag too)
BitChain eval_bitwise(const CsgExpr& expr, const std::map<std::string, BitChain>& env);

// Atom membership table. Rows are cells (the unbounded cell first, then the
// bounded atoms in boundary-column order); one stored column per input name.
// The implicit leading column is the unbounded-cell indicator.
struct BoolMatrix {
    std::vector<std::string> names;  // input solids, assembly order
    std::vector<BitChain> columns;   // per name, over bounded atoms
    int n_atoms = 0;

    const BitChain& column(const std::string& name) const;
    std::map<std::string, BitChain> bindings() const;
    // full table: row 0 = unbounded cell, column 0 = its indicator
    std::vector<std::vector<bool>> rows() const;
};

// Triangulated closed boundary of one input solid with a face-box index for
// ray queries.
struct SolidMesh {
    std::vector<Vec3> V;
    std::vector<std::vector<std::array<int, 3>>> face_tris;
    std::vector<Box3> face_boxes;
    IntervalTreeSet index;
    Box3 box;
};

SolidMesh solid_mesh(const LarModel& m);

// Ray-crossing parity of p against the solid's boundary; only faces whose
// boxes meet the ray are tested. The direction comes from the seed and is
// re-drawn on grazing hits; still degenerate after 8 casts is an error.
bool smc_point_in_solid(const Vec3& p, const SolidMesh& solid, std::uint64_t seed = 0);

// One interior point per bounded atom: a triangle centroid of the atom's
// boundary nudged inward, validated by parity against the atom itself.
std::vector<Vec3> atom_witnesses(const ChainComplex3& cx, std::uint64_t seed = 0);

BoolMatrix classify_atoms(const ChainComplex3& cx, std::span<const SolidMesh> solids,
                          std::span<const std::string> names, std::uint64_t seed = 0,
                          int threads = 1);

// 2D counterparts over a planar arrangement
struct Solid2 {
    std::vector<std::array<Vec2, 2>> segments;  // closed loop soup
};

std::vector<Vec2> atom_witnesses2d(const ChainComplex2& cx);
BoolMatrix classify_atoms2d(const ChainComplex2& cx, std::span<const Solid2> solids,
                            std::span<const std::string> names);

// signed face vector d3 * result; refuses chains containing the unbounded cell
std::vector<int> boundary_chain(const BitChain& result, const SparseMatrix& d3);

// Oriented boundary surface of a closed face chain: per participating face
// its vertex loops (outer first) and triangles, flipped where the chain's
// coefficient is negative.
struct Brep {
    std::vector<Vec3> V;
    std::vector<int> faces;
    std::vector<int> coeffs;
    std::vector<std::vector<std::vector<int>>> loops;
    std::vector<std::array<int, 3>> tris;
};

Brep brep_extract(std::span<const int> chain, const ChainComplex3& cx);

// (chi0, chi1, chi2) of a closed face chain: distinct vertices, edges counted
// through their positive instances, and participating faces.
struct BoundaryCounts {
    int chi0 = 0, chi1 = 0, chi2 = 0;
};

BoundaryCounts boundary_counts(std::span<const int> chain, const ChainComplex3& cx);

}  // namespace chaincsg
