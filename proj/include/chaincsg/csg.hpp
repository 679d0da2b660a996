#pragma once

#include <string>
#include <vector>

#include "chaincsg/algebra.hpp"
#include "chaincsg/geometry.hpp"
#include "chaincsg/lar.hpp"

namespace chaincsg {

// Prefix expression text over solid names:
//   expr := name | '(' op expr+ ')'      op in { + * - ! }
// '+' and '*' are variadic union and intersection, '-' with one argument is
// the complement and with more the left fold of differences, '!' is the
// complement. Commas count as whitespace. Errors carry byte offsets.
CsgExpr parse_csg(const std::string& text);
std::string format_csg(const CsgExpr& e);

// One node of a scene description: a primitive solid, an affine map that
// composes onto the current transform for the placements after it, or a
// bracket that scopes such maps.
struct AssemblyNode {
    enum class Kind { Model, Affine, Group };
    Kind kind = Kind::Group;
    std::string name;  // from a let binding; empty means anonymous
    LarModel model;
    AffineMap map = AffineMap::identity();
    std::vector<AssemblyNode> children;
};

struct Assembly {
    AssemblyNode root;  // implicit group of the top-level statements
    CsgExpr expr;       // the optional eval statement
    bool has_expr = false;
};

// Scene text. Statements, whitespace separated:
//   let NAME = node        bind a reusable node
//   node                   place it under the running transform
//   eval EXPR              formula over the bound names (at most once)
// node := NAME | (cube) | (cuboid m n p) | (cylinder n r h k)
//       | (sphere n m r) | (t x y z) | (r ax ay az) | (s x y z)
//       | (struct node...)
// Trailing primitive arguments may be omitted. Numbers accept pi forms
// (pi, 2pi, 0.5pi, pi/5, -pi/12). '#' starts a line comment.
Assembly parse_assembly(const std::string& text);

// World-coordinate placements, one entry per placed model. A model is named
// by its own binding, else the nearest named enclosing group, else X1, X2...
// in placement order. Several placements may share a name; downstream
// classification treats them as one solid.
struct PlacedModels {
    std::vector<LarModel> models;
    std::vector<std::string> names;
};

PlacedModels evaluate_assembly(const Assembly& a);

}  // namespace chaincsg
