#pragma once

#include <array>
#include <span>
#include <vector>

#include "chaincsg/geometry.hpp"

namespace chaincsg {

// Ear-clipping triangulation of a polygon with holes. loops[0] is the outer
// boundary, the rest are holes strictly inside it. Triangle indices refer to
// the concatenation of all input loops in order; triangle orientation follows
// the outer loop's orientation. Holes are joined to the outer loop by
// mutually visible bridge diagonals before clipping.
std::vector<std::array<int, 3>> triangulate_face(std::span<const std::vector<Vec2>> loops);

}  // namespace chaincsg
