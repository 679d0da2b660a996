#pragma once

#include <array>
#include <string>
#include <vector>

#include "chaincsg/algebra.hpp"
#include "chaincsg/arrange3d.hpp"
#include "chaincsg/geometry.hpp"
#include "chaincsg/lar.hpp"

namespace chaincsg {

// Plain-text model format. Header `LAR d n`, one vertex per line (d
// coordinates), then optional `EV k` / `FV k` sections, one 1-based index
// list per line.
std::string format_lar(const LarModel& m);
LarModel parse_lar(const std::string& text);

// Wavefront subset: `v x y z` lines then `f i j k` 1-based triangle lines.
// Only vertices referenced by triangles are written, in ascending id order.
std::string format_obj(const Brep& b);
LarModel parse_obj(const std::string& text);

// Flattenable SVG subset: rect, polygon, line and path (M/L/H/V/Z commands,
// absolute or relative). Coordinates are imported as written; anything
// outside the subset is an error.
std::vector<std::array<Vec2, 2>> parse_svg(const std::string& text);

// Text container for an arrangement plus its classification: vertex table,
// triplet dumps of the three coboundaries, the outer cycles, and the
// name/atom membership table.
struct Lar3Data {
    ChainComplex3 cx;
    BoolMatrix bm;
};

std::string format_lar3(const ChainComplex3& cx, const BoolMatrix& bm);
Lar3Data parse_lar3(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace chaincsg
