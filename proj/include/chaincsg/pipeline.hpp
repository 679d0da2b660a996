#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chaincsg/algebra.hpp"
#include "chaincsg/arrange3d.hpp"
#include "chaincsg/csg.hpp"
#include "chaincsg/planar.hpp"
#include "json.hpp"

namespace chaincsg {

struct PipelineOptions {
    double epsilon = kVertexEps;
    std::uint64_t seed = 0;
    int threads = 1;
};

// A fully arranged 3D scene: the chain complex of the union of all placed
// boundaries plus the name/atom classification. Placements which share a
// name are classified as one solid (a point belongs if it is inside any of
// them). expr carries the scene's own formula when the source had one.
struct Scene3 {
    ChainComplex3 cx;
    BoolMatrix bm;
    CsgExpr expr;
    bool has_expr = false;
};

// Scene source by extension: .csg is parsed and placed, .lar and .obj load
// as a single solid named X1. The expr is the file's eval statement, if any.
struct SceneSource {
    PlacedModels placed;
    CsgExpr expr;
    bool has_expr = false;
};

SceneSource load_placements(const std::string& path);

Scene3 build_scene(const SceneSource& src, const PipelineOptions& opt = {});
Scene3 build_scene(const PlacedModels& pm, const PipelineOptions& opt = {});

CsgExpr union_of_names(const BoolMatrix& bm);

struct EvalResult {
    BitChain atoms;
    std::vector<int> chain;  // signed face multiplicities of the boundary
    Brep brep;
    BoundaryCounts counts;
    double volume = 0;
};

EvalResult evaluate_expr(const Scene3& s, const CsgExpr& e);

struct Scene2 {
    ChainComplex2 cx;
    BoolMatrix bm;
};

Scene2 build_scene2d(std::span<const Solid2> solids, std::span<const std::string> names,
                     const PipelineOptions& opt = {});

struct EvalResult2 {
    BitChain atoms;
    std::vector<int> chain;                     // signed edge multiplicities
    std::vector<std::array<Vec2, 2>> segments;  // oriented: region on the left
    double area = 0;
};

EvalResult2 evaluate_expr2d(const Scene2& s, const CsgExpr& e);

// minimal drawing that parse_svg reads back: one line element per segment
std::string format_svg(std::span<const std::array<Vec2, 2>> segments);

// reports keep insertion order so text rendering is stable
nlohmann::ordered_json scene_report(const Scene3& s);
nlohmann::ordered_json scene_report2d(const Scene2& s);
nlohmann::ordered_json eval_report(const Scene3& s, const EvalResult& r);
nlohmann::ordered_json eval_report2d(const Scene2& s, const EvalResult2& r);
nlohmann::ordered_json atoms_report(const Scene3& s, std::uint64_t seed);

std::string render_text(const nlohmann::ordered_json& j);

}  // namespace chaincsg
