#include "chaincsg/pipeline.hpp"

#include <cstdio>
#include <string>

#include "chaincsg/errors.hpp"
#include "chaincsg/io.hpp"
#include "chaincsg/primitives.hpp"
#include "doctest.h"

using namespace chaincsg;

namespace {

Scene3 two_cubes() {
    Assembly a = parse_assembly(
        "let A = (cube)\n"
        "let B = (cube)\n"
        "A (t 0.5 0.5 0.5) B\n"
        "eval (- A B)\n");
    SceneSource src;
    src.placed = evaluate_assembly(a);
    src.expr = a.expr;
    src.has_expr = a.has_expr;
    return build_scene(src);
}

}  // namespace

TEST_CASE("scene of two overlapping cubes") {
    Scene3 s = two_cubes();
    CHECK(s.cx.V.size() == 22);
    CHECK(s.cx.bounded_cols.size() == 3);
    REQUIRE(s.has_expr);

    EvalResult diff = evaluate_expr(s, s.expr);
    CHECK(diff.atoms.count() == 1);
    CHECK(diff.volume == doctest::Approx(0.875));

    EvalResult uni = evaluate_expr(s, parse_csg("(+ A B)"));
    CHECK(uni.atoms.count() == 3);
    CHECK(uni.volume == doctest::Approx(1.875));
    CHECK(uni.counts.chi0 - uni.counts.chi1 + uni.counts.chi2 == 2);

    EvalResult inter = evaluate_expr(s, parse_csg("(* A B)"));
    CHECK(inter.volume == doctest::Approx(0.125));

    // complements keep the unbounded cell and cannot be exported
    CHECK_THROWS_WITH_AS(evaluate_expr(s, parse_csg("(! A)")), doctest::Contains("unbounded"),
                         ValidationError);
}

TEST_CASE("placements sharing a name classify as one solid") {
    Assembly a = parse_assembly("let A = (cube)\nA (t 0.25 0.25 0.25) A\n");
    Scene3 s = build_scene(evaluate_assembly(a));
    REQUIRE(s.bm.names == std::vector<std::string>{"A"});
    // every bounded atom lies inside at least one of the two placements
    CHECK(s.bm.columns[0].count() == int(s.cx.bounded_cols.size()));

    EvalResult all = evaluate_expr(s, union_of_names(s.bm));
    CHECK(all.volume == doctest::Approx(1 + 1 - 0.75 * 0.75 * 0.75));
}

TEST_CASE("union of names expression") {
    BoolMatrix bm;
    bm.n_atoms = 1;
    bm.names = {"A", "B", "C"};
    bm.columns.assign(3, BitChain(1));
    CHECK(format_csg(union_of_names(bm)) == "(+ A B C)");
    bm.names = {"A"};
    bm.columns.assign(1, BitChain(1));
    CHECK(format_csg(union_of_names(bm)) == "A");
    CHECK_THROWS_AS(union_of_names(BoolMatrix{}), ValidationError);
}

TEST_CASE("2d scene evaluation and svg export") {
    Solid2 a;
    a.segments = {{Vec2{0, 0}, Vec2{2, 0}},
                  {Vec2{2, 0}, Vec2{2, 1}},
                  {Vec2{2, 1}, Vec2{0, 1}},
                  {Vec2{0, 1}, Vec2{0, 0}}};
    Solid2 b;
    b.segments = {{Vec2{1, 0}, Vec2{3, 0}},
                  {Vec2{3, 0}, Vec2{3, 1}},
                  {Vec2{3, 1}, Vec2{1, 1}},
                  {Vec2{1, 1}, Vec2{1, 0}}};
    std::vector<Solid2> solids = {a, b};
    std::vector<std::string> names = {"A", "B"};
    Scene2 s = build_scene2d(solids, names);
    CHECK(s.cx.bounded_cols.size() == 3);
    CHECK(s.bm.columns[0].count() == 2);
    CHECK(s.bm.columns[1].count() == 2);

    EvalResult2 r = evaluate_expr2d(s, parse_csg("(- A B)"));
    CHECK(r.atoms.count() == 1);
    CHECK(r.area == doctest::Approx(1.0));
    CHECK(r.segments.size() == 4);

    // the boundary drawing reads back with the same segment count
    auto segs = parse_svg(format_svg(r.segments));
    CHECK(segs.size() == r.segments.size());

    EvalResult2 uni = evaluate_expr2d(s, parse_csg("(+ A B)"));
    CHECK(uni.area == doctest::Approx(3.0));
    // interior wall edges cancel out of the union's boundary
    for (std::size_t e = 0; e < uni.chain.size(); ++e) {
        Vec2 mid = (s.cx.V[s.cx.EV[e][0]] + s.cx.V[s.cx.EV[e][1]]) / 2;
        bool interior_wall = std::abs(mid.x - 1) < 1e-9 || std::abs(mid.x - 2) < 1e-9;
        if (interior_wall && mid.y > 0 && mid.y < 1) CHECK(uni.chain[e] == 0);
    }

    CHECK_THROWS_WITH_AS(evaluate_expr2d(s, parse_csg("(! B)")),
                         doctest::Contains("unbounded"), ValidationError);
}

TEST_CASE("reports render stable text") {
    Scene3 s = two_cubes();
    nlohmann::ordered_json j = scene_report(s);
    CHECK(j["vertices"] == 22);
    CHECK(j["atoms"] == 3);
    CHECK(j["atoms_per_name"]["A"] == 2);
    CHECK(j["expr"] == "(- A B)");

    std::string text = render_text(j);
    CHECK(text.find("vertices: 22") != std::string::npos);
    CHECK(text.find("atoms: 3") != std::string::npos);
    CHECK(text.find("expr: (- A B)") != std::string::npos);
    // insertion order is kept: counts come before names
    CHECK(text.find("vertices:") < text.find("names:"));

    nlohmann::ordered_json aj = atoms_report(s, 7);
    REQUIRE(aj["atoms"].size() == 3);
    double vol = 0;
    for (const auto& row : aj["atoms"]) vol += row["volume"].get<double>();
    CHECK(vol == doctest::Approx(1.875));
    std::string atext = render_text(aj);
    CHECK(atext.find("witness:") != std::string::npos);
}

TEST_CASE("scene sources load by extension") {
    write_file("pipe_scene.csg", "(cube) (t 0.5 0.5 0.5) (cube) eval (* X1 X2)\n");
    SceneSource src = load_placements("pipe_scene.csg");
    CHECK(src.placed.models.size() == 2);
    CHECK(src.has_expr);
    Scene3 s = build_scene(src);
    CHECK(evaluate_expr(s, s.expr).volume == doctest::Approx(0.125));
    std::remove("pipe_scene.csg");

    write_file("pipe_model.lar", format_lar(cuboid_grid(1, 1, 1)));
    SceneSource one = load_placements("pipe_model.lar");
    CHECK(one.placed.names == std::vector<std::string>{"X1"});
    CHECK(!one.has_expr);
    std::remove("pipe_model.lar");

    CHECK_THROWS_WITH_AS(load_placements("scene.xyz"), doctest::Contains("extension"),
                         ValidationError);
}
