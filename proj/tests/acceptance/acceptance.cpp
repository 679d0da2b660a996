// Acceptance gate. Every criterion prints exactly one PASS/FAIL line with
// its wall time; a criterion also fails by running over its budget. The
// process exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "chaincsg/algebra.hpp"
#include "chaincsg/arrange3d.hpp"
#include "chaincsg/csg.hpp"
#include "chaincsg/errors.hpp"
#include "chaincsg/io.hpp"
#include "chaincsg/lar.hpp"
#include "chaincsg/pipeline.hpp"
#include "chaincsg/planar.hpp"
#include "chaincsg/primitives.hpp"

using namespace chaincsg;

namespace {

void need(bool ok, const std::string& msg) {
    if (!ok) throw std::runtime_error(msg);
}

// ---------------------------------------------------------------- 1
// Characteristic matrices of a 12-vertex plane complex, the unsigned
// edge-face incidence derived from them, and two mod-2 boundary products.
void plane_tables() {
    LarModel m;
    m.dim = 2;
    const double xs[] = {0, 1.5, 3, 1, 1.5, 2, 1, 1.5, 2, 0, 1.5, 3};
    const double ys[] = {0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3};
    for (int i = 0; i < 12; ++i) m.V.push_back({xs[i], ys[i], 0});
    m.EV = {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {6, 7},  {7, 8},  {9, 10},
            {10, 11}, {0, 9}, {3, 6}, {5, 8}, {2, 11}, {1, 4},  {7, 10}};
    m.FV = {{0, 1, 3, 4, 6, 7, 9, 10}, {1, 2, 4, 5, 7, 8, 10, 11}, {3, 4, 5, 6, 7, 8}};

    SparseMatrix k1 = characteristic_matrix(m.EV, 12);
    SparseMatrix k2 = characteristic_matrix(m.FV);
    need(k1.rows() == 14 && k1.cols() == 12, "edge table shape");
    need(k2.rows() == 3 && k2.cols() == 12, "face table shape");

    const char* kev[14] = {
        "110000000000", "011000000000", "000110000000", "000011000000", "000000110000",
        "000000011000", "000000000110", "000000000011", "100000000100", "000100100000",
        "000001001000", "001000000001", "010010000000", "000000010010"};
    for (int r = 0; r < 14; ++r)
        for (int c = 0; c < 12; ++c)
            need(k1.at(r, c) == kev[r][c] - '0', "edge table entry mismatch");

    const char* kfvt[12] = {"100", "110", "010", "101", "111", "011",
                            "101", "111", "011", "100", "110", "010"};
    for (int v = 0; v < 12; ++v)
        for (int f = 0; f < 3; ++f)
            need(k2.at(f, v) == kfvt[v][f] - '0', "face table entry mismatch");

    SparseMatrix ef = unsigned_boundary2(k1, k2);
    need(ef.rows() == 14 && ef.cols() == 3, "incidence shape");

    auto nonzeros = [](const std::vector<int>& v) {
        std::vector<int> out;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i]) out.push_back(int(i));
        return out;
    };
    std::vector<int> all = {1, 1, 1}, two = {1, 1, 0};
    need(nonzeros(mod2(apply_boundary(ef, all))) == std::vector<int>{0, 1, 6, 7, 8, 11},
         "boundary of all three faces");
    need(nonzeros(mod2(apply_boundary(ef, two))) ==
             std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11},
         "boundary of the first two faces");
}

// ---------------------------------------------------------------- 2
// Two overlapping rectangles: 3 bounded atoms plus the outer cell, the
// column structure of A and B, and all 16 formulas over them.
void rectangle_algebra() {
    Solid2 a, b;
    a.segments = {{Vec2{0, 0}, Vec2{2, 0}},
                  {Vec2{2, 0}, Vec2{2, 1}},
                  {Vec2{2, 1}, Vec2{0, 1}},
                  {Vec2{0, 1}, Vec2{0, 0}}};
    b.segments = {{Vec2{1, 0}, Vec2{3, 0}},
                  {Vec2{3, 0}, Vec2{3, 1}},
                  {Vec2{3, 1}, Vec2{1, 1}},
                  {Vec2{1, 1}, Vec2{1, 0}}};
    std::vector<Solid2> solids = {a, b};
    std::vector<std::string> names = {"A", "B"};
    Scene2 s = build_scene2d(solids, names);
    need(s.cx.bounded_cols.size() == 3, "3 bounded atoms expected");
    need(s.cx.d2_plus.cols() == 4, "3 bounded atoms plus one outer cycle");

    auto rows = s.bm.rows();
    need(rows.size() == 4, "one table row per cell");
    need(rows[0] == std::vector<bool>{true, false, false}, "outer row");

    auto env = s.bm.bindings();
    const BitChain& ca = env.at("A");
    const BitChain& cb = env.at("B");
    need(ca.count() == 2 && cb.count() == 2, "A and B cover two atoms each");
    BitChain only_a = ca & cb.complement();
    BitChain both = ca & cb;
    BitChain only_b = cb & ca.complement();
    need(only_a.count() == 1 && both.count() == 1 && only_b.count() == 1,
         "each region is one atom");
    int ia = only_a.members()[0], ib2 = both.members()[0], ic = only_b.members()[0];

    struct Case {
        const char* expr;
        bool omega, in_a, in_both, in_b;
    };
    const Case table[16] = {
        {"(+ A (! A))", 1, 1, 1, 1},
        {"A", 0, 1, 1, 0},
        {"B", 0, 0, 1, 1},
        {"(+ A B)", 0, 1, 1, 1},
        {"(! (+ A B))", 1, 0, 0, 0},
        {"(- A B)", 0, 1, 0, 0},
        {"(* A B)", 0, 0, 1, 0},
        {"(- B A)", 0, 0, 0, 1},
        {"(- (+ A B) (* A B))", 0, 1, 0, 1},
        {"(! (- A B))", 1, 0, 1, 1},
        {"(! B)", 1, 1, 0, 0},
        {"(! (- B A))", 1, 1, 1, 0},
        {"(! A)", 1, 0, 0, 1},
        {"(! (- (+ A B) (* A B)))", 1, 0, 1, 0},
        {"(! (* A B))", 1, 1, 0, 1},
        {"(* A (! A))", 0, 0, 0, 0},
    };
    for (const Case& c : table) {
        BitChain r = eval_bitwise(parse_csg(c.expr), env);
        need(r.omega() == c.omega, std::string(c.expr) + ": outer bit");
        need(r.get(ia) == c.in_a && r.get(ib2) == c.in_both && r.get(ic) == c.in_b,
             std::string(c.expr) + ": atom bits");
    }
    need(eval_bitwise(parse_csg("(- A B)"), env).count() == 1,
         "difference selects exactly one atom");
}

// ---------------------------------------------------------------- 3
// Three unit cubes, the second and third tilted and shifted; the expected
// classification table, one-atom difference, and union boundary counts.
void tilted_cubes() {
    Assembly a = parse_assembly(
        "let A = (cube)\nlet B = (cube)\nlet C = (cube)\n"
        "A\n"
        "(t 0.3 0.4 0.25) (r pi/5 0 0) (r 0 0 pi/12) B\n"
        "(t -0.2 0.4 -0.2) (r 0 pi/5 0) (r 0 pi/12 0) C\n");
    Scene3 s = build_scene(evaluate_assembly(a));
    need(s.cx.bounded_cols.size() == 7, "7 bounded atoms expected");

    // The 8x4 membership table must hold up to row order: with columns
    // (outer, A, B, C) read as a 4-bit code, every code 1..8 appears once.
    std::vector<int> codes;
    for (const auto& row : s.bm.rows()) {
        int code = 0;
        for (bool bit : row) code = code * 2 + (bit ? 1 : 0);
        codes.push_back(code);
    }
    std::sort(codes.begin(), codes.end());
    need(codes == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8}, "classification table mismatch");

    EvalResult diff = evaluate_expr(s, parse_csg("(- A B C)"));
    need(diff.atoms.count() == 1, "difference must select one atom");

    EvalResult uni = evaluate_expr(s, parse_csg("(+ A B C)"));
    int nnz = 0;
    for (int c : uni.chain)
        if (c) ++nnz;
    need(nnz == 21, "union boundary must use 21 faces");
    need(uni.counts.chi0 == 38 && uni.counts.chi1 == 57 && uni.counts.chi2 == 21,
         "union boundary counts must be (38, 57, 21)");
    need(uni.counts.chi0 - uni.counts.chi1 + uni.counts.chi2 == 2, "union boundary euler");
    for (int v : s.cx.d2.apply(uni.chain)) need(v == 0, "union boundary must be a cycle");
}

// ---------------------------------------------------------------- 4
// Fifty seeded scenes of 2 to 4 scaled, optionally rotated, translated
// boxes: chain identities, 2-cycle rows, and thread-count independence.
void random_box_scenes() {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> u(0, 1);
    LarModel cube = cuboid_grid(1, 1, 1);
    for (int scene = 0; scene < 50; ++scene) {
        int nb = 2 + int(rng() % 3);
        std::vector<LarModel> parts;
        for (int k = 0; k < nb; ++k) {
            AffineMap m = AffineMap::scaling(0.5 + 1.5 * u(rng), 0.5 + 1.5 * u(rng),
                                             0.5 + 1.5 * u(rng));
            if (u(rng) < 0.5)
                m = AffineMap::rotation(0.1 + 0.8 * u(rng), 0.1 + 0.8 * u(rng),
                                        0.1 + 0.8 * u(rng)) *
                    m;
            m = AffineMap::translation(2 * u(rng) - 1, 2 * u(rng) - 1, 2 * u(rng) - 1) * m;
            parts.push_back(transformed(cube, m));
        }
        LarModel model = merge_models(parts);
        std::string tag = "scene " + std::to_string(scene) + ": ";

        ChainComplex3 one = arrangement3d(model, kVertexEps, 1);
        ChainComplex3 four = arrangement3d(model, kVertexEps, 4);
        need(one.V.size() == four.V.size(), tag + "vertex counts differ across threads");
        for (std::size_t i = 0; i < one.V.size(); ++i)
            need(one.V[i].x == four.V[i].x && one.V[i].y == four.V[i].y &&
                     one.V[i].z == four.V[i].z,
                 tag + "vertex coordinates differ across threads");
        need(one.d1 == four.d1 && one.d2 == four.d2 && one.d3_plus == four.d3_plus &&
                 one.d3 == four.d3,
             tag + "matrices differ across threads");

        need(one.d1.multiply(one.d2).is_zero(), tag + "d1*d2 != 0");
        need(one.d2.multiply(one.d3).is_zero(), tag + "d2*d3 != 0");
        need(one.d2.multiply(one.d3_plus).is_zero(), tag + "d2*d3_plus != 0");
        for (int f = 0; f < one.d3_plus.rows(); ++f) {
            auto r = one.d3_plus.row(f);
            need(r.size == 2 && int(r.vals[0]) + int(r.vals[1]) == 0,
                 tag + "face not used by exactly two opposite cells");
        }
    }
}

// ---------------------------------------------------------------- 5
// Three concentric unit cubes, each tilted about one axis: the alternating
// cell-count identity (outer cell included), full union coverage, and
// intersection witnesses confirmed by mapping back into each cube.
void concentric_cubes() {
    const double pi = 3.14159265358979323846;
    const double angles[3][3] = {{0, 0, pi / 7}, {pi / 6, 0, 0}, {0, pi / 5, 0}};
    LarModel cube = cuboid_grid(1, 1, 1);
    AffineMap to_center = AffineMap::translation(-0.5, -0.5, -0.5);
    AffineMap from_center = AffineMap::translation(0.5, 0.5, 0.5);

    PlacedModels pm;
    std::vector<AffineMap> inverse;
    const char* names[3] = {"A", "B", "C"};
    for (int k = 0; k < 3; ++k) {
        const double* g = angles[k];
        AffineMap rot = AffineMap::rotation(g[0], g[1], g[2]);
        AffineMap inv_rot = AffineMap::rotation(-g[0], 0, 0) *
                            AffineMap::rotation(0, -g[1], 0) *
                            AffineMap::rotation(0, 0, -g[2]);
        pm.models.push_back(transformed(cube, rot * to_center));
        pm.names.push_back(names[k]);
        inverse.push_back(from_center * inv_rot);
    }
    Scene3 s = build_scene(pm);

    int chi = int(s.cx.V.size()) - s.cx.d1.cols() + s.cx.d2.cols() - s.cx.d3_plus.cols();
    need(chi == 0, "alternating cell count must vanish, got " + std::to_string(chi));

    EvalResult uni = evaluate_expr(s, parse_csg("(+ A B C)"));
    need(uni.atoms.count() == int(s.cx.bounded_cols.size()),
         "the union must cover every bounded atom");

    EvalResult inter = evaluate_expr(s, parse_csg("(* A B C)"));
    need(inter.atoms.count() >= 1, "the intersection must be non-empty");
    std::vector<Vec3> wit = atom_witnesses(s.cx, 0);
    for (int i : inter.atoms.members())
        for (const AffineMap& inv : inverse) {
            Vec3 q = inv.apply(wit[std::size_t(i)]);
            need(q.x > 0 && q.x < 1 && q.y > 0 && q.y < 1 && q.z > 0 && q.z < 1,
                 "an intersection witness falls outside a cube");
        }
}

// ---------------------------------------------------------------- 6
// A unit cube centered in a side-2 cube: two bounded atoms, and the shell
// atom's boundary column holds all 12 faces and closes.
void nested_cavity() {
    PlacedModels pm;
    pm.models.push_back(transformed(cuboid_grid(1, 1, 1), AffineMap::scaling(2, 2, 2)));
    pm.models.push_back(
        transformed(cuboid_grid(1, 1, 1), AffineMap::translation(0.5, 0.5, 0.5)));
    pm.names = {"A", "B"};
    Scene3 s = build_scene(pm);

    need(s.cx.bounded_cols.size() == 2, "two bounded atoms expected");
    need(s.cx.cavities_folded, "the inner shell must fold into the outer cell");

    auto env = s.bm.bindings();
    BitChain shell = env.at("A") & env.at("B").complement();
    need(shell.count() == 1, "the shell region is one atom");
    int col = shell.members()[0];
    auto entries = column_entries(s.cx.d3, col);
    need(entries.size() == 12, "the shell boundary must hold 12 faces");

    std::vector<int> chain(std::size_t(s.cx.d3.rows()), 0);
    for (auto [f, v] : entries) chain[std::size_t(f)] = v;
    for (int v : s.cx.d2.apply(chain)) need(v == 0, "the shell boundary must close");

    double shell_vol = s.cx.cell_volume[s.cx.bounded_cols[col]];
    need(std::abs(shell_vol - 7.0) < 1e-9, "shell volume must be 7");
}

// ---------------------------------------------------------------- 7
// Ten thousand random chains of width up to 64: De Morgan, idempotence,
// absorption, involution, and difference as and-with-complement.
void bitwise_battery() {
    std::mt19937_64 rng(99);
    CsgExpr diff_expr = parse_csg("(- A B)");
    for (int round = 0; round < 10000; ++round) {
        int n = 1 + int(rng() % 64);
        auto random_chain = [&] {
            BitChain x(n, (rng() & 1) != 0);
            for (int i = 0; i < n; ++i)
                if (rng() & 1) x.set(i);
            return x;
        };
        BitChain a = random_chain(), b = random_chain();
        need((a | b).complement() == (a.complement() & b.complement()), "De Morgan (or)");
        need((a & b).complement() == (a.complement() | b.complement()), "De Morgan (and)");
        need((a | a) == a && (a & a) == a, "idempotence");
        need((a | (a & b)) == a && (a & (a | b)) == a, "absorption");
        need(a.complement().complement() == a, "involution");
        std::map<std::string, BitChain> env = {{"A", a}, {"B", b}};
        need(eval_bitwise(diff_expr, env) == (a & b.complement()),
             "difference as and-with-complement");
    }
}

// ---------------------------------------------------------------- 8
// Text formats survive a round trip, and a drawing difference (outer box
// minus interior shapes) yields a complex with V-E+F = 2 per component.
void format_round_trips() {
    LarModel grid = cuboid_grid(2, 1, 1);
    LarModel grid_back = parse_lar(format_lar(grid));
    need(grid_back.V.size() == grid.V.size() && grid_back.EV == grid.EV &&
             grid_back.FV == grid.FV,
         "model text round trip");
    for (std::size_t i = 0; i < grid.V.size(); ++i)
        need(grid_back.V[i].x == grid.V[i].x && grid_back.V[i].y == grid.V[i].y &&
                 grid_back.V[i].z == grid.V[i].z,
             "model text must keep coordinates exactly");

    ChainComplex3 cx = arrangement3d(cuboid_grid(1, 1, 1));
    BitChain cell(1);
    cell.set(0);
    Brep brep = brep_extract(boundary_chain(cell, cx.d3), cx);
    LarModel obj_back = parse_obj(format_obj(brep));
    need(obj_back.V.size() == 8 && obj_back.FV.size() == 12 && obj_back.EV.size() == 18,
         "surface export round trip counts");

    PlacedModels pm;
    pm.models = {cuboid_grid(1, 1, 1),
                 transformed(cuboid_grid(1, 1, 1), AffineMap::translation(0.5, 0.5, 0.5))};
    pm.names = {"A", "B"};
    Scene3 s3 = build_scene(pm);
    Lar3Data round = parse_lar3(format_lar3(s3.cx, s3.bm));
    need(round.cx.d1 == s3.cx.d1 && round.cx.d2 == s3.cx.d2 &&
             round.cx.d3_plus == s3.cx.d3_plus && round.bm.names == s3.bm.names,
         "arrangement container round trip");

    Solid2 box{parse_svg("<rect width=\"10\" height=\"10\"/>")};
    Solid2 hole{parse_svg("<rect x=\"2\" y=\"2\" width=\"2\" height=\"2\"/>")};
    Solid2 wedge{parse_svg("<polygon points=\"6,2 8,2 7,4\"/>")};
    std::vector<Solid2> solids = {box, hole, wedge};
    std::vector<std::string> names = {"BOX", "R", "T"};
    Scene2 s2 = build_scene2d(solids, names);
    for (const auto& c : s2.cx.component_counts)
        need(c.verts - c.edges + c.faces == 2, "per-component V-E+F must be 2");

    EvalResult2 diff = evaluate_expr2d(s2, parse_csg("(- BOX R T)"));
    need(diff.atoms.count() == 1, "the difference keeps one region");
    need(std::abs(diff.area - 94.0) < 1e-9, "difference area must be 100 - 4 - 2");
    need(parse_svg(format_svg(diff.segments)).size() == diff.segments.size(),
         "drawing round trip segment count");
    Vec2 closure{0, 0};
    for (const auto& seg : diff.segments) closure = closure + (seg[1] - seg[0]);
    need(std::abs(closure.x) < 1e-12 && std::abs(closure.y) < 1e-12,
         "oriented boundary must close");
}

struct Criterion {
    const char* title;
    double budget_s;
    std::function<void()> fn;
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"plane complex tables and mod-2 boundary products", 1, plane_tables},
        {"two overlapping rectangles generate the 16-element algebra", 1, rectangle_algebra},
        {"three tilted cubes: classification, difference, union boundary", 30, tilted_cubes},
        {"50 random box scenes keep every chain identity", 300, random_box_scenes},
        {"three concentric tilted cubes: cell count and witnesses", 120, concentric_cubes},
        {"nested cubes fold the cavity into the shell cell", 5, nested_cavity},
        {"bitwise identities on random chains", 5, bitwise_battery},
        {"text formats round trip and a drawing difference closes", 10, format_round_trips},
    };

    int failures = 0;
    int id = 0;
    for (const Criterion& c : criteria) {
        ++id;
        auto start = std::chrono::steady_clock::now();
        std::string reason;
        try {
            c.fn();
        } catch (const std::exception& e) {
            reason = e.what();
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (reason.empty() && elapsed > c.budget_s)
            reason = "over the " + std::to_string(c.budget_s) + "s budget";
        if (reason.empty()) {
            std::printf("PASS  %d  %-62s %7.3fs (budget %gs)\n", id, c.title, elapsed,
                        c.budget_s);
        } else {
            std::printf("FAIL  %d  %-62s %7.3fs (budget %gs)\n          %s\n", id, c.title,
                        elapsed, c.budget_s, reason.c_str());
            ++failures;
        }
    }
    std::printf("%d of 8 criteria passed\n", 8 - failures);
    return failures;
}
