#include "doctest.h"

#include <cmath>
#include <set>

#include "chaincsg/triangulate.hpp"

using namespace chaincsg;

namespace {

double tri_area(const std::vector<Vec2>& pts, const std::array<int, 3>& t) {
    return 0.5 * cross(pts[t[1]] - pts[t[0]], pts[t[2]] - pts[t[0]]);
}

std::vector<Vec2> concat(std::span<const std::vector<Vec2>> loops) {
    std::vector<Vec2> all;
    for (const auto& l : loops) all.insert(all.end(), l.begin(), l.end());
    return all;
}

}  // namespace

TEST_CASE("convex quad splits in two triangles") {
    std::vector<std::vector<Vec2>> loops = {{{0, 0}, {2, 0}, {2, 1}, {0, 1}}};
    auto tris = triangulate_face(loops);
    CHECK(tris.size() == 2);
    auto pts = concat(loops);
    double area = 0;
    for (const auto& t : tris) area += tri_area(pts, t);
    CHECK(area == doctest::Approx(2.0));
}

TEST_CASE("single triangle is returned as itself") {
    std::vector<std::vector<Vec2>> loops = {{{0, 0}, {1, 0}, {0, 1}}};
    auto tris = triangulate_face(loops);
    REQUIRE(tris.size() == 1);
    CHECK(tri_area(concat(loops), tris[0]) == doctest::Approx(0.5));
}

TEST_CASE("square with square hole") {
    std::vector<std::vector<Vec2>> loops = {
        {{0, 0}, {4, 0}, {4, 4}, {0, 4}},
        {{1, 1}, {3, 1}, {3, 3}, {1, 3}},
    };
    auto tris = triangulate_face(loops);
    CHECK(tris.size() == 8);
    auto pts = concat(loops);
    double area = 0;
    for (const auto& t : tris) {
        double a = tri_area(pts, t);
        CHECK(a > 0.0);  // orientation follows the outer loop
        area += a;
    }
    CHECK(area == doctest::Approx(12.0));

    // constrained property: every input loop edge is a triangle edge
    std::set<std::pair<int, int>> tri_edges;
    for (const auto& t : tris)
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            tri_edges.insert({std::min(a, b), std::max(a, b)});
        }
    int base = 0;
    for (const auto& loop : loops) {
        int n = int(loop.size());
        for (int i = 0; i < n; ++i) {
            int a = base + i, b = base + (i + 1) % n;
            CHECK(tri_edges.count({std::min(a, b), std::max(a, b)}) == 1);
        }
        base += n;
    }
}

TEST_CASE("clockwise outer loop yields clockwise triangles") {
    std::vector<std::vector<Vec2>> loops = {{{0, 1}, {2, 1}, {2, 0}, {0, 0}}};
    auto tris = triangulate_face(loops);
    CHECK(tris.size() == 2);
    auto pts = concat(loops);
    for (const auto& t : tris) CHECK(tri_area(pts, t) < 0.0);
}

TEST_CASE("concave polygon triangulates with conserved area") {
    // L-shape
    std::vector<std::vector<Vec2>> loops = {
        {{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 3}, {0, 3}}};
    auto tris = triangulate_face(loops);
    CHECK(tris.size() == 4);
    auto pts = concat(loops);
    double area = 0;
    for (const auto& t : tris) area += tri_area(pts, t);
    CHECK(area == doctest::Approx(5.0));
}

TEST_CASE("two holes") {
    std::vector<std::vector<Vec2>> loops = {
        {{0, 0}, {8, 0}, {8, 4}, {0, 4}},
        {{1, 1}, {3, 1}, {3, 3}, {1, 3}},
        {{5, 1}, {7, 1}, {7, 3}, {5, 3}},
    };
    auto tris = triangulate_face(loops);
    auto pts = concat(loops);
    double area = 0;
    for (const auto& t : tris) area += tri_area(pts, t);
    CHECK(area == doctest::Approx(32.0 - 8.0));
}

TEST_CASE("self-intersecting loop is rejected") {
    std::vector<std::vector<Vec2>> bowtie = {{{0, 0}, {2, 2}, {2, 0}, {0, 2}}};
    CHECK_THROWS_AS(triangulate_face(bowtie), GeometryError);
}
