#include "doctest.h"

#include <random>

#include "chaincsg/interval_tree.hpp"
#include "chaincsg/kdtree.hpp"

using namespace chaincsg;

TEST_CASE("disjoint and nested boxes") {
    std::vector<Box3> boxes(3);
    boxes[0].expand({0, 0, 0});
    boxes[0].expand({1, 1, 1});
    boxes[1].expand({10, 0, 0});
    boxes[1].expand({11, 1, 1});
    boxes[2].expand({0.25, 0.25, 0.25});  // nested in box 0
    boxes[2].expand({0.5, 0.5, 0.5});

    IntervalTreeSet idx = IntervalTreeSet::build(boxes);
    CHECK(idx.query(boxes[1]) == std::vector<int>{1});
    CHECK(idx.query(boxes[0]) == std::vector<int>{0, 2});
    CHECK(idx.query(boxes[2]) == std::vector<int>{0, 2});
}

TEST_CASE("random boxes agree with brute force") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    std::vector<Box3> boxes(100);
    for (auto& b : boxes) {
        Vec3 p{u(rng), u(rng), u(rng)};
        Vec3 q{u(rng), u(rng), u(rng)};
        b.expand(p);
        b.expand(q);
    }
    IntervalTreeSet idx = IntervalTreeSet::build(boxes);
    for (int trial = 0; trial < 50; ++trial) {
        Box3 q;
        q.expand({u(rng), u(rng), u(rng)});
        q.expand({u(rng), u(rng), u(rng)});
        std::vector<int> expect;
        for (int i = 0; i < 100; ++i)
            if (boxes[i].overlaps(q)) expect.push_back(i);
        CHECK(idx.query(q) == expect);
    }
}

TEST_CASE("2d index variant") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    std::vector<Box2> boxes(60);
    for (auto& b : boxes) {
        b.expand({u(rng), u(rng)});
        b.expand({u(rng), u(rng)});
    }
    IntervalTreeSet idx = IntervalTreeSet::build(boxes);
    for (int trial = 0; trial < 30; ++trial) {
        Box2 q;
        q.expand({u(rng), u(rng)});
        q.expand({u(rng), u(rng)});
        std::vector<int> expect;
        for (int i = 0; i < 60; ++i)
            if (boxes[i].overlaps(q)) expect.push_back(i);
        CHECK(idx.query(q) == expect);
    }
}

TEST_CASE("empty index") {
    IntervalTreeSet idx = IntervalTreeSet::build(std::span<const Box3>{});
    Box3 q;
    q.expand({0, 0, 0});
    CHECK(idx.query(q).empty());
}

TEST_CASE("near points cluster, far points do not") {
    std::vector<Vec3> two = {{0, 0, 0}, {1e-9, 0, 0}};
    ClusterResult r = kd_nearest_within(two, 1e-6);
    CHECK(r.clusters.size() == 1);
    CHECK(norm(r.representatives[0] - Vec3{0.5e-9, 0, 0}) < 1e-12);

    std::vector<Vec3> far = {{0, 0, 0}, {1, 0, 0}};
    CHECK(kd_nearest_within(far, 1e-6).clusters.size() == 2);
}

TEST_CASE("jittered copies of known sites recover the sites") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> jitter(-1e-8, 1e-8);
    std::vector<Vec3> sites;
    for (int i = 0; i < 10; ++i) sites.push_back({double(i % 5), double(i / 5), 0.5 * i});
    std::vector<Vec3> pts;
    for (int copy = 0; copy < 50; ++copy)
        for (const Vec3& s : sites) pts.push_back(s + Vec3{jitter(rng), jitter(rng), jitter(rng)});

    ClusterResult r = kd_nearest_within(pts, 1e-6);
    REQUIRE(r.clusters.size() == 10);
    for (const auto& c : r.clusters) CHECK(c.size() == 50);
    CHECK(r.warnings.empty());
    // every representative is within jitter of one site
    for (const Vec3& rep : r.representatives) {
        double best = 1e9;
        for (const Vec3& s : sites) best = std::min(best, norm(rep - s));
        CHECK(best < 1e-8);
    }
}

TEST_CASE("chained cluster wider than 2 epsilon is flagged") {
    std::vector<Vec3> chain;
    for (int i = 0; i < 5; ++i) chain.push_back({i * 0.9e-6, 0, 0});
    ClusterResult r = kd_nearest_within(chain, 1e-6);
    CHECK(r.clusters.size() == 1);
    CHECK(r.warnings.size() == 1);
}
