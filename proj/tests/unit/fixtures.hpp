#pragma once

// Shared hand-built test models.

#include <array>
#include <vector>

#include "chaincsg/lar.hpp"

namespace fixtures {

// 3x3 square with a unit square window: 12 vertices, 14 edges, 3 faces
// (two C-shaped side faces + the inner square).
inline chaincsg::LarModel data1() {
    chaincsg::LarModel m;
    m.dim = 2;
    const double xs[12] = {0, 1.5, 3, 1, 1.5, 2, 1, 1.5, 2, 0, 1.5, 3};
    const double ys[12] = {0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3};
    for (int i = 0; i < 12; ++i) m.V.push_back({xs[i], ys[i], 0.0});
    const int ev[14][2] = {{1, 2},  {2, 3},  {4, 5},  {5, 6}, {7, 8},  {8, 9},  {10, 11},
                           {11, 12}, {1, 10}, {4, 7},  {6, 9}, {3, 12}, {2, 5},  {8, 11}};
    for (auto& e : ev) m.EV.push_back({e[0] - 1, e[1] - 1});
    m.FV = {{0, 1, 3, 4, 6, 7, 9, 10}, {1, 2, 4, 5, 7, 8, 10, 11}, {3, 4, 5, 6, 7, 8}};
    return m;
}

// signed 2-boundary of data1 faces, oriented counterclockwise (hand check)
inline chaincsg::SparseMatrix data1_d2() {
    using chaincsg::Triplet;
    std::vector<Triplet> ts = {
        {0, 0, +1}, {2, 0, -1}, {4, 0, +1}, {6, 0, -1},
        {8, 0, -1}, {9, 0, +1}, {12, 0, +1}, {13, 0, +1},
        {1, 1, +1}, {3, 1, -1}, {5, 1, +1}, {7, 1, -1},
        {10, 1, -1}, {11, 1, +1}, {12, 1, -1}, {13, 1, -1},
        {2, 2, +1}, {3, 2, +1}, {4, 2, -1}, {5, 2, -1},
        {9, 2, -1}, {10, 2, +1},
    };
    return chaincsg::SparseMatrix::from_triplets(14, 3, ts);
}

}  // namespace fixtures
