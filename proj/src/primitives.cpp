#include "chaincsg/primitives.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "chaincsg/errors.hpp"

namespace chaincsg {

LarModel cuboid_grid(int m, int n, int p) {
    if (m < 1 || n < 1 || p < 1) throw ValidationError("cuboid: all subdivisions must be >= 1");
    LarModel out;
    std::map<std::array<int, 3>, int> vid;
    auto vertex = [&](int x, int y, int z) {
        auto [it, fresh] = vid.insert({{x, y, z}, int(out.V.size())});
        if (fresh) out.V.push_back({double(x), double(y), double(z)});
        return it->second;
    };
    // quad helper: corners listed counterclockwise around the outward normal
    auto quad = [&](std::array<int, 3> a, std::array<int, 3> b, std::array<int, 3> c,
                    std::array<int, 3> d) {
        out.FV.push_back({vertex(a[0], a[1], a[2]), vertex(b[0], b[1], b[2]),
                          vertex(c[0], c[1], c[2]), vertex(d[0], d[1], d[2])});
    };
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < n; ++y) {
            quad({x, y, 0}, {x, y + 1, 0}, {x + 1, y + 1, 0}, {x + 1, y, 0});      // z = 0, -z out
            quad({x, y, p}, {x + 1, y, p}, {x + 1, y + 1, p}, {x, y + 1, p});      // z = p, +z out
        }
    for (int x = 0; x < m; ++x)
        for (int z = 0; z < p; ++z) {
            quad({x, 0, z}, {x + 1, 0, z}, {x + 1, 0, z + 1}, {x, 0, z + 1});      // y = 0, -y out
            quad({x, n, z}, {x, n, z + 1}, {x + 1, n, z + 1}, {x + 1, n, z});      // y = n, +y out
        }
    for (int y = 0; y < n; ++y)
        for (int z = 0; z < p; ++z) {
            quad({0, y, z}, {0, y, z + 1}, {0, y + 1, z + 1}, {0, y + 1, z});      // x = 0, -x out
            quad({m, y, z}, {m, y + 1, z}, {m, y + 1, z + 1}, {m, y, z + 1});      // x = m, +x out
        }
    out.EV = edges_from_faces(out.FV);
    return out;
}

LarModel cylinder_surface(int n, double r, double h, int k) {
    if (n < 3) throw ValidationError("cylinder: need at least 3 slices");
    if (k < 1) throw ValidationError("cylinder: need at least 1 column subdivision");
    if (r <= 0 || h <= 0) throw ValidationError("cylinder: radius and height must be positive");
    LarModel out;
    auto id = [&](int i, int j) { return j * n + i; };  // slice i, level j
    for (int j = 0; j <= k; ++j) {
        double z = -h / 2 + h * double(j) / k;
        for (int i = 0; i < n; ++i) {
            double a = 2 * std::numbers::pi * double(i) / n;
            out.V.push_back({r * std::cos(a), r * std::sin(a), z});
        }
    }
    // wall strips: up the next column, back along the top, down this column
    for (int i = 0; i < n; ++i) {
        int i1 = (i + 1) % n;
        std::vector<int> loop;
        loop.push_back(id(i, 0));
        for (int j = 0; j <= k; ++j) loop.push_back(id(i1, j));
        for (int j = k; j >= 1; --j) loop.push_back(id(i, j));
        out.FV.push_back(std::move(loop));
    }
    std::vector<int> bottom, top;
    for (int i = n - 1; i >= 0; --i) bottom.push_back(id(i, 0));
    for (int i = 0; i < n; ++i) top.push_back(id(i, k));
    out.FV.push_back(std::move(bottom));
    out.FV.push_back(std::move(top));
    out.EV = edges_from_faces(out.FV);
    return out;
}

LarModel sphere_surface(int n, int m, double r) {
    if (n < 3) throw ValidationError("sphere: need at least 3 slices");
    if (m < 2) throw ValidationError("sphere: need at least 2 stacks");
    if (r <= 0) throw ValidationError("sphere: radius must be positive");
    LarModel out;
    out.V.push_back({0, 0, r});   // north pole, id 0
    out.V.push_back({0, 0, -r});  // south pole, id 1
    auto id = [&](int i, int j) { return 2 + (j - 1) * n + (i % n); };  // ring j in 1..m-1
    for (int j = 1; j < m; ++j) {
        double phi = std::numbers::pi * double(j) / m;
        for (int i = 0; i < n; ++i) {
            double a = 2 * std::numbers::pi * double(i) / n;
            out.V.push_back(
                {r * std::sin(phi) * std::cos(a), r * std::sin(phi) * std::sin(a),
                 r * std::cos(phi)});
        }
    }
    for (int i = 0; i < n; ++i) {
        out.FV.push_back({0, id(i, 1), id(i + 1, 1)});          // north cap
        out.FV.push_back({1, id(i + 1, m - 1), id(i, m - 1)});  // south cap
        for (int j = 1; j + 1 < m; ++j) {
            out.FV.push_back({id(i, j), id(i, j + 1), id(i + 1, j + 1)});
            out.FV.push_back({id(i, j), id(i + 1, j + 1), id(i + 1, j)});
        }
    }
    out.EV = edges_from_faces(out.FV);
    return out;
}

}  // namespace chaincsg
