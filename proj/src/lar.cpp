#include "chaincsg/lar.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace chaincsg {

void validate_model(const LarModel& m, const std::string& name) {
    int n = int(m.V.size());
    if (m.dim != 2 && m.dim != 3)
        throw ValidationError("model " + name + ": dimension must be 2 or 3");
    for (const auto& e : m.EV) {
        if (e[0] < 0 || e[0] >= n || e[1] < 0 || e[1] >= n)
            throw ValidationError("model " + name + ": edge index out of range");
        if (e[0] == e[1]) throw ValidationError("model " + name + ": zero-length edge");
    }
    for (const auto& f : m.FV) {
        std::set<int> distinct(f.begin(), f.end());
        if (distinct.size() < 3)
            throw ValidationError("model " + name + ": face with fewer than 3 distinct vertices");
        for (int v : f)
            if (v < 0 || v >= n)
                throw ValidationError("model " + name + ": face index out of range");
    }
}

void validate_watertight(const LarModel& m, const std::string& name) {
    std::map<std::pair<int, int>, int> uses;
    for (const auto& f : m.FV) {
        size_t k = f.size();
        for (size_t i = 0; i < k; ++i) {
            int a = f[i], b = f[(i + 1) % k];
            ++uses[{std::min(a, b), std::max(a, b)}];
        }
    }
    for (const auto& [e, count] : uses)
        if (count != 2)
            throw ValidationError("model " + name + ": not watertight, edge (" +
                                  std::to_string(e.first + 1) + "," + std::to_string(e.second + 1) +
                                  ") used " + std::to_string(count) + " times");
}

SparseMatrix characteristic_matrix(std::span<const std::vector<int>> cells, int nverts) {
    std::vector<Triplet> ts;
    for (size_t k = 0; k < cells.size(); ++k) {
        std::set<int> seen;
        for (int v : cells[k]) {
            if (v < 0) throw ValidationError("characteristic_matrix: negative vertex index");
            if (!seen.insert(v).second)
                throw ValidationError("characteristic_matrix: duplicate vertex in cell " +
                                      std::to_string(k + 1));
            ts.push_back({int(k), v, 1});
        }
    }
    return SparseMatrix::from_triplets(int(cells.size()), nverts, ts);
}

SparseMatrix characteristic_matrix(std::span<const std::vector<int>> cells) {
    int n = 0;
    for (const auto& c : cells)
        for (int v : c) n = std::max(n, v + 1);
    return characteristic_matrix(cells, n);
}

SparseMatrix characteristic_matrix(std::span<const std::array<int, 2>> cells, int nverts) {
    std::vector<std::vector<int>> as_lists;
    as_lists.reserve(cells.size());
    for (const auto& c : cells) as_lists.push_back({c[0], c[1]});
    return characteristic_matrix(as_lists, nverts);
}

SparseMatrix unsigned_boundary2(const SparseMatrix& k1, const SparseMatrix& k2) {
    if (k1.cols() != k2.cols())
        throw ValidationError("unsigned_boundary2: vertex column spaces differ");
    return k1.multiply(k2.transpose()).filter_equal(2);
}

SparseMatrix boundary1(std::span<const std::array<int, 2>> ev, int nverts) {
    std::vector<Triplet> ts;
    ts.reserve(ev.size() * 2);
    for (size_t e = 0; e < ev.size(); ++e) {
        ts.push_back({ev[e][0], int(e), -1});
        ts.push_back({ev[e][1], int(e), +1});
    }
    return SparseMatrix::from_triplets(nverts, int(ev.size()), ts);
}

std::vector<int> apply_boundary(const SparseMatrix& d, std::span<const int> chain) {
    return d.apply(chain);
}

std::vector<int> mod2(std::vector<int> v) {
    for (int& x : v) x = ((x % 2) + 2) % 2;
    return v;
}

ExactnessResult check_exactness(const SparseMatrix& dp, const SparseMatrix& dp1) {
    SparseMatrix prod = dp.multiply(dp1);
    if (prod.is_zero()) return {};
    return {false, prod.first_entry()};
}

long long euler_characteristic(std::span<const long long> counts) {
    long long chi = 0;
    int sign = 1;
    for (long long c : counts) {
        chi += sign * c;
        sign = -sign;
    }
    return chi;
}

LarModel transformed(const LarModel& m, const AffineMap& a) {
    LarModel out = m;
    for (Vec3& p : out.V) p = a.apply(p);
    return out;
}

LarModel merge_models(std::span<const LarModel> models) {
    LarModel out;
    if (models.empty()) return out;
    out.dim = models[0].dim;
    for (const LarModel& m : models) {
        if (m.dim != out.dim) throw ValidationError("merge_models: mixed dimensions");
        int off = int(out.V.size());
        out.V.insert(out.V.end(), m.V.begin(), m.V.end());
        for (const auto& e : m.EV) out.EV.push_back({e[0] + off, e[1] + off});
        for (const auto& f : m.FV) {
            std::vector<int> g;
            g.reserve(f.size());
            for (int v : f) g.push_back(v + off);
            out.FV.push_back(std::move(g));
        }
    }
    return out;
}

std::vector<std::array<int, 2>> edges_from_faces(std::span<const std::vector<int>> fv) {
    std::vector<std::array<int, 2>> ev;
    std::set<std::array<int, 2>> seen;
    for (const auto& f : fv) {
        size_t k = f.size();
        for (size_t i = 0; i < k; ++i) {
            int a = f[i], b = f[(i + 1) % k];
            std::array<int, 2> e{std::min(a, b), std::max(a, b)};
            if (a != b && seen.insert(e).second) ev.push_back(e);
        }
    }
    return ev;
}

}  // namespace chaincsg
