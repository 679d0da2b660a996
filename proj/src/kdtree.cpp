#include "chaincsg/kdtree.hpp"

#include <algorithm>
#include <numeric>

namespace chaincsg {

KdTree::KdTree(std::span<const Vec3> pts) : pts_(pts.begin(), pts.end()) {
    std::vector<int> ids(pts.size());
    std::iota(ids.begin(), ids.end(), 0);
    nodes_.reserve(pts.size());
    root_ = build(ids, 0, int(ids.size()), 0);
}

int KdTree::build(std::vector<int>& ids, int b, int e, int depth) {
    if (b >= e) return -1;
    int axis = depth % 3;
    int mid = (b + e) / 2;
    std::nth_element(ids.begin() + b, ids.begin() + mid, ids.begin() + e, [&](int a, int c) {
        const double* pa = &pts_[a].x;
        const double* pc = &pts_[c].x;
        return pa[axis] != pc[axis] ? pa[axis] < pc[axis] : a < c;
    });
    int n = int(nodes_.size());
    nodes_.push_back({ids[mid], axis, -1, -1});
    int l = build(ids, b, mid, depth + 1);
    int r = build(ids, mid + 1, e, depth + 1);
    nodes_[n].left = l;
    nodes_[n].right = r;
    return n;
}

void KdTree::query_ball(const Vec3& p, double r, std::vector<int>& out) const {
    collect(root_, p, r, out);
}

void KdTree::collect(int n, const Vec3& p, double r, std::vector<int>& out) const {
    if (n < 0) return;
    const Node& nd = nodes_[n];
    const Vec3& q = pts_[nd.pt];
    if (norm(q - p) <= r) out.push_back(nd.pt);
    double delta = (&p.x)[nd.axis] - (&q.x)[nd.axis];
    if (delta <= r) collect(nd.left, p, r, out);
    if (delta >= -r) collect(nd.right, p, r, out);
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

ClusterResult kd_nearest_within(std::span<const Vec3> pts, double eps) {
    ClusterResult res;
    int n = int(pts.size());
    res.point_cluster.assign(n, -1);
    if (n == 0) return res;

    KdTree tree(pts);
    UnionFind uf(n);
    std::vector<int> near;
    for (int i = 0; i < n; ++i) {
        near.clear();
        tree.query_ball(pts[i], eps, near);
        for (int j : near) uf.unite(i, j);
    }

    std::vector<int> root_to_cluster(n, -1);
    for (int i = 0; i < n; ++i) {
        int r = uf.find(i);
        if (root_to_cluster[r] < 0) {
            root_to_cluster[r] = int(res.clusters.size());
            res.clusters.emplace_back();
        }
        int c = root_to_cluster[r];
        res.point_cluster[i] = c;
        res.clusters[c].push_back(i);
    }

    res.representatives.resize(res.clusters.size());
    for (size_t c = 0; c < res.clusters.size(); ++c) {
        Vec3 sum{};
        for (int i : res.clusters[c]) sum = sum + pts[i];
        res.representatives[c] = sum / double(res.clusters[c].size());

        double diam = 0.0;
        const auto& members = res.clusters[c];
        if (members.size() > 256) {
            // bbox diagonal as an upper-bound proxy for huge clusters
            Box3 bb;
            for (int i : members) bb.expand(pts[i]);
            diam = bb.diagonal();
        } else {
            for (size_t a = 0; a < members.size(); ++a)
                for (size_t b = a + 1; b < members.size(); ++b)
                    diam = std::max(diam, norm(pts[members[a]] - pts[members[b]]));
        }
        if (diam > 2.0 * eps * (1.0 + 1e-12))
            res.warnings.push_back("cluster " + std::to_string(c) + " diameter " +
                                   std::to_string(diam) + " exceeds 2*epsilon");
    }
    return res;
}

}  // namespace chaincsg
