#pragma once

#include <span>
#include <string>
#include <vector>

#include "chaincsg/geometry.hpp"

namespace chaincsg {

// Static 3-d kd-tree for fixed-radius neighbor queries.
class KdTree {
public:
    KdTree() = default;
    explicit KdTree(std::span<const Vec3> pts);

    void query_ball(const Vec3& p, double r, std::vector<int>& out) const;

private:
    struct Node {
        int pt = -1;
        int axis = 0;
        int left = -1, right = -1;
    };
    std::vector<Node> nodes_;
    std::vector<Vec3> pts_;
    int root_ = -1;

    int build(std::vector<int>& ids, int b, int e, int depth);
    void collect(int n, const Vec3& p, double r, std::vector<int>& out) const;
};

struct ClusterResult {
    std::vector<std::vector<int>> clusters;  // member point ids, each sorted
    std::vector<Vec3> representatives;       // cluster centroids
    std::vector<int> point_cluster;          // point id -> cluster id
    std::vector<std::string> warnings;       // clusters whose diameter exceeds 2*eps
};

// Partition by the transitive closure of pairwise distance <= eps, found by
// radius-eps kd queries seeded at every point. Chained clusters wider than
// 2*eps are reported in warnings, not failed.
ClusterResult kd_nearest_within(std::span<const Vec3> pts, double eps);

}  // namespace chaincsg
