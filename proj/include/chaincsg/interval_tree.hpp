#pragma once

#include <array>
#include <span>
#include <vector>

#include "chaincsg/geometry.hpp"

namespace chaincsg {

// Static augmented interval tree: balanced BST over intervals sorted by low
// endpoint, nodes carry the subtree max of high endpoints.
class IntervalTree {
public:
    IntervalTree() = default;
    explicit IntervalTree(std::span<const std::array<double, 2>> intervals);

    // ids of stored intervals [lo,hi] with lo <= qhi and qlo <= hi
    void query(double qlo, double qhi, std::vector<int>& out) const;

private:
    struct Node {
        int id = -1;
        double lo = 0, hi = 0, maxhi = 0;
        int left = -1, right = -1;
    };
    std::vector<Node> nodes_;
    int root_ = -1;

    int build(std::vector<int>& ids, int b, int e, std::span<const std::array<double, 2>> iv);
    void collect(int n, double qlo, double qhi, std::vector<int>& out) const;
};

// One interval tree per axis; a box query intersects the per-axis results.
class IntervalTreeSet {
public:
    IntervalTreeSet() = default;
    static IntervalTreeSet build(std::span<const Box3> boxes);
    static IntervalTreeSet build(std::span<const Box2> boxes);

    std::vector<int> query(const Box3& b) const;
    std::vector<int> query(const Box2& b) const;

    int size() const { return n_; }

private:
    int dim_ = 3;
    int n_ = 0;
    std::array<IntervalTree, 3> axes_;

    std::vector<int> query_axes(const double* lo, const double* hi, int dim) const;
};

}  // namespace chaincsg
