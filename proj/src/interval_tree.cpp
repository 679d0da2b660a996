#include "chaincsg/interval_tree.hpp"

#include <algorithm>

namespace chaincsg {

IntervalTree::IntervalTree(std::span<const std::array<double, 2>> intervals) {
    std::vector<int> ids(intervals.size());
    for (size_t i = 0; i < ids.size(); ++i) ids[i] = int(i);
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        return intervals[a][0] != intervals[b][0] ? intervals[a][0] < intervals[b][0] : a < b;
    });
    nodes_.reserve(intervals.size());
    root_ = build(ids, 0, int(ids.size()), intervals);
}

int IntervalTree::build(std::vector<int>& ids, int b, int e,
                        std::span<const std::array<double, 2>> iv) {
    if (b >= e) return -1;
    int mid = (b + e) / 2;
    int n = int(nodes_.size());
    nodes_.push_back({});
    nodes_[n].id = ids[mid];
    nodes_[n].lo = iv[ids[mid]][0];
    nodes_[n].hi = iv[ids[mid]][1];
    nodes_[n].maxhi = nodes_[n].hi;
    int l = build(ids, b, mid, iv);
    int r = build(ids, mid + 1, e, iv);
    nodes_[n].left = l;
    nodes_[n].right = r;
    if (l >= 0) nodes_[n].maxhi = std::max(nodes_[n].maxhi, nodes_[l].maxhi);
    if (r >= 0) nodes_[n].maxhi = std::max(nodes_[n].maxhi, nodes_[r].maxhi);
    return n;
}

void IntervalTree::query(double qlo, double qhi, std::vector<int>& out) const {
    collect(root_, qlo, qhi, out);
}

void IntervalTree::collect(int n, double qlo, double qhi, std::vector<int>& out) const {
    if (n < 0) return;
    const Node& nd = nodes_[n];
    if (nd.maxhi < qlo) return;  // nothing in this subtree reaches the query
    collect(nd.left, qlo, qhi, out);
    if (nd.lo <= qhi && qlo <= nd.hi) out.push_back(nd.id);
    if (nd.lo <= qhi) collect(nd.right, qlo, qhi, out);
}

IntervalTreeSet IntervalTreeSet::build(std::span<const Box3> boxes) {
    IntervalTreeSet s;
    s.dim_ = 3;
    s.n_ = int(boxes.size());
    for (int ax = 0; ax < 3; ++ax) {
        std::vector<std::array<double, 2>> iv(boxes.size());
        for (size_t i = 0; i < boxes.size(); ++i) {
            const double* lo = &boxes[i].lo.x;
            const double* hi = &boxes[i].hi.x;
            iv[i] = {lo[ax], hi[ax]};
        }
        s.axes_[ax] = IntervalTree(iv);
    }
    return s;
}

IntervalTreeSet IntervalTreeSet::build(std::span<const Box2> boxes) {
    IntervalTreeSet s;
    s.dim_ = 2;
    s.n_ = int(boxes.size());
    for (int ax = 0; ax < 2; ++ax) {
        std::vector<std::array<double, 2>> iv(boxes.size());
        for (size_t i = 0; i < boxes.size(); ++i) {
            const double* lo = &boxes[i].lo.x;
            const double* hi = &boxes[i].hi.x;
            iv[i] = {lo[ax], hi[ax]};
        }
        s.axes_[ax] = IntervalTree(iv);
    }
    return s;
}

std::vector<int> IntervalTreeSet::query_axes(const double* lo, const double* hi, int dim) const {
    std::vector<int> result;
    for (int ax = 0; ax < dim; ++ax) {
        std::vector<int> ids;
        axes_[ax].query(lo[ax], hi[ax], ids);
        std::sort(ids.begin(), ids.end());
        if (ax == 0) {
            result = std::move(ids);
        } else {
            std::vector<int> merged;
            std::set_intersection(result.begin(), result.end(), ids.begin(), ids.end(),
                                  std::back_inserter(merged));
            result = std::move(merged);
        }
        if (result.empty()) break;
    }
    return result;
}

std::vector<int> IntervalTreeSet::query(const Box3& b) const {
    return query_axes(&b.lo.x, &b.hi.x, 3);
}

std::vector<int> IntervalTreeSet::query(const Box2& b) const {
    return query_axes(&b.lo.x, &b.hi.x, 2);
}

}  // namespace chaincsg
