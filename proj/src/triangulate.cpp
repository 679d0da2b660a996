#include "chaincsg/triangulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chaincsg {

namespace {

struct PolyVert {
    Vec2 p;
    int orig;
};

double tri_cross(const Vec2& a, const Vec2& b, const Vec2& c) {
    return cross(b - a, c - a);
}

// proper or improper crossing of non-adjacent segments, with tolerance
bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double atol,
                    double ltol) {
    double d1 = tri_cross(c, d, a);
    double d2 = tri_cross(c, d, b);
    double d3 = tri_cross(a, b, c);
    double d4 = tri_cross(a, b, d);
    if (((d1 > atol && d2 < -atol) || (d1 < -atol && d2 > atol)) &&
        ((d3 > atol && d4 < -atol) || (d3 < -atol && d4 > atol)))
        return true;
    // touching or collinear-overlapping counts as self-intersection too
    auto on = [&](const Vec2& p, const Vec2& q, const Vec2& r) {
        return std::abs(tri_cross(p, q, r)) <= atol && std::min(p.x, q.x) - ltol <= r.x &&
               r.x <= std::max(p.x, q.x) + ltol && std::min(p.y, q.y) - ltol <= r.y &&
               r.y <= std::max(p.y, q.y) + ltol;
    };
    return on(a, b, c) || on(a, b, d) || on(c, d, a) || on(c, d, b);
}

void check_simple(const std::vector<Vec2>& loop, double atol, double ltol) {
    size_t k = loop.size();
    if (k < 3) throw GeometryError("triangulate_face: loop with fewer than 3 vertices");
    for (size_t i = 0; i < k; ++i)
        for (size_t j = i + 1; j < k; ++j) {
            // skip adjacent segments (they share an endpoint)
            if (j == i + 1 || (i == 0 && j == k - 1)) continue;
            if (segments_cross(loop[i], loop[(i + 1) % k], loop[j], loop[(j + 1) % k], atol, ltol))
                throw GeometryError("triangulate_face: self-intersecting loop");
        }
}

// splice one hole into the polygon through a visible bridge (ear-clipping
// hole-cut construction); polygon counterclockwise, hole clockwise
void splice_hole(std::vector<PolyVert>& poly, const std::vector<PolyVert>& hole, double atol,
                 double ltol) {
    // hole vertex with maximum x
    size_t mi = 0;
    for (size_t i = 1; i < hole.size(); ++i) {
        if (hole[i].p.x > hole[mi].p.x ||
            (hole[i].p.x == hole[mi].p.x && hole[i].p.y < hole[mi].p.y))
            mi = i;
    }
    Vec2 m = hole[mi].p;

    // nearest intersection of the ray m + t*(1,0) with polygon edges
    double best_x = std::numeric_limits<double>::infinity();
    size_t best_edge = size_t(-1);
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = poly[i].p;
        const Vec2& b = poly[(i + 1) % n].p;
        if ((a.y <= m.y) == (b.y <= m.y)) continue;
        double xhit = a.x + (b.x - a.x) * (m.y - a.y) / (b.y - a.y);
        if (xhit >= m.x - ltol && xhit < best_x) {
            best_x = xhit;
            best_edge = i;
        }
    }
    if (best_edge == size_t(-1))
        throw GeometryError("triangulate_face: hole is not inside the outer loop");

    // candidate bridge endpoint: the intersected edge's endpoint of larger x
    size_t pa = best_edge, pb = (best_edge + 1) % n;
    size_t cand = poly[pa].p.x > poly[pb].p.x ? pa : pb;
    Vec2 ip{best_x, m.y};

    // any reflex vertex inside triangle (m, ip, cand) hides the candidate;
    // take the one with the smallest angle from the ray, then the closest
    Vec2 c = poly[cand].p;
    size_t bridge = cand;
    double best_angle = std::numeric_limits<double>::infinity();
    double best_dist = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        if (i == cand) continue;
        const Vec2& prev = poly[(i + n - 1) % n].p;
        const Vec2& cur = poly[i].p;
        const Vec2& next = poly[(i + 1) % n].p;
        if (tri_cross(prev, cur, next) > -atol) continue;  // only reflex vertices block
        double s1 = tri_cross(m, ip, cur);
        double s2 = tri_cross(ip, c, cur);
        double s3 = tri_cross(c, m, cur);
        bool inside = (s1 >= -atol && s2 >= -atol && s3 >= -atol) ||
                      (s1 <= atol && s2 <= atol && s3 <= atol);
        if (!inside) continue;
        Vec2 d = cur - m;
        double angle = std::abs(std::atan2(d.y, d.x));
        double dist = norm(d);
        if (angle < best_angle - 1e-15 ||
            (std::abs(angle - best_angle) <= 1e-15 && dist < best_dist)) {
            best_angle = angle;
            best_dist = dist;
            bridge = i;
        }
    }

    // rebuild: ... bridge, [hole from mi all the way around], mi dup, bridge dup, ...
    std::vector<PolyVert> merged;
    merged.reserve(poly.size() + hole.size() + 2);
    for (size_t i = 0; i <= bridge; ++i) merged.push_back(poly[i]);
    for (size_t i = 0; i < hole.size(); ++i) merged.push_back(hole[(mi + i) % hole.size()]);
    merged.push_back(hole[mi]);
    merged.push_back(poly[bridge]);
    for (size_t i = bridge + 1; i < poly.size(); ++i) merged.push_back(poly[i]);
    poly = std::move(merged);
}

}  // namespace

std::vector<std::array<int, 3>> triangulate_face(std::span<const std::vector<Vec2>> loops) {
    if (loops.empty()) throw GeometryError("triangulate_face: no loops");

    Box2 bb;
    size_t total = 0;
    for (const auto& loop : loops) {
        total += loop.size();
        for (const Vec2& p : loop) bb.expand(p);
    }
    double scale = std::max(1.0, bb.diagonal());
    double ltol = kPredicateTol * scale;
    double atol = kPredicateTol * scale * scale;

    for (const auto& loop : loops) check_simple(loop, atol, ltol);

    double outer_area = signed_area(loops[0]);
    bool flip = outer_area < 0.0;

    // mirror y when the outer loop runs clockwise; index order then yields
    // the original orientation again on output
    int base = 0;
    std::vector<PolyVert> poly;
    std::vector<std::vector<PolyVert>> holes;
    double target_area = std::abs(outer_area);
    for (size_t li = 0; li < loops.size(); ++li) {
        std::vector<PolyVert> vs(loops[li].size());
        for (size_t i = 0; i < loops[li].size(); ++i) {
            Vec2 p = loops[li][i];
            if (flip) p.y = -p.y;
            vs[i] = {p, base + int(i)};
        }
        if (li == 0) {
            poly = std::move(vs);
        } else {
            double a = signed_area(loops[li]) * (flip ? -1.0 : 1.0);
            if (a > 0.0) std::reverse(vs.begin(), vs.end());  // holes run clockwise
            target_area -= std::abs(a);
            holes.push_back(std::move(vs));
        }
        base += int(loops[li].size());
    }
    if (target_area < -atol) throw GeometryError("triangulate_face: holes exceed outer area");

    // splice holes right to left so bridges never cross earlier ones
    std::sort(holes.begin(), holes.end(), [](const auto& a, const auto& b) {
        double ax = -std::numeric_limits<double>::infinity();
        double bx = ax;
        for (const auto& v : a) ax = std::max(ax, v.p.x);
        for (const auto& v : b) bx = std::max(bx, v.p.x);
        return ax > bx;
    });
    for (const auto& h : holes) splice_hole(poly, h, atol, ltol);

    std::vector<std::array<int, 3>> tris;
    tris.reserve(poly.size());
    double area_sum = 0.0;

    auto emit = [&](const PolyVert& a, const PolyVert& b, const PolyVert& c) {
        double ar = 0.5 * tri_cross(a.p, b.p, c.p);
        if (std::abs(ar) <= atol) return;  // skip slivers along bridge cuts
        area_sum += ar;
        tris.push_back({a.orig, b.orig, c.orig});
    };

    while (poly.size() > 3) {
        size_t n = poly.size();
        // collapse spurs first: v,x,v patterns left by stacked bridges
        bool collapsed = false;
        for (size_t i = 0; i < n; ++i) {
            const Vec2& prev = poly[(i + n - 1) % n].p;
            const Vec2& next = poly[(i + 1) % n].p;
            if (norm(prev - next) <= ltol) {
                size_t kill_hi = std::max(i, (i + 1) % n);
                size_t kill_lo = std::min(i, (i + 1) % n);
                poly.erase(poly.begin() + kill_hi);
                poly.erase(poly.begin() + kill_lo);
                collapsed = true;
                break;
            }
        }
        if (collapsed) {
            if (poly.size() < 3) break;
            continue;
        }

        bool clipped = false;
        for (size_t i = 0; i < n && !clipped; ++i) {
            const PolyVert& a = poly[(i + n - 1) % n];
            const PolyVert& b = poly[i];
            const PolyVert& c = poly[(i + 1) % n];
            double cr = tri_cross(a.p, b.p, c.p);
            if (cr <= atol) continue;  // reflex or degenerate corner
            bool blocked = false;
            for (size_t j = 0; j < n && !blocked; ++j) {
                if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
                const Vec2& prev = poly[(j + n - 1) % n].p;
                const Vec2& cur = poly[j].p;
                const Vec2& next = poly[(j + 1) % n].p;
                if (tri_cross(prev, cur, next) > -atol) continue;  // convex cannot block
                if (norm(cur - a.p) <= ltol || norm(cur - b.p) <= ltol || norm(cur - c.p) <= ltol)
                    continue;  // bridge duplicates share positions with the ear
                if (tri_cross(a.p, b.p, cur) >= -atol && tri_cross(b.p, c.p, cur) >= -atol &&
                    tri_cross(c.p, a.p, cur) >= -atol)
                    blocked = true;
            }
            if (blocked) continue;
            emit(a, b, c);
            poly.erase(poly.begin() + i);
            clipped = true;
        }
        if (!clipped) throw GeometryError("triangulate_face: ear clipping got stuck");
    }
    if (poly.size() == 3) emit(poly[0], poly[1], poly[2]);

    double slack = 1e-9 * std::max(1.0, target_area) + atol * double(total + 8);
    if (std::abs(area_sum - target_area) > slack)
        throw GeometryError("triangulate_face: area not conserved (" + std::to_string(area_sum) +
                            " vs " + std::to_string(target_area) + ")");
    return tris;
}

}  // namespace chaincsg
