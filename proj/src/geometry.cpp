#include "chaincsg/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace chaincsg {

AffineMap AffineMap::identity() {
    AffineMap a;
    a.m = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
    return a;
}

AffineMap AffineMap::translation(double x, double y, double z) {
    AffineMap a = identity();
    a.m[3] = x;
    a.m[7] = y;
    a.m[11] = z;
    return a;
}

static AffineMap rot_x(double t) {
    AffineMap a = AffineMap::identity();
    a.m[5] = std::cos(t);  a.m[6] = -std::sin(t);
    a.m[9] = std::sin(t);  a.m[10] = std::cos(t);
    return a;
}

static AffineMap rot_y(double t) {
    AffineMap a = AffineMap::identity();
    a.m[0] = std::cos(t);   a.m[2] = std::sin(t);
    a.m[8] = -std::sin(t);  a.m[10] = std::cos(t);
    return a;
}

static AffineMap rot_z(double t) {
    AffineMap a = AffineMap::identity();
    a.m[0] = std::cos(t);  a.m[1] = -std::sin(t);
    a.m[4] = std::sin(t);  a.m[5] = std::cos(t);
    return a;
}

AffineMap AffineMap::rotation(double alpha, double beta, double gamma) {
    return rot_z(gamma) * rot_y(beta) * rot_x(alpha);
}

AffineMap AffineMap::scaling(double x, double y, double z) {
    AffineMap a = identity();
    a.m[0] = x;
    a.m[5] = y;
    a.m[10] = z;
    return a;
}

Vec3 AffineMap::apply(const Vec3& p) const {
    return {m[0] * p.x + m[1] * p.y + m[2] * p.z + m[3],
            m[4] * p.x + m[5] * p.y + m[6] * p.z + m[7],
            m[8] * p.x + m[9] * p.y + m[10] * p.z + m[11]};
}

double AffineMap::linear_det() const {
    return m[0] * (m[5] * m[10] - m[6] * m[9]) - m[1] * (m[4] * m[10] - m[6] * m[8]) +
           m[2] * (m[4] * m[9] - m[5] * m[8]);
}

AffineMap operator*(const AffineMap& a, const AffineMap& b) {
    AffineMap r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += a.m[i * 4 + k] * b.m[k * 4 + j];
            r.m[i * 4 + j] = s;
        }
    return r;
}

Vec3 newell_area_vector(std::span<const Vec3> loop) {
    Vec3 n{};
    size_t k = loop.size();
    for (size_t i = 0; i < k; ++i) {
        const Vec3& p = loop[i];
        const Vec3& q = loop[(i + 1) % k];
        n.x += (p.y - q.y) * (p.z + q.z);
        n.y += (p.z - q.z) * (p.x + q.x);
        n.z += (p.x - q.x) * (p.y + q.y);
    }
    return n * 0.5;
}

PlaneFrame plane_frame(std::span<const Vec3> loop) {
    if (loop.size() < 3) throw GeometryError("plane_frame: fewer than 3 vertices");

    Vec3 centroid{};
    for (const Vec3& p : loop) centroid = centroid + p;
    centroid = centroid / double(loop.size());

    Vec3 area = newell_area_vector(loop);
    double diameter = 0.0;
    for (const Vec3& p : loop) diameter = std::max(diameter, norm(p - centroid));
    diameter *= 2.0;

    double alen = norm(area);
    if (alen <= kPredicateTol * std::max(1.0, diameter * diameter))
        throw GeometryError("plane_frame: degenerate face (near-zero area)");

    PlaneFrame f;
    f.origin = centroid;
    f.n = area / alen;
    // pick the most orthogonal axis to seed the in-plane basis
    Vec3 seed = std::abs(f.n.x) <= std::abs(f.n.y)
                    ? (std::abs(f.n.x) <= std::abs(f.n.z) ? Vec3{1, 0, 0} : Vec3{0, 0, 1})
                    : (std::abs(f.n.y) <= std::abs(f.n.z) ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
    f.u = normalized(cross(f.n, seed));
    f.v = cross(f.n, f.u);

    for (const Vec3& p : loop)
        if (std::abs(f.height(p)) > 1e-6 * std::max(1.0, diameter))
            throw GeometryError("plane_frame: non-planar face (height residual too large)");
    return f;
}

double signed_area(std::span<const Vec2> loop) {
    double a = 0.0;
    size_t k = loop.size();
    for (size_t i = 0; i < k; ++i) a += cross(loop[i], loop[(i + 1) % k]);
    return 0.5 * a;
}

double dist_point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 d = b - a;
    double len2 = dot(d, d);
    if (len2 == 0.0) return norm(p - a);
    double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
    return norm(p - (a + d * t));
}

PointSide point_in_loops(const Vec2& p, std::span<const std::array<Vec2, 2>> segments,
                         double tol) {
    for (const auto& s : segments)
        if (dist_point_segment(p, s[0], s[1]) <= tol) return PointSide::OnBoundary;

    // crossing parity of the ray x -> +inf at height p.y, half-open in y so
    // vertices on the ray are counted once
    int crossings = 0;
    for (const auto& s : segments) {
        Vec2 a = s[0], b = s[1];
        if ((a.y <= p.y) == (b.y <= p.y)) continue;
        double xhit = a.x + (b.x - a.x) * (p.y - a.y) / (b.y - a.y);
        if (xhit > p.x) ++crossings;
    }
    return (crossings & 1) ? PointSide::Inside : PointSide::Outside;
}

PointSide point_in_polygon(const Vec2& p, std::span<const Vec2> loop, double tol) {
    std::vector<std::array<Vec2, 2>> segs;
    segs.reserve(loop.size());
    for (size_t i = 0; i < loop.size(); ++i)
        segs.push_back({loop[i], loop[(i + 1) % loop.size()]});
    return point_in_loops(p, segs, tol);
}

RayHit ray_triangle(const Vec3& orig, const Vec3& dir, const Vec3& a, const Vec3& b,
                    const Vec3& c, double len_tol) {
    constexpr double kBary = 1e-9;  // dimensionless margin near edges
    Vec3 e1 = b - a, e2 = c - a;
    Vec3 tv = orig - a;
    Vec3 pv = cross(dir, e2);
    double det = dot(e1, pv);
    double scale = norm(e1) * norm(e2);
    if (scale == 0.0) return RayHit::Miss;  // zero-area triangle
    if (std::abs(det) <= 1e-12 * scale) {
        // ray parallel to the plane: degenerate only when grazing the slab
        Vec3 n = cross(e1, e2);
        double nn = norm(n);
        if (nn <= 1e-12 * scale) return RayHit::Miss;
        return std::abs(dot(tv, n / nn)) <= len_tol ? RayHit::Degenerate : RayHit::Miss;
    }
    double inv = 1.0 / det;
    Vec3 qv = cross(tv, e1);
    double u = dot(tv, pv) * inv;
    double v = dot(dir, qv) * inv;
    double t = dot(e2, qv) * inv;
    if (u < -kBary || v < -kBary || u + v > 1.0 + kBary) return RayHit::Miss;
    if (t < -len_tol) return RayHit::Miss;
    if (t <= len_tol) return RayHit::Degenerate;  // origin sits on the patch
    if (u <= kBary || v <= kBary || u + v >= 1.0 - kBary) return RayHit::Degenerate;
    return RayHit::Hit;
}

}  // namespace chaincsg
