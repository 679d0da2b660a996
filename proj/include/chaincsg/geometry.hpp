#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "chaincsg/errors.hpp"

namespace chaincsg {

// Default tolerances. epsilon drives vertex identification, the predicate
// tolerance drives sidedness/degeneracy tests; both are overridable per run.
inline constexpr double kVertexEps = 1e-6;
inline constexpr double kPredicateTol = 1e-9;

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    bool operator==(const Vec2&) const = default;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
// z-component of the 3D cross product of embedded 2D vectors
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    bool operator==(const Vec3&) const = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) {
    double n = norm(a);
    if (n == 0.0) throw GeometryError("cannot normalize zero vector");
    return a / n;
}

struct Box2 {
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

    bool empty() const { return lo.x > hi.x; }
    void expand(const Vec2& p) {
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y);
    }
    void merge(const Box2& b) { expand(b.lo); expand(b.hi); }
    bool overlaps(const Box2& b) const {
        return lo.x <= b.hi.x && b.lo.x <= hi.x && lo.y <= b.hi.y && b.lo.y <= hi.y;
    }
    bool contains(const Vec2& p) const {
        return lo.x <= p.x && p.x <= hi.x && lo.y <= p.y && p.y <= hi.y;
    }
    double diagonal() const { return empty() ? 0.0 : norm(hi - lo); }
};

struct Box3 {
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};

    bool empty() const { return lo.x > hi.x; }
    void expand(const Vec3& p) {
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
    }
    void merge(const Box3& b) { expand(b.lo); expand(b.hi); }
    bool overlaps(const Box3& b) const {
        return lo.x <= b.hi.x && b.lo.x <= hi.x && lo.y <= b.hi.y && b.lo.y <= hi.y &&
               lo.z <= b.hi.z && b.lo.z <= hi.z;
    }
    bool contains(const Vec3& p) const {
        return lo.x <= p.x && p.x <= hi.x && lo.y <= p.y && p.y <= hi.y && lo.z <= p.z &&
               p.z <= hi.z;
    }
    double diagonal() const { return empty() ? 0.0 : norm(hi - lo); }
    Box3 inflated(double r) const {
        Box3 b = *this;
        b.lo = b.lo - Vec3{r, r, r};
        b.hi = b.hi + Vec3{r, r, r};
        return b;
    }
};

// Homogeneous 4x4 map, row-major; last row stays (0,0,0,1) for placements.
struct AffineMap {
    std::array<double, 16> m{};

    static AffineMap identity();
    static AffineMap translation(double x, double y, double z);
    // successive rotations about x, then y, then z
    static AffineMap rotation(double alpha, double beta, double gamma);
    static AffineMap scaling(double x, double y, double z);

    Vec3 apply(const Vec3& p) const;
    double linear_det() const;
    bool singular(double tol = kPredicateTol) const { return std::abs(linear_det()) <= tol; }
};

// (a*b).apply(p) == a.apply(b.apply(p))
AffineMap operator*(const AffineMap& a, const AffineMap& b);

// Orthonormal frame of a supporting plane; maps plane points to z=0 charts.
struct PlaneFrame {
    Vec3 origin;
    Vec3 u, v, n;

    Vec2 project(const Vec3& p) const {
        Vec3 d = p - origin;
        return {dot(d, u), dot(d, v)};
    }
    Vec3 unproject(const Vec2& q) const { return origin + u * q.x + v * q.y; }
    double height(const Vec3& p) const { return dot(p - origin, n); }
};

// Frame of the best-fit plane through a face loop (Newell normal, centroid
// origin). Throws GeometryError when the loop is degenerate or the residual
// heights exceed 1e-6 * diameter.
PlaneFrame plane_frame(std::span<const Vec3> loop);

// Newell area vector (normal scaled by loop area); sums over directed edges,
// so disconnected or multiply-connected edge sets are fine.
Vec3 newell_area_vector(std::span<const Vec3> loop);

double signed_area(std::span<const Vec2> loop);

// Ray-crossing parity against a set of closed loops given as raw segments.
// Points within tol of a segment are reported as on-boundary (parity 2).
enum class PointSide { Outside = 0, Inside = 1, OnBoundary = 2 };
PointSide point_in_loops(const Vec2& p, std::span<const std::array<Vec2, 2>> segments,
                         double tol = kPredicateTol);
PointSide point_in_polygon(const Vec2& p, std::span<const Vec2> loop,
                           double tol = kPredicateTol);

double dist_point_segment(const Vec2& p, const Vec2& a, const Vec2& b);

// Ray-triangle classification for crossing-parity tests. Grazing cases
// (origin on the triangle plane patch, hit near an edge, ray in plane) are
// reported as Degenerate so the caller can recast; len_tol is in length
// units, applied to distances along and off the ray.
enum class RayHit { Miss = 0, Hit = 1, Degenerate = 2 };
RayHit ray_triangle(const Vec3& orig, const Vec3& dir, const Vec3& a, const Vec3& b,
                    const Vec3& c, double len_tol);

}  // namespace chaincsg
