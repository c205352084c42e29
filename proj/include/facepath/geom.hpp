#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace facepath {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

class OffPlane : public Error {
 public:
  using Error::Error;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr bool operator==(const Vec3&) const = default;

  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  constexpr double squared_norm() const { return dot(*this); }
  Vec3 normalized() const { return *this / norm(); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

using Point3 = Vec3;

inline double distance(const Point3& a, const Point3& b) { return (a - b).norm(); }

/// Linear interpolation with the edge-parameter convention used throughout:
/// beta = 1 gives `a`, beta = 0 gives `b`.
inline Point3 edge_point(const Point3& a, const Point3& b, double beta) {
  return a * beta + b * (1.0 - beta);
}

struct Segment3 {
  Point3 a;
  Point3 b;

  double length() const { return distance(a, b); }
};

struct Triangle3 {
  Point3 v0;
  Point3 v1;
  Point3 v2;

  const Point3& operator[](int i) const { return i == 0 ? v0 : (i == 1 ? v1 : v2); }
  Point3& operator[](int i) { return i == 0 ? v0 : (i == 1 ? v1 : v2); }
  Vec3 area_vector() const { return (v1 - v0).cross(v2 - v0) * 0.5; }
  double area() const { return area_vector().norm(); }
  double longest_edge() const;
};

/// Plane {p : n.p = d} with unit normal n.
struct Plane3 {
  Vec3 n;
  double d = 0.0;

  static Plane3 from_triangle(const Triangle3& tri);
  double signed_distance(const Point3& p) const { return n.dot(p) - d; }
};

/// Hybrid tolerance: `abs` is `rel` scaled by the scene diameter.
struct TolerancePolicy {
  double rel = 1e-9;
  double abs = 1e-9;

  static TolerancePolicy for_diameter(double diameter, double rel = 1e-9);
  double area() const { return abs * abs; }
};

enum class TriangleLocation { Interior, Boundary, Outside };

bool is_degenerate(const Triangle3& tri, const TolerancePolicy& tol);

/// Closest point of the closed triangle to `p`. Throws DegenerateGeometry for
/// zero-area triangles.
Point3 closest_point_on_triangle(const Point3& p, const Triangle3& tri);

/// Closest point of the closed segment [a, b] to `p`.
Point3 closest_point_on_segment(const Point3& p, const Point3& a, const Point3& b);

/// True iff the open segment crosses `tri` transversally at a point interior
/// to the triangle. Endpoints within tol.abs of the plane never count, and
/// grazing contact (edges, vertices, coplanar overlap) is non-blocking.
bool segment_triangle_blocked(const Segment3& seg, const Triangle3& tri, const TolerancePolicy& tol);

Point3 project_onto_plane(const Point3& p, const Plane3& pl);

/// Classifies a point lying on the triangle's plane. Throws OffPlane when the
/// point is farther than tol.abs from the plane.
TriangleLocation point_in_triangle_2d(const Point3& p, const Triangle3& tri, const TolerancePolicy& tol);

/// Signed distances of `p` to the three edge lines of `tri`, measured in the
/// triangle plane and positive towards the inside.
std::array<double, 3> edge_distances(const Point3& p, const Triangle3& tri);

}  // namespace facepath
