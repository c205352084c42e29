#include "facepath/geom.hpp"

#include <algorithm>

#include "kernels/crossing_inl.hpp"

namespace facepath {

double Triangle3::longest_edge() const {
  return std::max({distance(v0, v1), distance(v1, v2), distance(v2, v0)});
}

Plane3 Plane3::from_triangle(const Triangle3& tri) {
  const Vec3 n = (tri.v1 - tri.v0).cross(tri.v2 - tri.v0);
  const double len = n.norm();
  if (!(len > 0.0)) throw DegenerateGeometry("triangle has no supporting plane");
  Plane3 pl;
  pl.n = n / len;
  pl.d = pl.n.dot(tri.v0);
  return pl;
}

TolerancePolicy TolerancePolicy::for_diameter(double diameter, double rel) {
  TolerancePolicy tol;
  tol.rel = rel;
  tol.abs = rel * (diameter > 0.0 ? diameter : 1.0);
  return tol;
}

bool is_degenerate(const Triangle3& tri, const TolerancePolicy& tol) {
  // Area relative to the longest edge catches slivers as well as tiny triangles.
  const double longest = tri.longest_edge();
  return !(tri.area() > tol.area()) || !(tri.area() > tol.rel * longest * longest);
}

namespace {

void require_nondegenerate(const Triangle3& tri) {
  const double l = tri.longest_edge();
  if (!(tri.area() > 1e-18 * l * l) || !(l > 0.0)) throw DegenerateGeometry("degenerate triangle");
}

}  // namespace

Point3 closest_point_on_segment(const Point3& p, const Point3& a, const Point3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squared_norm();
  if (len2 <= 0.0) return a;
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + ab * t;
}

Point3 closest_point_on_triangle(const Point3& p, const Triangle3& tri) {
  require_nondegenerate(tri);
  // Voronoi-region walk over vertices, edges, and the face.
  const Point3& a = tri.v0;
  const Point3& b = tri.v1;
  const Point3& c = tri.v2;
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
  }

  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

bool segment_triangle_blocked(const Segment3& seg, const Triangle3& tri, const TolerancePolicy& tol) {
  if (is_degenerate(tri, tol)) return false;
  kernels::TriangleSoA one;
  one.push(tri);
  return kernels::detail::crossing_one(one, 0, seg.a, seg.b, tol.abs);
}

Point3 project_onto_plane(const Point3& p, const Plane3& pl) { return p - pl.n * pl.signed_distance(p); }

std::array<double, 3> edge_distances(const Point3& p, const Triangle3& tri) {
  const Vec3 n = (tri.v1 - tri.v0).cross(tri.v2 - tri.v0).normalized();
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    const Point3& a = tri[i];
    const Point3& b = tri[(i + 1) % 3];
    const Vec3 m = n.cross(b - a).normalized();
    out[i] = m.dot(p - a);
  }
  return out;
}

TriangleLocation point_in_triangle_2d(const Point3& p, const Triangle3& tri, const TolerancePolicy& tol) {
  require_nondegenerate(tri);
  const Plane3 pl = Plane3::from_triangle(tri);
  if (std::abs(pl.signed_distance(p)) > tol.abs) throw OffPlane("point is not on the triangle plane");
  const auto e = edge_distances(p, tri);
  const double lo = std::min({e[0], e[1], e[2]});
  if (lo > tol.abs) return TriangleLocation::Interior;
  if (lo >= -tol.abs) return TriangleLocation::Boundary;
  return TriangleLocation::Outside;
}

}  // namespace facepath
