#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "facepath/geom.hpp"
#include "facepath/kernels.hpp"

namespace facepath {

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class BadFaceRef : public Error {
 public:
  using Error::Error;
};

class SourceInsideObstacle : public Error {
 public:
  using Error::Error;
};

struct Obstacle {
  std::vector<Point3> vertices;
  std::vector<std::array<int, 3>> triangles;
};

/// "OBSTACLE:TRIANGLE", zero-based.
struct FaceRef {
  int obstacle = 0;
  int triangle = 0;

  static FaceRef parse(std::string_view text);
  std::string str() const;
  bool operator==(const FaceRef&) const = default;
};

/// Undirected obstacle edge; `a` and `b` are global vertex ids.
struct Edge {
  int obstacle = 0;
  int a = 0;
  int b = 0;
};

struct FaceTarget {
  FaceRef ref;
  int triangle_id = 0;  // global triangle index
  Triangle3 triangle;
  Plane3 plane;
  std::array<int, 3> edges{};  // global edge ids of the triangle's sides
};

struct Box3 {
  Point3 lo;
  Point3 hi;

  bool overlaps(const Box3& o, double pad) const;
};

/// Immutable obstacle set with derived indices.
class Scene {
 public:
  static Scene from_obstacles(std::vector<Obstacle> obstacles, double tol_rel = 1e-9);

  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  int obstacle_count() const { return static_cast<int>(obstacles_.size()); }

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  const Point3& vertex(int id) const { return vertices_[id]; }
  const std::vector<Point3>& vertices() const { return vertices_; }
  /// Global id of the obstacle's first vertex.
  int vertex_offset(int obstacle) const { return vertex_offset_[obstacle]; }

  const std::vector<Edge>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  Segment3 edge_segment(int id) const { return {vertices_[edges_[id].a], vertices_[edges_[id].b]}; }
  /// The two triangles sharing the edge, or -1 entries when the edge has one
  /// (or more than two) incident triangles.
  const std::array<int, 2>& edge_triangles(int id) const { return edge_triangles_[id]; }
  /// Interior edge whose two triangles are coplanar, like a quad diagonal.
  /// Shortest paths never bend there.
  bool edge_flat(int id) const { return edge_flat_[id]; }
  /// Edge id for an unordered pair of global vertex ids, if the pair is an edge.
  std::optional<int> find_edge(int a, int b) const;

  int triangle_count() const { return static_cast<int>(triangles_.size()); }
  const Triangle3& triangle(int id) const { return triangles_[id]; }
  int triangle_obstacle(int id) const { return triangle_owner_[id]; }
  std::pair<int, int> obstacle_triangles(int obstacle) const { return obstacle_tri_range_[obstacle]; }
  int global_triangle(const FaceRef& ref) const;

  const Box3& bounds() const { return bounds_; }
  const Box3& obstacle_bounds(int obstacle) const { return obstacle_bounds_[obstacle]; }
  double diameter() const { return diameter_; }
  const TolerancePolicy& tolerance() const { return tol_; }

  /// Every edge shared by exactly two of the obstacle's triangles.
  bool obstacle_closed(int obstacle) const { return closed_[obstacle]; }
  bool obstacle_convex(int obstacle) const { return convex_[obstacle]; }

  /// True iff no point of the open segment pq lies in an obstacle interior:
  /// no triangle is crossed transversally, and the segment does not pass
  /// through the inside of a closed obstacle while only touching its surface.
  bool segment_free(const Point3& p, const Point3& q) const;

  /// Strictly inside a closed obstacle (farther than tol from its surface).
  bool point_inside(int obstacle, const Point3& p) const;

  double distance_to_obstacle_surface(int obstacle, const Point3& p) const;

  const kernels::TriangleSoA& packed_triangles() const { return packed_; }

 private:
  bool interior_hit(int obstacle, const Point3& p, const Point3& q) const;
  bool seam_crossing(int obstacle, const Point3& p, const Point3& q) const;

  std::vector<Obstacle> obstacles_;
  std::vector<Point3> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 2>> edge_triangles_;
  std::vector<bool> edge_flat_;
  // Per open obstacle: edges shared by two of its triangles.
  std::vector<std::vector<int>> seams_;
  std::vector<Triangle3> triangles_;
  std::vector<int> triangle_owner_;
  std::vector<std::array<int, 3>> triangle_vertices_;
  std::vector<std::pair<int, int>> obstacle_tri_range_;
  std::vector<int> vertex_offset_;
  std::vector<Box3> obstacle_bounds_;
  std::vector<bool> closed_;
  std::vector<bool> convex_;
  // Outward planes of convex obstacles, indexed by global triangle.
  std::vector<Plane3> outward_planes_;
  Box3 bounds_;
  double diameter_ = 0.0;
  TolerancePolicy tol_;
  kernels::TriangleSoA packed_;
};

/// Optional query block carried by scene files used for benchmarking:
/// { "query": { "source": [x,y,z], "face": "O:T" } }.
struct SceneQuery {
  Point3 source;
  FaceRef face;
};

Scene load_scene(std::string_view text);
Scene load_scene_file(const std::string& path);
std::optional<SceneQuery> load_query(std::string_view text);
std::string serialize_scene(const Scene& scene, const std::optional<SceneQuery>& query = std::nullopt);

FaceTarget resolve_face(const Scene& scene, const FaceRef& ref);

/// Throws SourceInsideObstacle when `s` is strictly inside a closed obstacle.
/// Returns the indices of open obstacles that could not be checked.
std::vector<int> validate_source(const Scene& scene, const Point3& s);

}  // namespace facepath
