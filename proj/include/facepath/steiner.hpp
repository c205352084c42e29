#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "facepath/kernels.hpp"
#include "facepath/scene.hpp"
#include "facepath/visibility.hpp"

namespace facepath {

enum class NodeKind { Source, Vertex, EdgePoint, FacePoint, Anchor };

struct SteinerNode {
  int id = -1;
  NodeKind kind = NodeKind::EdgePoint;
  Point3 position;
  int edge = -1;  // for edge points and vertices reached along an edge
  double beta = 0.0;
};

/// Lower and upper bound on the optimal length, plus the anchor point h
/// (closest point of the face to the source).
struct PathBounds {
  double lower = 0.0;
  double upper = 0.0;
  Point3 anchor;
};

/// Cone axes covering the unit sphere: every direction is within
/// `half_angle` of some axis.
struct ConeSet {
  std::vector<Vec3> axes;
  double half_angle = 0.0;
  kernels::AxisSoA packed;

  std::size_t size() const { return axes.size(); }
  double cos_half_angle() const;
};

/// Offsets from the foot of the perpendicular, geometric in (1+eps1) starting
/// at eps1*a, restricted to [lo, hi]. Always contains lo, hi and 0 when in range.
std::vector<double> geometric_offsets(double a, double eps1, double lo, double hi);

/// Points on one edge at geometrically growing spacing away from the foot of
/// the perpendicular from `s`.
std::vector<SteinerNode> papadimitriou_edge_points(const Scene& scene, int edge, const Point3& s, double eps1);

/// Points at fixed `spacing` along an edge, limited to the part inside the
/// ball (center, radius). Empty if the edge misses the ball.
std::vector<SteinerNode> uniform_edge_points(const Scene& scene, int edge, double spacing, const Point3& center,
                                             double radius);

/// Sample points of the face within distance `radius` of `anchor`: a square
/// lattice of pitch `cell` anchored at `anchor`, each lattice point mapped to
/// its nearest point of face-within-disk. Every point of that set is within
/// cell*sqrt(2)/2 of some sample. The anchor itself is always the first point.
std::vector<SteinerNode> face_grid_points(const FaceTarget& face, const Point3& anchor, double radius, double cell,
                                          const TolerancePolicy& tol);

/// Cone set with half-angle sqrt(eps)/2.
ConeSet build_cone_set(double eps);
ConeSet build_cone_set_with_angle(double half_angle);

struct Link {
  int to = -1;
  double weight = 0.0;
};

/// For every cone around `x`, the nearest visible candidate inside it. Ties
/// in distance go to the lower id. A candidate filling several cones is
/// reported once.
std::vector<Link> cone_neighbors(const SteinerNode& x, const ConeSet& cones, std::span<const SteinerNode> candidates,
                                 const Visibility& vis);

struct ProjectionPair {
  int from = -1;  // id of the edge node
  SteinerNode face_point;
  double weight = 0.0;
};

/// Orthogonal drops from edge nodes into the face interior, kept when the drop
/// is unobstructed. `partitions` (indexed by edge id, may be empty) lets the
/// interval flag answer instead of a segment test.
std::vector<ProjectionPair> projection_steiner_points(std::span<const SteinerNode> edge_nodes, const FaceTarget& face,
                                                      const Visibility& vis,
                                                      const std::vector<std::vector<EdgeInterval>>* partitions = nullptr);

/// Collects nodes, assigns ids, and merges edge points at mesh vertices.
class NodeSet {
 public:
  explicit NodeSet(const Scene& scene);
  int add(SteinerNode node);
  void add_all(const std::vector<SteinerNode>& nodes);
  const std::vector<SteinerNode>& nodes() const { return nodes_; }
  std::vector<SteinerNode> release() { return std::move(nodes_); }
  std::size_t size() const { return nodes_.size(); }

 private:
  const Scene* scene_;
  std::vector<int> vertex_node_;
  std::vector<SteinerNode> nodes_;
};

}  // namespace facepath
