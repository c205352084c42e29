#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "facepath/scene.hpp"

namespace facepath {

/// Piece of an obstacle edge, in the parameter x = beta*a + (1-beta)*b.
/// `visible` means every point of the piece sees its orthogonal projection
/// onto the target plane and that projection lies on the target face.
struct EdgeInterval {
  int edge = 0;
  double beta_lo = 0.0;
  double beta_hi = 1.0;
  bool visible = false;
};

/// Edge point where visibility of the perpendicular drop switches.
struct SwitchPoint {
  double beta = 0.0;
  Point3 point;
};

/// Visibility queries against one scene. Counts every point-pair test.
class Visibility {
 public:
  explicit Visibility(const Scene& scene) : scene_(&scene) {}
  Visibility(const Visibility&) = delete;
  Visibility& operator=(const Visibility&) = delete;

  const Scene& scene() const { return *scene_; }

  bool points_visible(const Point3& p, const Point3& q) const;

  /// Partition of [0,1] for `edge` into pieces of constant perpendicular
  /// visibility towards the face plane. Adjacent pieces always differ.
  std::vector<EdgeInterval> perpendicular_partition(int edge, const FaceTarget& face) const;

  /// Switch points of the partition whose projections are interior to the
  /// face and whose switch is caused by an obstacle other than the edge's own.
  std::vector<SwitchPoint> tangent_projection_points(int edge, const FaceTarget& face) const;

  std::uint64_t tests() const { return tests_.load(std::memory_order_relaxed); }

 private:
  struct Breakpoint {
    double beta;
    int obstacle;  // -1: face boundary or target plane
  };
  std::vector<Breakpoint> breakpoints(int edge, const FaceTarget& face) const;
  std::vector<EdgeInterval> classify(int edge, const FaceTarget& face, const std::vector<Breakpoint>& cuts,
                                     std::vector<std::vector<int>>* boundary_tags) const;

  const Scene* scene_;
  mutable std::atomic<std::uint64_t> tests_{0};
};

/// Uncounted convenience form.
bool points_visible(const Point3& p, const Point3& q, const Scene& scene);

/// Visible flag of the interval containing `beta`, or nullopt when `beta` is
/// within `margin` of an interval boundary.
std::optional<bool> lookup_visibility(const std::vector<EdgeInterval>& partition, double beta, double margin);

}  // namespace facepath
