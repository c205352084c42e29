#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "facepath/graph.hpp"
#include "facepath/steiner.hpp"

namespace facepath {

enum class Algorithm { GridVG, WVD, Cone };

std::string_view algorithm_name(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

/// The worst-case budget split: one share per obstacle edge.
inline constexpr double kSplitPerEdge = -1.0;

struct SolveConfig {
  double epsilon = 0.25;
  Algorithm algorithm = Algorithm::Cone;
  std::optional<double> epsilon1;         // edge spacing parameter override
  std::optional<double> cone_half_angle;  // overrides sqrt(eps')/2
  /// Number of shares the error budget is split into along a path. The
  /// worst-case analysis uses the edge count (kSplitPerEdge); practical
  /// scenes are far from that bound.
  double budget_split = 1.0;
  /// Return |sh| at once when the source sees its closest face point.
  bool direct_shortcut = true;

  void validate() const;
  double split(const Scene& scene) const;
};

struct SolveStats {
  std::size_t nodes = 0;
  std::size_t edge_nodes = 0;
  std::size_t face_nodes = 0;
  std::size_t edges = 0;
  std::size_t cone_axes = 0;
  std::uint64_t visibility_tests = 0;
  double elapsed_ms = 0.0;
};

struct SolveResult {
  PathResult path;
  PathBounds bounds;
  Algorithm algorithm = Algorithm::Cone;
  double epsilon = 0.0;
  SolveStats stats;
  bool direct = false;    // answered by the unobstructed shortcut
  bool feasible = false;  // every link re-checked against the scene
};

Point3 compute_anchor(const Point3& s, const FaceTarget& face);

struct Bootstrap {
  PathBounds bounds;
  PathResult path;  // the coarse path s -> h
  bool direct = false;
};

/// Coarse 1/2-approximate path from s to h; B = |Q|/3, D = |Q|.
Bootstrap bootstrap_bounds(const Point3& s, const FaceTarget& face, const Scene& scene, const SolveConfig& cfg,
                           const Visibility& vis);

SolveResult solve_grid_vg(const Point3& s, const FaceTarget& face, const Scene& scene, const SolveConfig& cfg);
SolveResult solve_wvd(const Point3& s, const FaceTarget& face, const Scene& scene, const SolveConfig& cfg);
SolveResult solve_cone(const Point3& s, const FaceTarget& face, const Scene& scene, const SolveConfig& cfg);
SolveResult solve(const Point3& s, const FaceTarget& face, const Scene& scene, const SolveConfig& cfg);

/// Node layout of the cone algorithm, exposed so the same nodes can be wired
/// either with cones or completely.
struct ConeProblem {
  std::vector<SteinerNode> nodes;  // [0, equipped) carry cones; node 0 is s
  std::size_t equipped = 0;
  int anchor = -1;
  std::vector<std::pair<int, int>> drops;  // set-two face node <- edge node
  std::vector<bool> targets;
  ConeSet cones;
  PathBounds bounds;
};

ConeProblem prepare_cone_problem(const Point3& s, const FaceTarget& face, const Scene& scene, const SolveConfig& cfg,
                                 const Visibility& vis, const PathBounds& bounds);
VisibilityGraph wire_cone_problem(const ConeProblem& problem, const Visibility& vis, GraphStrategy strategy);

/// Re-checks every link of a path.
bool path_feasible(const std::vector<Point3>& waypoints, const Scene& scene);
double path_length(const std::vector<Point3>& waypoints);

}  // namespace facepath
