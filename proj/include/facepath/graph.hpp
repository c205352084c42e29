#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "facepath/steiner.hpp"
#include "facepath/visibility.hpp"

namespace facepath {

class Unreachable : public Error {
 public:
  using Error::Error;
};

enum class GraphStrategy { Complete, Cone };

struct Arc {
  int to = -1;
  double weight = 0.0;
};

/// Undirected weighted graph over Steiner nodes; node i has id i.
class VisibilityGraph {
 public:
  VisibilityGraph() = default;
  VisibilityGraph(std::vector<SteinerNode> nodes, GraphStrategy strategy);

  int add_node(SteinerNode node);
  /// No-op if the pair is already linked. `check` = false skips that lookup
  /// for callers that never repeat a pair.
  void add_edge(int a, int b, double weight, bool check = true);

  const std::vector<SteinerNode>& nodes() const { return nodes_; }
  const SteinerNode& node(int id) const { return nodes_[id]; }
  const std::vector<Arc>& arcs(int id) const { return adjacency_[id]; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  GraphStrategy strategy() const { return strategy_; }
  bool has_edge(int a, int b) const;

 private:
  std::vector<SteinerNode> nodes_;
  std::vector<std::vector<Arc>> adjacency_;
  std::size_t edge_count_ = 0;
  GraphStrategy strategy_ = GraphStrategy::Complete;
};

/// Links every mutually visible pair. Pairs where both ends are flagged in
/// `skip_pairs` (if given) are not tested.
VisibilityGraph build_complete_graph(std::vector<SteinerNode> nodes, const Visibility& vis,
                                     const std::vector<bool>* skip_pairs = nullptr);

/// Links each node to its cone neighbours among all nodes; the result is
/// symmetrized.
VisibilityGraph build_cone_graph(std::vector<SteinerNode> nodes, const ConeSet& cones, const Visibility& vis);

struct PathResult {
  std::vector<Point3> waypoints;
  std::vector<int> node_path;
  double length = 0.0;
  int reached = -1;  // target node id
};

/// Shortest path from `source` to the nearest node flagged in `targets`.
/// Equal tentative distances settle in id order.
PathResult dijkstra(const VisibilityGraph& graph, int source, const std::vector<bool>& targets);

/// Dijkstra over the implicit complete visibility graph of `nodes`: a pair is
/// tested for visibility only when it could improve a tentative distance.
/// Returns the same length as dijkstra on build_complete_graph.
struct LazyStats {
  std::size_t visible_links = 0;
};
struct LazyOptions {
  /// Only paths strictly shorter than this are searched for; Unreachable if
  /// there are none.
  double upper_bound = std::numeric_limits<double>::infinity();
  /// Per node, a lower bound on the remaining distance to any target.
  const std::vector<double>* goal_lower = nullptr;
};
PathResult lazy_dijkstra(const std::vector<SteinerNode>& nodes, int source, const std::vector<bool>& targets,
                         const Visibility& vis, LazyStats* stats = nullptr, const LazyOptions& opt = {});

}  // namespace facepath
