#include "facepath/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace facepath {

VisibilityGraph::VisibilityGraph(std::vector<SteinerNode> nodes, GraphStrategy strategy)
    : nodes_(std::move(nodes)), adjacency_(nodes_.size()), strategy_(strategy) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) nodes_[i].id = static_cast<int>(i);
}

int VisibilityGraph::add_node(SteinerNode node) {
  node.id = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  adjacency_.emplace_back();
  return node.id;
}

bool VisibilityGraph::has_edge(int a, int b) const {
  const auto& adj = adjacency_[a];
  return std::any_of(adj.begin(), adj.end(), [b](const Arc& arc) { return arc.to == b; });
}

void VisibilityGraph::add_edge(int a, int b, double weight, bool check) {
  if (a == b) return;
  if (check && has_edge(a, b)) return;
  adjacency_[a].push_back({b, weight});
  adjacency_[b].push_back({a, weight});
  ++edge_count_;
}

VisibilityGraph build_complete_graph(std::vector<SteinerNode> nodes, const Visibility& vis,
                                     const std::vector<bool>* skip_pairs) {
  VisibilityGraph g(std::move(nodes), GraphStrategy::Complete);
  const int n = static_cast<int>(g.node_count());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (skip_pairs && (*skip_pairs)[i] && (*skip_pairs)[j]) continue;
      const Point3& p = g.node(i).position;
      const Point3& q = g.node(j).position;
      if (vis.points_visible(p, q)) g.add_edge(i, j, distance(p, q), false);
    }
  }
  return g;
}

VisibilityGraph build_cone_graph(std::vector<SteinerNode> nodes, const ConeSet& cones, const Visibility& vis) {
  VisibilityGraph g(std::move(nodes), GraphStrategy::Cone);
  const int n = static_cast<int>(g.node_count());
  for (int i = 0; i < n; ++i) {
    for (const Link& l : cone_neighbors(g.node(i), cones, g.nodes(), vis)) g.add_edge(i, l.to, l.weight);
  }
  return g;
}

namespace {

PathResult trace(const std::vector<SteinerNode>& nodes, const std::vector<int>& pred, int target, double length) {
  PathResult r;
  r.length = length;
  r.reached = target;
  for (int v = target; v >= 0; v = pred[v]) r.node_path.push_back(v);
  std::reverse(r.node_path.begin(), r.node_path.end());
  for (int v : r.node_path) r.waypoints.push_back(nodes[v].position);
  return r;
}

}  // namespace

PathResult dijkstra(const VisibilityGraph& graph, int source, const std::vector<bool>& targets) {
  const std::size_t n = graph.node_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<int> pred(n, -1);
  std::vector<bool> done(n, false);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = true;
    if (targets[u]) return trace(graph.nodes(), pred, u, d);
    for (const Arc& a : graph.arcs(u)) {
      if (done[a.to]) continue;
      const double nd = d + a.weight;
      if (nd < dist[a.to]) {
        dist[a.to] = nd;
        pred[a.to] = u;
        heap.push({nd, a.to});
      }
    }
  }
  throw Unreachable("no target is reachable from the source");
}

PathResult lazy_dijkstra(const std::vector<SteinerNode>& nodes, int source, const std::vector<bool>& targets,
                         const Visibility& vis, LazyStats* stats, const LazyOptions& opt) {
  // Targets are terminal: from each settled node only the nearest visible
  // target matters, so they are folded into one virtual sink.
  const std::size_t n = nodes.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<int> pred(n, -1);
  std::vector<int> open;
  std::vector<int> goal;
  for (std::size_t i = 0; i < n; ++i) (targets[i] ? goal : open).push_back(static_cast<int>(i));
  dist[source] = 0.0;
  if (targets[source]) return trace(nodes, pred, source, 0.0);

  auto lower = [&](int v) { return opt.goal_lower ? (*opt.goal_lower)[v] : 0.0; };
  double sink = opt.upper_bound;
  int sink_from = -1;
  int sink_target = -1;
  std::size_t links = 0;
  using Item = std::pair<double, int>;
  std::vector<Item> cand;
  while (true) {
    std::size_t at = open.size();
    for (std::size_t k = 0; k < open.size(); ++k) {
      const int v = open[k];
      if (at == open.size() || dist[v] < dist[open[at]] || (dist[v] == dist[open[at]] && v < open[at])) at = k;
    }
    if (at == open.size() || !(dist[open[at]] < sink)) break;
    const int u = open[at];
    if (dist[u] == inf) break;
    open[at] = open.back();
    open.pop_back();
    if (!(dist[u] + lower(u) < sink)) continue;
    const Point3& pu = nodes[u].position;
    for (const int v : open) {
      const double nd = dist[u] + distance(pu, nodes[v].position);
      if (!(nd < dist[v]) || !(nd + lower(v) < sink)) continue;
      if (!vis.points_visible(pu, nodes[v].position)) continue;
      ++links;
      dist[v] = nd;
      pred[v] = u;
    }
    cand.clear();
    for (const int t : goal) {
      const double nd = dist[u] + distance(pu, nodes[t].position);
      if (nd < sink) cand.emplace_back(nd, t);
    }
    std::make_heap(cand.begin(), cand.end(), std::greater<>());
    while (!cand.empty()) {
      std::pop_heap(cand.begin(), cand.end(), std::greater<>());
      const auto [nd, t] = cand.back();
      cand.pop_back();
      if (!vis.points_visible(pu, nodes[t].position)) continue;
      ++links;
      sink = nd;
      sink_from = u;
      sink_target = t;
      break;
    }
  }
  if (stats) stats->visible_links = links;
  if (sink_target < 0) throw Unreachable("no target is reachable from the source");
  pred[sink_target] = sink_from;
  return trace(nodes, pred, sink_target, sink);
}

}  // namespace facepath
