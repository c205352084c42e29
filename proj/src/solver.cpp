#include "facepath/solver.hpp"

#include <chrono>
#include <cmath>

namespace facepath {

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::GridVG:
      return "grid";
    case Algorithm::WVD:
      return "wvd";
    case Algorithm::Cone:
      return "cone";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "grid" || name == "gridvg") return Algorithm::GridVG;
  if (name == "wvd") return Algorithm::WVD;
  if (name == "cone") return Algorithm::Cone;
  throw ValidationError("algorithm: expected grid, wvd or cone, got '" + std::string(name) + "'");
}

void SolveConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ValidationError("epsilon must lie in (0, 1]");
  if (epsilon1 && !(*epsilon1 > 0.0)) throw ValidationError("epsilon1 must be positive");
  if (cone_half_angle && !(*cone_half_angle > 0.0 && *cone_half_angle < 1.5)) {
    throw ValidationError("cone half-angle must lie in (0, 1.5)");
  }
  if (!(budget_split > 0.0) && budget_split != kSplitPerEdge) throw ValidationError("budget split must be positive");
}

double SolveConfig::split(const Scene& scene) const {
  return budget_split == kSplitPerEdge ? static_cast<double>(scene.edge_count()) : budget_split;
}

Point3 compute_anchor(const Point3& s, const FaceTarget& face) { return closest_point_on_triangle(s, face.triangle); }

double path_length(const std::vector<Point3>& waypoints) {
  double len = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) len += distance(waypoints[i - 1], waypoints[i]);
  return len;
}

bool path_feasible(const std::vector<Point3>& waypoints, const Scene& scene) {
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (!scene.segment_free(waypoints[i - 1], waypoints[i])) return false;
  }
  return true;
}

namespace {

using Clock = std::chrono::steady_clock;

bool on_face(const Point3& p, const FaceTarget& face, const TolerancePolicy& tol) {
  if (std::abs(face.plane.signed_distance(p)) > tol.abs) return false;
  return point_in_triangle_2d(project_onto_plane(p, face.plane), face.triangle, tol) != TriangleLocation::Outside;
}

// Any path through p is at least |sp| + dist(p, f) long; points beyond the
// slack cannot lie on a path the guarantee needs.
struct Ellipsoid {
  Point3 s;
  const FaceTarget* face;
  double limit;

  bool keeps(const Point3& p) const {
    return distance(s, p) + distance(p, closest_point_on_triangle(p, face->triangle)) <= limit;
  }
};

PathResult direct_path(const Point3& s, const Point3& h) {
  PathResult p;
  p.waypoints = {s, h};
  p.node_path = {0, 1};
  p.length = distance(s, h);
  p.reached = 1;
  return p;
}

SolveResult finish(SolveResult r, const Scene& scene, const Visibility& vis, Clock::time_point t0) {
  r.feasible = path_feasible(r.path.waypoints, scene);
  r.stats.visibility_tests = vis.tests();
  r.stats.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return r;
}

SolveResult start(const Point3& s, const SolveConfig& cfg, const Bootstrap& bs) {
  SolveResult r;
  r.algorithm = cfg.algorithm;
  r.epsilon = cfg.epsilon;
  r.bounds = bs.bounds;
  if (bs.direct && cfg.direct_shortcut) {
    r.path = direct_path(s, bs.bounds.anchor);
    r.direct = true;
    r.stats.nodes = 2;
    r.stats.edges = 1;
  }
  return r;
}

// Source, then Papadimitriou points on every edge (pruned), with their ids.
NodeSet edge_point_nodes(const Point3& s, const Scene& scene, double eps1, const Ellipsoid* keep) {
  NodeSet ns(scene);
  ns.add({-1, NodeKind::Source, s, -1, 0.0});
  for (int e = 0; e < scene.edge_count(); ++e) {
    if (scene.edge_flat(e)) continue;
    for (const auto& n : papadimitriou_edge_points(scene, e, s, eps1)) {
      if (!keep || keep->keeps(n.position)) ns.add(n);
    }
  }
  return ns;
}

// The bootstrap path already reaches h with length D, so the search only
// looks for something shorter and falls back to it otherwise.
PathResult search_below_bootstrap(const std::vector<SteinerNode>& nodes, const std::vector<bool>& targets,
                                  const FaceTarget& face, const Bootstrap& bs, const Visibility& vis,
                                  SolveStats& stats) {
  std::vector<double> lower(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    lower[i] = distance(nodes[i].position, closest_point_on_triangle(nodes[i].position, face.triangle));
  }
  LazyOptions opt;
  opt.upper_bound = bs.bounds.upper;
  opt.goal_lower = &lower;
  LazyStats ls;
  PathResult p;
  try {
    p = lazy_dijkstra(nodes, 0, targets, vis, &ls, opt);
  } catch (const Unreachable&) {
    p = bs.path;
  }
  stats.edges = ls.visible_links;
  return p;
}

}  // namespace

Bootstrap bootstrap_bounds(const Point3& s, const FaceTarget& face, const Scene& scene, const SolveConfig& cfg,
                           const Visibility& vis) {
  Bootstrap b;
  const Point3 h = compute_anchor(s, face);
  if (vis.points_visible(s, h)) {
    b.path = direct_path(s, h);
    b.direct = true;
  } else {
    constexpr double eps_boot = 0.5;
    NodeSet ns = edge_point_nodes(s, scene, eps_boot / (4.0 * cfg.split(scene)), nullptr);
    const int anchor = ns.add({-1, NodeKind::Anchor, h, -1, 0.0});
    std::vector<bool> targets(ns.size(), false);
    targets[anchor] = true;
    std::vector<double> lower(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) lower[i] = distance(ns.nodes()[i].position, h);
    LazyOptions opt;
    opt.goal_lower = &lower;
    b.path = lazy_dijkstra(ns.nodes(), 0, targets, vis, nullptr, opt);
  }
  b.bounds.anchor = h;
  b.bounds.upper = b.path.length;
  b.bounds.lower = b.path.length / 3.0;
  return b;
}

SolveResult solve_grid_vg(const Point3& s, const FaceTarget& face, const Scene& scene, const SolveConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  const Visibility vis(scene);
  const Bootstrap bs = bootstrap_bounds(s, face, scene, cfg, vis);
  SolveResult r = start(s, cfg, bs);
  if (r.direct) return finish(std::move(r), scene, vis, t0);

  const TolerancePolicy& tol = scene.tolerance();
  const double eps2 = cfg.epsilon / 3.0;
  const double eps1 = cfg.epsilon1.value_or(eps2 / (4.0 * cfg.split(scene)));
  const PathBounds& pb = bs.bounds;
  const Ellipsoid keep{s, &face, (1.0 + cfg.epsilon) * pb.upper + tol.abs};

  NodeSet ns = edge_point_nodes(s, scene, eps1, &keep);
  r.stats.edge_nodes = ns.size() - 1;
  auto grid = face_grid_points(face, pb.anchor, pb.upper, eps2 * pb.lower, tol);
  grid.front().kind = NodeKind::Anchor;
  r.stats.face_nodes = grid.size();
  const std::size_t first_face = ns.size();
  ns.add_all(grid);

  std::vector<bool> targets(ns.size(), false);
  for (std::size_t i = 1; i < ns.size(); ++i) {
    targets[i] = i >= first_face || on_face(ns.nodes()[i].position, face, tol);
  }
  r.path = search_below_bootstrap(ns.nodes(), targets, face, bs, vis, r.stats);
  r.stats.nodes = ns.size();
  return finish(std::move(r), scene, vis, t0);
}

SolveResult solve_wvd(const Point3& s, const FaceTarget& face, const Scene& scene, const SolveConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  const Visibility vis(scene);
  const Bootstrap bs = bootstrap_bounds(s, face, scene, cfg, vis);
  SolveResult r = start(s, cfg, bs);
  if (r.direct) return finish(std::move(r), scene, vis, t0);

  const TolerancePolicy& tol = scene.tolerance();
  const double eps1 = cfg.epsilon1.value_or(cfg.epsilon / 8.0 / (4.0 * cfg.split(scene)));
  const PathBounds& pb = bs.bounds;
  const Ellipsoid keep{s, &face, (1.0 + cfg.epsilon) * pb.upper + tol.abs};

  // One Dijkstra from s over the shared edge discretization settles the
  // samples in order of weight; the first one settled has the minimum.
  NodeSet ns = edge_point_nodes(s, scene, eps1, &keep);
  r.stats.edge_nodes = ns.size() - 1;
  auto samples = face_grid_points(face, pb.anchor, pb.upper, cfg.epsilon * pb.lower, tol);
  samples.front().kind = NodeKind::Anchor;
  r.stats.face_nodes = samples.size();
  const std::size_t first_sample = ns.size();
  ns.add_all(samples);

  std::vector<bool> targets(ns.size(), false);
  for (std::size_t i = first_sample; i < ns.size(); ++i) targets[i] = true;
  r.path = search_below_bootstrap(ns.nodes(), targets, face, bs, vis, r.stats);
  r.stats.nodes = ns.size();
  return finish(std::move(r), scene, vis, t0);
}

ConeProblem prepare_cone_problem(const Point3& s, const FaceTarget& face, const Scene& scene, const SolveConfig& cfg,
                                 const Visibility& vis, const PathBounds& bounds) {
  const TolerancePolicy& tol = scene.tolerance();
  const double eps_c = 4.0 * cfg.epsilon / 5.0;
  const double spacing = bounds.lower * cfg.epsilon1.value_or(eps_c / (4.0 * cfg.split(scene)));
  const double radius = 2.0 * bounds.upper;
  const Ellipsoid keep{s, &face, (1.0 + cfg.epsilon) * bounds.upper + tol.abs};
  auto wanted = [&](const Point3& p) { return distance(p, bounds.anchor) <= radius && keep.keeps(p); };

  ConeProblem cp;
  cp.bounds = bounds;
  cp.cones = cfg.cone_half_angle ? build_cone_set_with_angle(*cfg.cone_half_angle) : build_cone_set(eps_c);

  NodeSet ns(scene);
  ns.add({-1, NodeKind::Source, s, -1, 0.0});
  for (int e = 0; e < scene.edge_count(); ++e) {
    if (scene.edge_flat(e)) continue;
    for (const auto& n : uniform_edge_points(scene, e, spacing, bounds.anchor, radius)) {
      if (keep.keeps(n.position)) ns.add(n);
    }
  }
  std::vector<std::vector<EdgeInterval>> partitions(scene.edge_count());
  for (int e = 0; e < scene.edge_count(); ++e) {
    if (scene.edge_flat(e)) continue;
    const Segment3 seg = scene.edge_segment(e);
    const Point3 near = closest_point_on_segment(bounds.anchor, seg.a, seg.b);
    if (distance(near, bounds.anchor) > radius) continue;
    partitions[e] = vis.perpendicular_partition(e, face);
    for (const SwitchPoint& sp : vis.tangent_projection_points(e, face)) {
      if (wanted(sp.point)) ns.add({-1, NodeKind::EdgePoint, sp.point, e, sp.beta});
    }
  }
  cp.equipped = ns.size();
  cp.anchor = ns.add({-1, NodeKind::Anchor, bounds.anchor, -1, 0.0});

  const std::vector<SteinerNode> equipped(ns.nodes().begin(), ns.nodes().begin() + cp.equipped);
  for (const ProjectionPair& pp : projection_steiner_points(equipped, face, vis, &partitions)) {
    const int id = ns.add(pp.face_point);
    cp.drops.emplace_back(id, pp.from);
  }

  cp.nodes = ns.release();
  cp.targets.assign(cp.nodes.size(), false);
  for (std::size_t i = 1; i < cp.nodes.size(); ++i) {
    cp.targets[i] = i >= cp.equipped || on_face(cp.nodes[i].position, face, tol);
  }
  return cp;
}

VisibilityGraph wire_cone_problem(const ConeProblem& problem, const Visibility& vis, GraphStrategy strategy) {
  VisibilityGraph g(problem.nodes, strategy);
  const int k = static_cast<int>(problem.equipped);
  const std::span<const SteinerNode> equipped(g.nodes().data(), problem.equipped);
  for (int i = 0; i < k; ++i) {
    if (strategy == GraphStrategy::Cone) {
      for (const Link& l : cone_neighbors(g.node(i), problem.cones, equipped, vis)) g.add_edge(i, l.to, l.weight);
    } else {
      for (int j = i + 1; j < k; ++j) {
        if (vis.points_visible(g.node(i).position, g.node(j).position)) {
          g.add_edge(i, j, distance(g.node(i).position, g.node(j).position), false);
        }
      }
    }
  }
  const Point3& h = g.node(problem.anchor).position;
  for (int i = 0; i < k; ++i) {
    if (vis.points_visible(g.node(i).position, h)) g.add_edge(i, problem.anchor, distance(g.node(i).position, h), false);
  }
  for (const auto& [face_node, from] : problem.drops) {
    g.add_edge(face_node, from, distance(g.node(face_node).position, g.node(from).position), false);
  }
  return g;
}

SolveResult solve_cone(const Point3& s, const FaceTarget& face, const Scene& scene, const SolveConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  const Visibility vis(scene);
  const Bootstrap bs = bootstrap_bounds(s, face, scene, cfg, vis);
  SolveResult r = start(s, cfg, bs);
  if (r.direct) return finish(std::move(r), scene, vis, t0);

  const ConeProblem cp = prepare_cone_problem(s, face, scene, cfg, vis, bs.bounds);
  const VisibilityGraph g = wire_cone_problem(cp, vis, GraphStrategy::Cone);
  // The bootstrap path also ends on f.
  try {
    r.path = dijkstra(g, 0, cp.targets);
    if (bs.path.length < r.path.length) r.path = bs.path;
  } catch (const Unreachable&) {
    r.path = bs.path;
  }
  r.stats.nodes = g.node_count();
  r.stats.edge_nodes = cp.equipped - 1;
  r.stats.face_nodes = g.node_count() - cp.equipped;
  r.stats.edges = g.edge_count();
  r.stats.cone_axes = cp.cones.size();
  return finish(std::move(r), scene, vis, t0);
}

SolveResult solve(const Point3& s, const FaceTarget& face, const Scene& scene, const SolveConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::GridVG:
      return solve_grid_vg(s, face, scene, cfg);
    case Algorithm::WVD:
      return solve_wvd(s, face, scene, cfg);
    case Algorithm::Cone:
      return solve_cone(s, face, scene, cfg);
  }
  throw ValidationError("unknown algorithm");
}

}  // namespace facepath
