#include "facepath/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <tuple>

namespace facepath {

double ConeSet::cos_half_angle() const { return std::cos(half_angle); }

std::vector<double> geometric_offsets(double a, double eps1, double lo, double hi) {
  if (!(eps1 > 0.0) || !(a > 0.0)) throw Error("geometric offsets need positive spacing parameters");
  if (lo > hi) std::swap(lo, hi);
  std::vector<double> r{lo, hi};
  if (lo <= 0.0 && hi >= 0.0) r.push_back(0.0);
  const double reach = std::max(std::abs(lo), std::abs(hi));
  for (double x = eps1 * a; x < reach; x *= 1.0 + eps1) {
    if (x > lo && x < hi) r.push_back(x);
    if (-x > lo && -x < hi) r.push_back(-x);
  }
  std::sort(r.begin(), r.end());
  const double merge = 1e-12 * std::max(reach, 1e-300);
  std::vector<double> out;
  for (double x : r) {
    if (out.empty() || x - out.back() > merge) out.push_back(x);
  }
  return out;
}

std::vector<SteinerNode> papadimitriou_edge_points(const Scene& scene, int edge, const Point3& s, double eps1) {
  const Segment3 seg = scene.edge_segment(edge);
  const Vec3 ab = seg.a - seg.b;  // from beta=0 to beta=1
  const double len = ab.norm();
  const Vec3 dir = ab / len;
  const double foot = (s - seg.b).dot(dir);
  const double a = (s - (seg.b + dir * foot)).norm();

  std::vector<SteinerNode> out;
  if (a <= scene.tolerance().abs) {
    // Source on the edge's line: the progression degenerates, use a uniform pitch.
    const double pitch = eps1 * scene.diameter() / 4.0;
    const auto k = std::max(1L, static_cast<long>(std::ceil(len / pitch)));
    for (long i = 0; i <= k; ++i) {
      const double beta = static_cast<double>(i) / static_cast<double>(k);
      out.push_back({-1, NodeKind::EdgePoint, edge_point(seg.a, seg.b, beta), edge, beta});
    }
    return out;
  }
  const auto offsets = geometric_offsets(a, eps1, -foot, len - foot);
  for (double x : offsets) {
    double beta = std::clamp((foot + x) / len, 0.0, 1.0);
    if (x == offsets.front()) beta = 0.0;
    if (x == offsets.back()) beta = 1.0;
    out.push_back({-1, NodeKind::EdgePoint, edge_point(seg.a, seg.b, beta), edge, beta});
  }
  return out;
}

std::vector<SteinerNode> uniform_edge_points(const Scene& scene, int edge, double spacing, const Point3& center,
                                             double radius) {
  if (!(spacing > 0.0)) throw Error("edge spacing must be positive");
  const Segment3 seg = scene.edge_segment(edge);
  const Vec3 d = seg.a - seg.b;
  const double len = d.norm();
  double t0 = 0.0;
  double t1 = 1.0;
  if (std::isfinite(radius)) {
    // |b + t d - c|^2 <= r^2
    const Vec3 f = seg.b - center;
    const double A = d.dot(d);
    const double B = 2.0 * f.dot(d);
    const double C = f.dot(f) - radius * radius;
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) return {};
    const double sq = std::sqrt(disc);
    t0 = std::max(0.0, (-B - sq) / (2.0 * A));
    t1 = std::min(1.0, (-B + sq) / (2.0 * A));
    if (t0 > t1) return {};
  }
  // Fixed steps from the end nearer a; the last piece takes the remainder.
  const double step = spacing / len;
  std::vector<SteinerNode> out;
  for (double beta = t1; beta > t0 + 1e-12 * step; beta -= step) {
    out.push_back({-1, NodeKind::EdgePoint, edge_point(seg.a, seg.b, beta), edge, beta});
  }
  out.push_back({-1, NodeKind::EdgePoint, edge_point(seg.a, seg.b, t0), edge, t0});
  return out;
}

namespace {

// Nearest point of (triangle intersected with the disk(center, radius)) in the
// triangle's plane. `center` lies on the triangle.
Point3 project_to_face_disk(const Point3& q, const FaceTarget& face, const Point3& center, double radius,
                            const TolerancePolicy& tol) {
  const Point3 c1 = closest_point_on_triangle(q, face.triangle);
  if (distance(c1, center) <= radius) return c1;
  const Vec3 off = q - center;
  const Point3 c2 = center + off * (radius / off.norm());
  if (point_in_triangle_2d(project_onto_plane(c2, face.plane), face.triangle, tol) != TriangleLocation::Outside) {
    return c2;
  }
  // Both constraints active: the answer is where the circle meets a side.
  Point3 best = center;
  double best_d = distance(q, center);
  for (int i = 0; i < 3; ++i) {
    const Point3& a = face.triangle[i];
    const Vec3 d = face.triangle[(i + 1) % 3] - a;
    const Vec3 f = a - center;
    const double A = d.dot(d);
    const double B = 2.0 * f.dot(d);
    const double C = f.dot(f) - radius * radius;
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) continue;
    const double sq = std::sqrt(disc);
    for (double t : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)}) {
      if (t < 0.0 || t > 1.0) continue;
      const Point3 p = a + d * t;
      const double dq = distance(q, p);
      if (dq < best_d) {
        best_d = dq;
        best = p;
      }
    }
  }
  return best;
}

}  // namespace

std::vector<SteinerNode> face_grid_points(const FaceTarget& face, const Point3& anchor, double radius, double cell,
                                          const TolerancePolicy& tol) {
  if (!(cell > 0.0)) throw Error("face grid cell must be positive");
  const Vec3 u = (face.triangle.v1 - face.triangle.v0).normalized();
  const Vec3 w = face.plane.n.cross(u);
  double umin = 0.0, umax = 0.0, wmin = 0.0, wmax = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Vec3 d = face.triangle[i] - anchor;
    umin = std::min(umin, d.dot(u));
    umax = std::max(umax, d.dot(u));
    wmin = std::min(wmin, d.dot(w));
    wmax = std::max(wmax, d.dot(w));
  }
  if (std::isfinite(radius)) {
    umin = std::max(umin, -radius);
    umax = std::min(umax, radius);
    wmin = std::max(wmin, -radius);
    wmax = std::min(wmax, radius);
  }
  const long i0 = static_cast<long>(std::floor(umin / cell)) - 1;
  const long i1 = static_cast<long>(std::ceil(umax / cell)) + 1;
  const long j0 = static_cast<long>(std::floor(wmin / cell)) - 1;
  const long j1 = static_cast<long>(std::ceil(wmax / cell)) + 1;
  if (static_cast<double>(i1 - i0 + 1) * static_cast<double>(j1 - j0 + 1) > 2.5e7) {
    throw Error("face grid too fine");
  }

  const double reach = cell * std::numbers::sqrt2 / 2.0 - tol.abs;
  const double quantum = std::max(tol.abs, cell * 1e-9);
  std::vector<SteinerNode> out;
  std::map<std::tuple<long long, long long, long long>, int> seen;
  auto emit = [&](const Point3& p) {
    const auto key = std::make_tuple(std::llround(p.x / quantum), std::llround(p.y / quantum),
                                     std::llround(p.z / quantum));
    if (!seen.emplace(key, static_cast<int>(out.size())).second) return;
    out.push_back({-1, NodeKind::FacePoint, p, -1, 0.0});
  };
  emit(anchor);
  for (long i = i0; i <= i1; ++i) {
    for (long j = j0; j <= j1; ++j) {
      const Point3 q = anchor + u * (cell * static_cast<double>(i)) + w * (cell * static_cast<double>(j));
      if (std::isfinite(radius) && distance(q, anchor) > radius + cell) continue;
      const Point3 p = project_to_face_disk(q, face, anchor, radius, tol);
      if (distance(p, q) < reach) emit(p);
    }
  }
  return out;
}

ConeSet build_cone_set_with_angle(double half_angle) {
  if (!(half_angle > 0.0) || half_angle >= std::numbers::pi / 2) throw Error("cone half-angle out of range");
  const double pi = std::numbers::pi;
  const double cos_t = std::cos(half_angle);

  // Latitude bands of half-height alpha < theta; within a band, azimuth cells
  // are as wide as the band's worst corner allows.
  auto layout = [&](int bands) {
    const double alpha = pi / (2.0 * bands);
    std::vector<int> per_band(bands);
    for (int b = 0; b < bands; ++b) {
      const double phc = (2 * b + 1) * alpha;
      double rhs = -1.0;
      for (double phe : {phc - alpha, phc + alpha}) {
        const double se = std::sin(phe);
        if (se < 1e-12) continue;
        rhs = std::max(rhs, (cos_t - std::cos(phc) * std::cos(phe)) / (std::sin(phc) * se));
      }
      if (rhs <= -1.0) {
        per_band[b] = 1;
        continue;
      }
      const double half_width = std::acos(std::min(1.0, rhs + 1e-12));
      per_band[b] = std::max(1, static_cast<int>(std::ceil(pi / half_width - 1e-9)));
    }
    return per_band;
  };

  int first = static_cast<int>(std::ceil(pi / (2.0 * half_angle)));
  if (pi / (2.0 * first) >= half_angle) ++first;
  std::vector<int> best;
  int best_total = 0;
  for (int bands = first; bands < first + 8; ++bands) {
    auto per_band = layout(bands);
    const int total = std::accumulate(per_band.begin(), per_band.end(), 0);
    if (best.empty() || total < best_total) {
      best = std::move(per_band);
      best_total = total;
    }
  }

  ConeSet cs;
  cs.half_angle = half_angle;
  const int bands = static_cast<int>(best.size());
  const double alpha = pi / (2.0 * bands);
  for (int b = 0; b < bands; ++b) {
    const double phc = (2 * b + 1) * alpha;
    const int k = best[b];
    const double step = 2.0 * pi / k;
    const double start = (b % 2) * 0.5 * step;
    for (int i = 0; i < k; ++i) {
      const double lam = start + step * i;
      const Vec3 axis{std::sin(phc) * std::cos(lam), std::sin(phc) * std::sin(lam), std::cos(phc)};
      cs.axes.push_back(axis);
      cs.packed.x.push_back(axis.x);
      cs.packed.y.push_back(axis.y);
      cs.packed.z.push_back(axis.z);
    }
  }
  return cs;
}

ConeSet build_cone_set(double eps) {
  if (!(eps > 0.0)) throw Error("epsilon must be positive");
  return build_cone_set_with_angle(std::sqrt(eps) / 2.0);
}

std::vector<Link> cone_neighbors(const SteinerNode& x, const ConeSet& cones, std::span<const SteinerNode> candidates,
                                 const Visibility& vis) {
  const double tol = vis.scene().tolerance().abs;
  struct Cand {
    double dist;
    int id;
    std::size_t index;
  };
  std::vector<Cand> order;
  order.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const SteinerNode& y = candidates[i];
    if (y.id == x.id) continue;
    const double d = distance(x.position, y.position);
    if (d <= tol) continue;
    order.push_back({d, y.id, i});
  }
  std::sort(order.begin(), order.end(),
            [](const Cand& a, const Cand& b) { return a.dist < b.dist || (a.dist == b.dist && a.id < b.id); });

  const std::size_t m = cones.size();
  std::vector<std::uint8_t> filled(m, 0);
  std::vector<std::uint8_t> inside(m, 0);
  std::size_t remaining = m;
  const double cos_t = cones.cos_half_angle();
  std::vector<Link> out;
  for (const Cand& c : order) {
    const SteinerNode& y = candidates[c.index];
    const Vec3 dir = (y.position - x.position) / c.dist;
    kernels::cone_membership(cones.packed, dir, cos_t, inside);
    bool wanted = false;
    for (std::size_t k = 0; k < m && !wanted; ++k) wanted = inside[k] && !filled[k];
    if (!wanted) continue;
    if (!vis.points_visible(x.position, y.position)) continue;
    for (std::size_t k = 0; k < m; ++k) {
      if (inside[k] && !filled[k]) {
        filled[k] = 1;
        --remaining;
      }
    }
    out.push_back({y.id, c.dist});
    if (remaining == 0) break;
  }
  return out;
}

std::vector<ProjectionPair> projection_steiner_points(std::span<const SteinerNode> edge_nodes, const FaceTarget& face,
                                                      const Visibility& vis,
                                                      const std::vector<std::vector<EdgeInterval>>* partitions) {
  const TolerancePolicy& tol = vis.scene().tolerance();
  std::vector<ProjectionPair> out;
  for (const SteinerNode& v : edge_nodes) {
    if (v.kind != NodeKind::EdgePoint && v.kind != NodeKind::Vertex) continue;
    const Point3 p = project_onto_plane(v.position, face.plane);
    const double w = distance(v.position, p);
    if (w <= tol.abs) continue;
    if (point_in_triangle_2d(p, face.triangle, tol) != TriangleLocation::Interior) continue;
    std::optional<bool> known;
    if (partitions && v.kind == NodeKind::EdgePoint && v.edge >= 0 &&
        static_cast<std::size_t>(v.edge) < partitions->size() && !(*partitions)[v.edge].empty()) {
      known = lookup_visibility((*partitions)[v.edge], v.beta, 1e-9);
    }
    const bool visible = known ? *known : vis.points_visible(v.position, p);
    if (!visible) continue;
    out.push_back({v.id, {-1, NodeKind::FacePoint, p, -1, 0.0}, w});
  }
  return out;
}

NodeSet::NodeSet(const Scene& scene) : scene_(&scene), vertex_node_(scene.vertex_count(), -1) {}

int NodeSet::add(SteinerNode node) {
  if (node.kind == NodeKind::EdgePoint && node.edge >= 0) {
    int vid = -1;
    if (node.beta <= 1e-12) vid = scene_->edges()[node.edge].b;
    if (node.beta >= 1.0 - 1e-12) vid = scene_->edges()[node.edge].a;
    if (vid >= 0) {
      if (vertex_node_[vid] >= 0) return vertex_node_[vid];
      node.kind = NodeKind::Vertex;
      node.position = scene_->vertex(vid);
      vertex_node_[vid] = static_cast<int>(nodes_.size());
    }
  }
  node.id = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  return node.id;
}

void NodeSet::add_all(const std::vector<SteinerNode>& nodes) {
  for (const auto& n : nodes) add(n);
}

}  // namespace facepath
