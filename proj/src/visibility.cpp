#include "facepath/visibility.hpp"

#include <algorithm>
#include <cmath>

namespace facepath {

bool points_visible(const Point3& p, const Point3& q, const Scene& scene) { return scene.segment_free(p, q); }

bool Visibility::points_visible(const Point3& p, const Point3& q) const {
  tests_.fetch_add(1, std::memory_order_relaxed);
  return scene_->segment_free(p, q);
}

namespace {

constexpr double kBetaEps = 1e-12;

// Root in (0,1) of the linear function through (0,f0), (1,f1), strictly signed.
std::optional<double> linear_root(double f0, double f1) {
  if ((f0 > 0.0 && f1 < 0.0) || (f0 < 0.0 && f1 > 0.0)) return f0 / (f0 - f1);
  return std::nullopt;
}

struct Pt2 {
  double u;
  double w;
};

}  // namespace

std::vector<Visibility::Breakpoint> Visibility::breakpoints(int edge, const FaceTarget& face) const {
  const Scene& sc = *scene_;
  const double tol = sc.tolerance().abs;
  const Segment3 seg = sc.edge_segment(edge);
  const Point3 A = seg.a;  // beta = 1
  const Point3 B = seg.b;  // beta = 0
  const Plane3& pl = face.plane;
  const Vec3 n = pl.n;
  const Vec3 ab = A - B;

  std::vector<Breakpoint> out;
  auto add = [&](double beta, int obstacle) {
    if (beta > kBetaEps && beta < 1.0 - kBetaEps) out.push_back({beta, obstacle});
  };

  const double wA = pl.signed_distance(A);
  const double wB = pl.signed_distance(B);
  if (auto r = linear_root(wB, wA)) add(*r, -1);

  // Where the projected point crosses a side line of the face.
  const Point3 Ap = project_onto_plane(A, pl);
  const Point3 Bp = project_onto_plane(B, pl);
  for (int i = 0; i < 3; ++i) {
    const Point3& v = face.triangle[i];
    const Vec3 m = n.cross(face.triangle[(i + 1) % 3] - v).normalized();
    if (auto r = linear_root(m.dot(Bp - v), m.dot(Ap - v))) add(*r, -1);
  }

  Box3 region{A, A};
  for (const Point3& p : {B, Ap, Bp}) {
    region.lo = {std::min(region.lo.x, p.x), std::min(region.lo.y, p.y), std::min(region.lo.z, p.z)};
    region.hi = {std::max(region.hi.x, p.x), std::max(region.hi.y, p.y), std::max(region.hi.z, p.z)};
  }

  const Vec3 g = ab - n * ab.dot(n);
  const double glen = g.norm();
  const bool along_normal = !(glen > 1e-9 * ab.norm());
  const Vec3 uhat = along_normal ? Vec3{} : g / glen;
  const Vec3 mhat = uhat.cross(n);

  for (int o = 0; o < sc.obstacle_count(); ++o) {
    if (!sc.obstacle_bounds(o).overlaps(region, tol)) continue;
    const auto [t0, t1] = sc.obstacle_triangles(o);
    for (int t = t0; t < t1; ++t) {
      const Triangle3& tri = sc.triangle(t);
      if (along_normal) {
        // The drop segment is a piece of the edge's own line.
        const Plane3 tp = Plane3::from_triangle(tri);
        if (auto r = linear_root(tp.signed_distance(B), tp.signed_distance(A))) add(*r, o);
        continue;
      }
      std::array<double, 3> side{};
      std::array<Pt2, 3> uw{};
      for (int k = 0; k < 3; ++k) {
        side[k] = mhat.dot(tri[k] - B);
        uw[k] = {uhat.dot(tri[k] - B), pl.signed_distance(tri[k])};
      }
      std::vector<Pt2> poly;
      for (int k = 0; k < 3; ++k) {
        if (std::abs(side[k]) <= tol) poly.push_back(uw[k]);
        const int j = (k + 1) % 3;
        if ((side[k] > tol && side[j] < -tol) || (side[k] < -tol && side[j] > tol)) {
          const double s = side[k] / (side[k] - side[j]);
          poly.push_back({uw[k].u + (uw[j].u - uw[k].u) * s, uw[k].w + (uw[j].w - uw[k].w) * s});
        }
      }
      if (poly.empty()) continue;
      for (const Pt2& p : poly) add(p.u / glen, o);
      auto edge_w = [&](double u) { return wB + (wA - wB) * (u / glen); };
      for (std::size_t i = 0; i < poly.size(); ++i) {
        for (std::size_t j = i + 1; j < poly.size(); ++j) {
          const Pt2& p = poly[i];
          const Pt2& q = poly[j];
          if (auto r = linear_root(p.w - edge_w(p.u), q.w - edge_w(q.u))) add((p.u + (q.u - p.u) * *r) / glen, o);
          if (auto r = linear_root(p.w, q.w)) add((p.u + (q.u - p.u) * *r) / glen, o);
        }
      }
    }
  }
  return out;
}

std::vector<EdgeInterval> Visibility::classify(int edge, const FaceTarget& face, const std::vector<Breakpoint>& cuts,
                                               std::vector<std::vector<int>>* boundary_tags) const {
  const Scene& sc = *scene_;
  const Segment3 seg = sc.edge_segment(edge);
  const TolerancePolicy& tol = sc.tolerance();

  std::vector<Breakpoint> sorted = cuts;
  std::sort(sorted.begin(), sorted.end(), [](const Breakpoint& a, const Breakpoint& b) {
    return a.beta < b.beta || (a.beta == b.beta && a.obstacle < b.obstacle);
  });
  std::vector<double> pos{0.0};
  std::vector<std::vector<int>> tags{{}};
  for (const Breakpoint& bp : sorted) {
    if (bp.beta - pos.back() > kBetaEps) {
      pos.push_back(bp.beta);
      tags.emplace_back();
    }
    if (pos.size() > 1) tags.back().push_back(bp.obstacle);
  }
  pos.push_back(1.0);
  tags.emplace_back();

  auto visible_at = [&](double beta) {
    const Point3 x = edge_point(seg.a, seg.b, beta);
    const Point3 xp = project_onto_plane(x, face.plane);
    if (point_in_triangle_2d(xp, face.triangle, tol) == TriangleLocation::Outside) return false;
    if (distance(x, xp) <= tol.abs) return true;
    return points_visible(x, xp);
  };

  std::vector<EdgeInterval> out;
  std::vector<std::vector<int>> out_tags;
  for (std::size_t i = 0; i + 1 < pos.size(); ++i) {
    const bool vis = visible_at(0.5 * (pos[i] + pos[i + 1]));
    if (!out.empty() && out.back().visible == vis) {
      out.back().beta_hi = pos[i + 1];
      continue;
    }
    if (!out.empty()) out_tags.push_back(tags[i]);
    out.push_back({edge, pos[i], pos[i + 1], vis});
  }
  if (boundary_tags) *boundary_tags = std::move(out_tags);
  return out;
}

std::vector<EdgeInterval> Visibility::perpendicular_partition(int edge, const FaceTarget& face) const {
  return classify(edge, face, breakpoints(edge, face), nullptr);
}

std::vector<SwitchPoint> Visibility::tangent_projection_points(int edge, const FaceTarget& face) const {
  const Scene& sc = *scene_;
  const int own = sc.edges()[edge].obstacle;
  std::vector<std::vector<int>> tags;
  const auto parts = classify(edge, face, breakpoints(edge, face), &tags);
  const Segment3 seg = sc.edge_segment(edge);

  std::vector<SwitchPoint> out;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    const auto& t = tags[i];
    const bool foreign = std::any_of(t.begin(), t.end(), [own](int o) { return o >= 0 && o != own; });
    if (!foreign) continue;
    const double beta = parts[i].beta_hi;
    const Point3 x = edge_point(seg.a, seg.b, beta);
    const Point3 xp = project_onto_plane(x, face.plane);
    if (point_in_triangle_2d(xp, face.triangle, sc.tolerance()) != TriangleLocation::Interior) continue;
    out.push_back({beta, x});
  }
  return out;
}

std::optional<bool> lookup_visibility(const std::vector<EdgeInterval>& partition, double beta, double margin) {
  for (std::size_t i = 0; i < partition.size(); ++i) {
    const EdgeInterval& iv = partition[i];
    if (beta < iv.beta_lo || beta > iv.beta_hi) continue;
    const bool near_lo = i > 0 && beta - iv.beta_lo < margin;
    const bool near_hi = i + 1 < partition.size() && iv.beta_hi - beta < margin;
    if (near_lo || near_hi) return std::nullopt;
    return iv.visible;
  }
  return std::nullopt;
}

}  // namespace facepath
