#pragma once

// Brute-force reference routines for tests. None of them call into the
// library's visibility, graph or solver code.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "facepath/geom.hpp"
#include "facepath/scene.hpp"
#include "facepath/scenes.hpp"

namespace support {

using facepath::Point3;
using facepath::Vec3;

// Plane crossing by signed volumes. The crossing must be strictly inside the
// triangle and away from both segment endpoints.
inline bool brute_crossing(const Point3& p, const Point3& q, const facepath::Triangle3& t, double tol) {
  const Vec3 n = (t.v1 - t.v0).cross(t.v2 - t.v0);
  const double nn = n.norm();
  const double dp = n.dot(p - t.v0) / nn;
  const double dq = n.dot(q - t.v0) / nn;
  if (!((dp > tol && dq < -tol) || (dp < -tol && dq > tol))) return false;
  const Point3 x = p + (q - p) * (dp / (dp - dq));
  for (int i = 0; i < 3; ++i) {
    const Point3& a = t[i];
    const Point3& b = t[(i + 1) % 3];
    const Vec3 side = (b - a).cross(x - a);
    const double dist = side.dot(n) / (nn * (b - a).norm());
    if (dist <= tol) return false;
  }
  return true;
}

// Ray-parity point-in-solid test for a closed obstacle, ray in a fixed
// irrational-ish direction.
inline bool brute_inside(const Point3& p, const facepath::Scene& scene, int obstacle) {
  const Point3 far = p + Vec3{0.5377, 0.8012, 0.2613} * (4.0 * scene.diameter() + 1.0);
  const auto [begin, end] = scene.obstacle_triangles(obstacle);
  int hits = 0;
  for (int t = begin; t < end; ++t) hits += brute_crossing(p, far, scene.triangle(t), 0.0);
  return hits % 2 == 1;
}

// No transversal crossing, and no sampled point of the segment deeper than
// 1e-7 inside a closed obstacle.
inline bool brute_visible(const Point3& p, const Point3& q, const facepath::Scene& scene) {
  for (int i = 0; i < scene.triangle_count(); ++i) {
    if (brute_crossing(p, q, scene.triangle(i), scene.tolerance().abs)) return false;
  }
  for (int o = 0; o < scene.obstacle_count(); ++o) {
    if (!scene.obstacle_closed(o)) continue;
    for (int k = 1; k < 64; ++k) {
      const Point3 x = p + (q - p) * (k / 64.0);
      if (scene.distance_to_obstacle_surface(o, x) > 1e-7 && brute_inside(x, scene, o)) return false;
    }
  }
  return true;
}

struct WeightedEdge {
  int a, b;
  double w;
};

// Distance from `source` to the nearest node flagged in `targets`.
inline double bellman_ford(int n, const std::vector<WeightedEdge>& edges, int source,
                           const std::vector<bool>& targets) {
  std::vector<double> d(n, std::numeric_limits<double>::infinity());
  d[source] = 0.0;
  for (int round = 0; round < n; ++round) {
    bool changed = false;
    for (const auto& e : edges) {
      if (d[e.a] + e.w < d[e.b]) {
        d[e.b] = d[e.a] + e.w;
        changed = true;
      }
      if (d[e.b] + e.w < d[e.a]) {
        d[e.a] = d[e.b] + e.w;
        changed = true;
      }
    }
    if (!changed) break;
  }
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (targets[i]) best = std::min(best, d[i]);
  }
  return best;
}

// Random connected-ish graph with small integer weights, so sums are exact.
struct RandomGraph {
  int n = 0;
  std::vector<WeightedEdge> edges;
  std::vector<bool> targets;
};

inline RandomGraph random_graph(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RandomGraph g;
  g.n = 2 + static_cast<int>(rng() % 49);
  const int m = static_cast<int>(rng() % static_cast<std::uint64_t>(3 * g.n + 1));
  for (int i = 0; i < m; ++i) {
    const int a = static_cast<int>(rng() % static_cast<std::uint64_t>(g.n));
    const int b = static_cast<int>(rng() % static_cast<std::uint64_t>(g.n));
    if (a == b) continue;
    bool dup = false;
    for (const auto& e : g.edges) dup = dup || (e.a == a && e.b == b) || (e.a == b && e.b == a);
    if (dup) continue;
    g.edges.push_back({a, b, static_cast<double>(1 + rng() % 20)});
  }
  g.targets.assign(g.n, false);
  const int k = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < k; ++i) g.targets[1 + rng() % static_cast<std::uint64_t>(g.n - 1)] = true;
  return g;
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  for (;;) {
    const Vec3 v{facepath::uniform(rng, -1, 1), facepath::uniform(rng, -1, 1), facepath::uniform(rng, -1, 1)};
    const double n = v.norm();
    if (n > 1e-3 && n <= 1.0) return v / n;
  }
}

// Uniform point on a triangle.
inline Point3 random_on_triangle(std::mt19937_64& rng, const facepath::Triangle3& t) {
  double u = facepath::uniform01(rng);
  double v = facepath::uniform01(rng);
  if (u + v > 1.0) {
    u = 1.0 - u;
    v = 1.0 - v;
  }
  return t.v0 + (t.v1 - t.v0) * u + (t.v2 - t.v0) * v;
}

inline double angle_to_axis(const Vec3& d, const Vec3& axis) {
  const double c = std::abs(d.dot(axis)) / (d.norm() * axis.norm());
  return std::acos(std::min(1.0, c));
}

}  // namespace support
