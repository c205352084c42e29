#include "facepath/scenes.hpp"

#include <cmath>
#include <numbers>

namespace facepath {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

Obstacle make_box(const Point3& lo, const Point3& hi) {
  Obstacle ob;
  for (int i = 0; i < 8; ++i) {
    ob.vertices.push_back({(i & 1) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y, (i & 4) ? hi.z : lo.z});
  }
  ob.triangles = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
                  {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  return ob;
}

Obstacle make_tetrahedron(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  Obstacle ob;
  ob.vertices = {a, b, c, d};
  ob.triangles = {{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {0, 2, 3}};
  return ob;
}

Obstacle make_quad(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  Obstacle ob;
  ob.vertices = {a, b, c, d};
  ob.triangles = {{0, 1, 2}, {0, 2, 3}};
  return ob;
}

Obstacle make_prism(const Triangle3& top, double depth) {
  const Vec3 n = (top.v1 - top.v0).cross(top.v2 - top.v0).normalized();
  Obstacle ob;
  ob.vertices = {top.v0, top.v1, top.v2, top.v0 - n * depth, top.v1 - n * depth, top.v2 - n * depth};
  ob.triangles = {{0, 1, 2}, {3, 5, 4}, {0, 3, 1}, {1, 3, 4}, {1, 4, 2}, {2, 4, 5}, {2, 5, 0}, {0, 5, 3}};
  return ob;
}

Fixture ridge_fixture() {
  std::vector<Obstacle> obs;
  obs.push_back(make_quad({0, -5, -5}, {0, 5, -5}, {0, 5, 2}, {0, -5, 2}));
  Obstacle target;
  target.vertices = {{0.6, -1.5, 0.6}, {0.6, 1.5, 0.6}, {2.5, 0.0, 2.5}};
  target.triangles = {{0, 1, 2}};
  obs.push_back(target);
  return {"ridge", Scene::from_obstacles(std::move(obs)), {-1, 0, 1}, {1, 0}, 2.0 * std::numbers::sqrt2};
}

namespace {

Triangle3 random_face(std::mt19937_64& rng) {
  // Vertices at spread-out angles around the origin, so the face is never a sliver.
  const double base = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  Triangle3 t;
  for (int k = 0; k < 3; ++k) {
    const double ang = base + k * 2.0 * std::numbers::pi / 3.0 + uniform(rng, -0.4, 0.4);
    const double r = uniform(rng, 0.7, 1.3);
    t[k] = {r * std::cos(ang), r * std::sin(ang), 0.0};
  }
  return t;
}

Box3 bounds_of(const Obstacle& ob) {
  Box3 b{ob.vertices.front(), ob.vertices.front()};
  for (const Point3& v : ob.vertices) {
    b.lo = {std::min(b.lo.x, v.x), std::min(b.lo.y, v.y), std::min(b.lo.z, v.z)};
    b.hi = {std::max(b.hi.x, v.x), std::max(b.hi.y, v.y), std::max(b.hi.z, v.z)};
  }
  return b;
}

bool contains(const Box3& b, const Point3& p, double pad) {
  return p.x >= b.lo.x - pad && p.x <= b.hi.x + pad && p.y >= b.lo.y - pad && p.y <= b.hi.y + pad &&
         p.z >= b.lo.z - pad && p.z <= b.hi.z + pad;
}

Obstacle random_blocker(std::mt19937_64& rng, const Point3& center) {
  if (uniform01(rng) < 0.6) {
    const Vec3 half{uniform(rng, 0.15, 0.6), uniform(rng, 0.15, 0.6), uniform(rng, 0.05, 0.3)};
    return make_box(center - half, center + half);
  }
  const double r = uniform(rng, 0.3, 0.7);
  const double base = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  std::array<Point3, 3> ring;
  for (int k = 0; k < 3; ++k) {
    const double ang = base + k * 2.0 * std::numbers::pi / 3.0;
    ring[k] = center + Vec3{r * std::cos(ang), r * std::sin(ang), -0.25 * r};
  }
  return make_tetrahedron(ring[0], ring[1], ring[2], center + Vec3{0, 0, 0.6 * r});
}

}  // namespace

Fixture random_fixture(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int attempt = 0;; ++attempt) {
    const Triangle3 face = random_face(rng);
    const Point3 s{uniform(rng, -1.5, 1.5), uniform(rng, -1.5, 1.5), uniform(rng, 1.5, 3.0)};
    const Point3 h = closest_point_on_triangle(s, face);

    std::vector<Obstacle> obs{make_prism(face, 0.3)};
    std::vector<Box3> taken{bounds_of(obs.front())};
    const int want = 1 + static_cast<int>(rng() % 4);
    for (int tries = 0; static_cast<int>(obs.size()) < want + 1 && tries < 200; ++tries) {
      // The first blocker sits on the straight drop s -> h; later ones drift.
      const double jitter = obs.size() == 1 ? 0.0 : 0.5;
      Point3 c = s + (h - s) * uniform(rng, 0.3, 0.7);
      c += Vec3{uniform(rng, -jitter, jitter), uniform(rng, -jitter, jitter), 0.0};
      Obstacle ob = random_blocker(rng, c);
      const Box3 b = bounds_of(ob);
      if (b.lo.z < 0.1 || contains(b, s, 0.1)) continue;
      bool clear = true;
      for (const Box3& o : taken) clear = clear && !o.overlaps(b, 0.02);
      if (!clear) continue;
      taken.push_back(b);
      obs.push_back(std::move(ob));
    }
    Scene scene = Scene::from_obstacles(std::move(obs));
    if (!scene.segment_free(s, h) || attempt > 100) {
      return {"random-" + std::to_string(seed), std::move(scene), s, {0, 0}, std::nullopt};
    }
  }
}

Fixture random_unobstructed_fixture(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int attempt = 0;; ++attempt) {
    const Triangle3 face = random_face(rng);
    const Point3 s{uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0), uniform(rng, 0.5, 3.0)};
    std::vector<Obstacle> obs{make_prism(face, 0.3)};
    // A stray box off to one side keeps the scene non-trivial.
    const Point3 c{uniform(rng, 2.5, 3.5), uniform(rng, -1.0, 1.0), uniform(rng, 0.5, 1.5)};
    obs.push_back(make_box(c - Vec3{0.3, 0.3, 0.3}, c + Vec3{0.3, 0.3, 0.3}));
    Scene scene = Scene::from_obstacles(std::move(obs));
    const Point3 h = closest_point_on_triangle(s, scene.triangle(0));
    if (scene.segment_free(s, h) || attempt > 100) {
      return {"open-" + std::to_string(seed), std::move(scene), s, {0, 0}, distance(s, h)};
    }
  }
}

}  // namespace facepath
