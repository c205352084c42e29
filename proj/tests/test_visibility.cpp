#include <random>

#include "doctest.h"
#include "facepath/scenes.hpp"
#include "facepath/visibility.hpp"
#include "support.hpp"

using namespace facepath;

namespace {

// Target face in z = 0, an edge-carrying obstacle above it, optional blocker
// between them. The edge is x in [-1, 1] at y = 0, z = 2.
struct EdgeScene {
  Scene scene;
  FaceTarget face;
  int edge = -1;
};

EdgeScene edge_scene(std::optional<Obstacle> blocker, Point3 ea = {-1, 0, 2}, Point3 eb = {1, 0, 2}) {
  std::vector<Obstacle> obs;
  Obstacle target;
  target.vertices = {{-5, -5, 0}, {5, -5, 0}, {0, 5, 0}};
  target.triangles = {{0, 1, 2}};
  obs.push_back(target);
  Obstacle fin;
  fin.vertices = {ea, eb, (ea + eb) * 0.5 + Vec3{0, 0, 1}};
  fin.triangles = {{0, 1, 2}};
  obs.push_back(fin);
  if (blocker) obs.push_back(*blocker);
  EdgeScene es{Scene::from_obstacles(std::move(obs)), {}, -1};
  es.face = resolve_face(es.scene, {0, 0});
  const int off = es.scene.vertex_offset(1);
  es.edge = *es.scene.find_edge(off, off + 1);
  return es;
}

Obstacle small_blocker() {
  // Crosses y = 0 over x in [-1/3, 1/3] at height 1.
  Obstacle b;
  b.vertices = {{-1.0 / 3, -0.5, 1}, {1.0 / 3, -0.5, 1}, {1.0 / 3, 0.5, 1}, {-1.0 / 3, 0.5, 1}};
  b.triangles = {{0, 1, 2}, {0, 2, 3}};
  return b;
}

// The perpendicular drop from edge point x is unblocked and lands on f.
bool drop_ok(const EdgeScene& es, double beta) {
  const Segment3 seg = es.scene.edge_segment(es.edge);
  const Point3 x = edge_point(seg.a, seg.b, beta);
  const Point3 down = project_onto_plane(x, es.face.plane);
  if (point_in_triangle_2d(down, es.face.triangle, es.scene.tolerance()) == TriangleLocation::Outside) return false;
  return support::brute_visible(x, down, es.scene);
}

void check_partition_by_sampling(const EdgeScene& es, const std::vector<EdgeInterval>& parts) {
  REQUIRE(!parts.empty());
  CHECK(parts.front().beta_lo == 0.0);
  CHECK(parts.back().beta_hi == 1.0);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    CHECK(parts[i].beta_hi == parts[i + 1].beta_lo);
    CHECK(parts[i].visible != parts[i + 1].visible);
  }
  for (const auto& iv : parts) {
    CHECK(iv.beta_lo < iv.beta_hi);
    const double margin = 1e-6;
    for (int k = 0; k < 32; ++k) {
      const double beta = iv.beta_lo + margin + (iv.beta_hi - iv.beta_lo - 2 * margin) * (k + 0.5) / 32.0;
      CHECK(drop_ok(es, beta) == iv.visible);
    }
  }
  CHECK(parts.size() <= static_cast<std::size_t>(2 * es.scene.triangle_count() + 3));
}

}  // namespace

TEST_CASE("points visible across a wall") {
  const Scene wall = Scene::from_obstacles({make_quad({0, -1, -1}, {0, 1, -1}, {0, 1, 1}, {0, -1, 1})});
  CHECK_FALSE(points_visible({-2, 0, 0}, {2, 0, 0}, wall));
  CHECK(points_visible({-2, 0, 0}, {2, 5, 0}, wall));
  CHECK(points_visible({-2, 0, 0}, {2, 5, 0}, wall) == support::brute_visible({-2, 0, 0}, {2, 5, 0}, wall));

  const Scene cube = Scene::from_obstacles({make_box({0, 0, 0}, {1, 1, 1})});
  CHECK(points_visible({0.1, 0.1, 1}, {0.9, 0.5, 1}, cube));
  CHECK_FALSE(points_visible({0.5, 0.5, -1}, {0.5, 0.5, 2}, cube));
}

TEST_CASE("visibility is symmetric and agrees with brute force") {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Fixture fx = random_fixture(seed);
    const Visibility vis(fx.scene);
    for (int i = 0; i < 400; ++i) {
      const Point3 p{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -0.5, 3)};
      const Point3 q{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -0.5, 3)};
      const bool fwd = vis.points_visible(p, q);
      CHECK(fwd == vis.points_visible(q, p));
      // the scene check also rejects passing through a solid; brute force only sees crossings
      if (fwd) CHECK(support::brute_visible(p, q, fx.scene));
    }
    CHECK(vis.tests() == 800);
  }
}

TEST_CASE("partition with nothing between edge and face") {
  const EdgeScene es = edge_scene(std::nullopt);
  const Visibility vis(es.scene);
  const auto parts = vis.perpendicular_partition(es.edge, es.face);
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].visible);
  check_partition_by_sampling(es, parts);
  CHECK(vis.tangent_projection_points(es.edge, es.face).empty());
}

TEST_CASE("partition with a blocker under the middle third") {
  const EdgeScene es = edge_scene(small_blocker());
  const Visibility vis(es.scene);
  const auto parts = vis.perpendicular_partition(es.edge, es.face);
  REQUIRE(parts.size() == 3);
  CHECK(parts[0].visible);
  CHECK_FALSE(parts[1].visible);
  CHECK(parts[2].visible);
  CHECK(parts[0].beta_hi == doctest::Approx(1.0 / 3));
  CHECK(parts[1].beta_hi == doctest::Approx(2.0 / 3));
  check_partition_by_sampling(es, parts);

  // Switch points found by bisection on the sampled flag.
  const auto tangents = vis.tangent_projection_points(es.edge, es.face);
  REQUIRE(tangents.size() == 2);
  for (const auto& sw : tangents) {
    double lo = sw.beta - 0.05, hi = sw.beta + 0.05;
    const bool lo_flag = drop_ok(es, lo);
    REQUIRE(lo_flag != drop_ok(es, hi));
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (drop_ok(es, mid) == lo_flag ? lo : hi) = mid;
    }
    CHECK(sw.beta == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-7));
    bool is_endpoint = false;
    for (const auto& iv : parts) is_endpoint = is_endpoint || iv.beta_lo == sw.beta || iv.beta_hi == sw.beta;
    CHECK(is_endpoint);
  }
}

TEST_CASE("edge projecting outside the face") {
  const EdgeScene es = edge_scene(std::nullopt, {20, 0, 2}, {22, 0, 2});
  const Visibility vis(es.scene);
  const auto parts = vis.perpendicular_partition(es.edge, es.face);
  REQUIRE(parts.size() == 1);
  CHECK_FALSE(parts[0].visible);
}

TEST_CASE("blocker covering the whole edge") {
  Obstacle big;
  big.vertices = {{-3, -1, 1}, {3, -1, 1}, {0, 3, 1}};
  big.triangles = {{0, 1, 2}};
  const EdgeScene es = edge_scene(big);
  const Visibility vis(es.scene);
  const auto parts = vis.perpendicular_partition(es.edge, es.face);
  REQUIRE(parts.size() == 1);
  CHECK_FALSE(parts[0].visible);
  CHECK(vis.tangent_projection_points(es.edge, es.face).empty());
}

TEST_CASE("partitions on random scenes pass the sampling check") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Fixture fx = random_fixture(seed);
    const FaceTarget face = resolve_face(fx.scene, fx.face);
    const Visibility vis(fx.scene);
    EdgeScene es{fx.scene, face, -1};
    for (int e = 0; e < fx.scene.edge_count(); ++e) {
      es.edge = e;
      const auto parts = vis.perpendicular_partition(e, face);
      check_partition_by_sampling(es, parts);
      for (const auto& sw : vis.tangent_projection_points(e, face)) {
        bool is_endpoint = false;
        for (const auto& iv : parts) is_endpoint = is_endpoint || iv.beta_lo == sw.beta || iv.beta_hi == sw.beta;
        CHECK(is_endpoint);
      }
    }
  }
}

TEST_CASE("interval lookup") {
  const std::vector<EdgeInterval> parts{{0, 0.0, 0.4, true}, {0, 0.4, 1.0, false}};
  CHECK(lookup_visibility(parts, 0.2, 1e-9) == std::optional<bool>(true));
  CHECK(lookup_visibility(parts, 0.7, 1e-9) == std::optional<bool>(false));
  CHECK_FALSE(lookup_visibility(parts, 0.4, 1e-6).has_value());
}
