#include <cmath>
#include <numbers>

#include "doctest.h"
#include "facepath/oracle.hpp"
#include "facepath/scenes.hpp"

using namespace facepath;

namespace {

int ridge_edge(const Scene& sc) {
  // top edge of the wall: (0,5,2)-(0,-5,2)
  return *sc.find_edge(2, 3);
}

Point3 rotate(const Point3& p) {
  // fixed rotation about (1,2,3) by 0.7 rad, then a shift
  const Vec3 k = Vec3{1, 2, 3}.normalized();
  const double c = std::cos(0.7), s = std::sin(0.7);
  const Vec3 r = p * c + k.cross(p) * s + k * (k.dot(p) * (1 - c));
  return r + Vec3{4, -1, 2};
}

Scene rotated(const Scene& sc) {
  std::vector<Obstacle> obs = sc.obstacles();
  for (auto& ob : obs) {
    for (auto& v : ob.vertices) v = rotate(v);
  }
  return Scene::from_obstacles(std::move(obs));
}

// 1D brute scan of |s-x| + |x-t| over the ridge line.
double brute_ridge(const Point3& s, const Point3& t) {
  double best = 1e300;
  for (int i = 0; i <= 200000; ++i) {
    const Point3 x{0, -5 + 10.0 * i / 200000, 2};
    best = std::min(best, distance(s, x) + distance(x, t));
  }
  return best;
}

}  // namespace

TEST_CASE("unobstructed oracle") {
  Obstacle target;
  target.vertices = {{-1, -1, 0}, {1, -1, 0}, {0, 1, 0}};
  target.triangles = {{0, 1, 2}};
  const Scene sc = Scene::from_obstacles({target});
  const FaceTarget f = resolve_face(sc, {0, 0});
  CHECK(oracle_unobstructed({0, 0, 5}, f, sc).length == doctest::Approx(5.0));
  const Point3 coplanar{3, 4, 0};
  CHECK(oracle_unobstructed(coplanar, f, sc).length ==
        doctest::Approx(distance(coplanar, closest_point_on_triangle(coplanar, f.triangle))));

  const Scene walled = Scene::from_obstacles({target, make_quad({-3, -3, 1}, {3, -3, 1}, {3, 3, 1}, {-3, 3, 1})});
  CHECK_THROWS_AS(oracle_unobstructed({0.1, 0.2, 5}, resolve_face(walled, {0, 0}), walled), Blocked);
}

TEST_CASE("unfolding over the ridge") {
  const Fixture fx = ridge_fixture();
  const int e = ridge_edge(fx.scene);
  const std::vector<int> seq{e};
  const Point3 s{-1, 0, 1}, t{1, 0, 1};
  const double want = brute_ridge(s, t);
  CHECK(want == doctest::Approx(2.0 * std::numbers::sqrt2).epsilon(1e-9));
  const auto est = oracle_unfold(s, t, seq, fx.scene);
  CHECK(est.kind == OracleKind::Exact);
  CHECK(est.length == doctest::Approx(want).epsilon(1e-12));
  REQUIRE(est.witness.size() == 3);
  CHECK(distance(est.witness[1], {0, 0, 2}) < 1e-9);

  // asymmetric ends
  const Point3 s2{-1.5, 1, 0.5}, t2{0.7, -0.5, 1.3};
  CHECK(oracle_unfold(s2, t2, seq, fx.scene).length == doctest::Approx(brute_ridge(s2, t2)).epsilon(1e-9));
}

TEST_CASE("unfolding a flat configuration") {
  const Fixture fx = ridge_fixture();
  const std::vector<int> seq{ridge_edge(fx.scene)};
  CHECK(oracle_unfold({-1, 0, 2}, {1, 0, 2}, seq, fx.scene).length == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("contact off the edge is infeasible") {
  const Fixture fx = ridge_fixture();
  const std::vector<int> seq{ridge_edge(fx.scene)};
  CHECK_THROWS_AS(oracle_unfold({-1, 8, 1}, {1, 8, 1}, seq, fx.scene), Infeasible);
}

TEST_CASE("two-edge unfolding over a box") {
  // Over a slab: up one top edge, across, down the other.
  const Scene sc = Scene::from_obstacles({make_box({-0.5, -5, 0}, {0.5, 5, 1})});
  const Point3 s{-1, 0, 0.5}, t{1, 0, 0.5};
  // top edges at x = -0.5 and x = 0.5, z = 1
  std::optional<int> e1, e2;
  for (int i = 0; i < sc.edge_count(); ++i) {
    const Segment3 g = sc.edge_segment(i);
    if (g.a.z == 1 && g.b.z == 1 && g.a.x == g.b.x && std::abs(g.a.y - g.b.y) == 10) {
      (g.a.x < 0 ? e1 : e2) = i;
    }
  }
  REQUIRE(e1);
  REQUIRE(e2);
  const std::vector<int> seq{*e1, *e2};
  const double want = 2.0 * std::hypot(0.5, 0.5) + 1.0;
  CHECK(oracle_unfold(s, t, seq, sc).length == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("fine oracle against the exact ridge value") {
  const Fixture fx = ridge_fixture();
  const FaceTarget f = resolve_face(fx.scene, fx.face);
  double prev = 1e300;
  for (double eps_o : {0.1, 0.05, 0.02}) {
    const auto est = oracle_fine(fx.source, f, fx.scene, eps_o);
    CHECK(est.kind == OracleKind::UpperBound);
    CHECK(est.length >= *fx.exact - 1e-9);
    CHECK(est.length <= (1 + 5 * eps_o) * *fx.exact);
    CHECK(est.length <= prev + 1e-9);
    prev = est.length;
    for (std::size_t i = 0; i + 1 < est.witness.size(); ++i) {
      CHECK(fx.scene.segment_free(est.witness[i], est.witness[i + 1]));
    }
  }
}

TEST_CASE("fine oracle on an unobstructed query") {
  const Fixture fx = random_unobstructed_fixture(4);
  const FaceTarget f = resolve_face(fx.scene, fx.face);
  CHECK(oracle_fine(fx.source, f, fx.scene, 0.05).length == doctest::Approx(*fx.exact).epsilon(1e-9));
}

TEST_CASE("exhaustive sequences") {
  const Fixture open = random_unobstructed_fixture(2);
  const FaceTarget fo = resolve_face(open.scene, open.face);
  CHECK(oracle_exhaustive_sequences(open.source, fo, open.scene).length ==
        doctest::Approx(oracle_unobstructed(open.source, fo, open.scene).length).epsilon(1e-12));

  const Fixture ridge = ridge_fixture();
  const FaceTarget fr = resolve_face(ridge.scene, ridge.face);
  CHECK(oracle_exhaustive_sequences(ridge.source, fr, ridge.scene).length ==
        doctest::Approx(*ridge.exact).epsilon(1e-8));
}

TEST_CASE("exhaustive and fine oracles agree on random scenes") {
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Fixture fx = random_fixture(seed);
    const FaceTarget f = resolve_face(fx.scene, fx.face);
    const double fine = oracle_fine(fx.source, f, fx.scene, 0.02).length;
    double exh = 0.0;
    try {
      exh = oracle_exhaustive_sequences(fx.source, f, fx.scene).length;
    } catch (const NoFeasibleSequence&) {
      continue;  // optimum needs more than two contacts
    }
    ++compared;
    // the fine estimate is an upper bound on the optimum, and exh = optimum
    // whenever two contacts suffice
    CHECK(fine <= (1 + 5 * 0.02) * exh + 1e-9);
  }
  CHECK(compared >= 5);
}

TEST_CASE("unfolding is invariant under rigid motions") {
  const Fixture fx = ridge_fixture();
  const Scene moved = rotated(fx.scene);
  const std::vector<int> seq{ridge_edge(fx.scene)};
  const Point3 s{-1.5, 1, 0.5}, t{0.7, -0.5, 1.3};
  const double a = oracle_unfold(s, t, seq, fx.scene).length;
  const double b = oracle_unfold(rotate(s), rotate(t), seq, moved).length;
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}
