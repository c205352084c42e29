#include <random>
#include <set>
#include <tuple>

#include "doctest.h"
#include "facepath/scene.hpp"
#include "facepath/scenes.hpp"

using namespace facepath;

namespace {

const char* kTetra = R"({"obstacles": [{"vertices": [[0,0,0],[1,0,0],[0,1,0],[0,0,1]],
                         "triangles": [[0,2,1],[0,1,3],[1,2,3],[0,3,2]]}]})";

// Unique unordered vertex pairs over all triangles, counted from scratch.
std::size_t brute_edge_count(const std::vector<Obstacle>& obs) {
  std::set<std::tuple<int, int, int>> pairs;
  for (int o = 0; o < static_cast<int>(obs.size()); ++o) {
    for (const auto& t : obs[o].triangles) {
      for (int k = 0; k < 3; ++k) {
        const int a = t[k], b = t[(k + 1) % 3];
        pairs.emplace(o, std::min(a, b), std::max(a, b));
      }
    }
  }
  return pairs.size();
}

}  // namespace

TEST_CASE("load a tetrahedron") {
  const Scene s = load_scene(kTetra);
  CHECK(s.vertex_count() == 4);
  CHECK(s.triangle_count() == 4);
  CHECK(s.edge_count() == 6);
  CHECK(s.obstacle_closed(0));
}

TEST_CASE("invalid scenes") {
  CHECK_THROWS_AS(load_scene(R"({"obstacles": [{"vertices": [[0,0,0],[1,0,0],[2,0,0]], "triangles": [[0,1,2]]}]})"),
                  ValidationError);
  CHECK_THROWS_AS(load_scene(R"({"obstacles": []})"), ValidationError);
  CHECK_THROWS_AS(load_scene(R"({"obstacles": [{"vertices": [[0,0,0],[1,0,0],[0,1,0]], "triangles": [[0,1,5]]}]})"),
                  ValidationError);
  CHECK_THROWS_AS(load_scene("{not json"), ParseError);
  CHECK_THROWS_AS(load_scene(R"({"shapes": []})"), ParseError);
}

TEST_CASE("two cubes have 36 edges") {
  std::vector<Obstacle> obs{make_box({0, 0, 0}, {1, 1, 1}), make_box({3, 0, 0}, {4, 1, 1})};
  const std::size_t expected = brute_edge_count(obs);
  CHECK(expected == 36);
  const Scene s = Scene::from_obstacles(obs);
  CHECK(static_cast<std::size_t>(s.edge_count()) == expected);

  std::set<std::pair<int, int>> seen;
  for (const Edge& e : s.edges()) CHECK(seen.emplace(std::min(e.a, e.b), std::max(e.a, e.b)).second);
}

TEST_CASE("face references") {
  const Scene s = load_scene(kTetra);
  const FaceTarget f = resolve_face(s, FaceRef::parse("0:0"));
  CHECK(f.triangle.v0 == Point3{0, 0, 0});
  CHECK(std::abs(std::abs(f.plane.n.z) - 1.0) < 1e-12);
  CHECK(std::abs(f.plane.d) < 1e-12);
  CHECK_THROWS_AS(resolve_face(s, FaceRef::parse("0:4")), BadFaceRef);
  CHECK_THROWS_AS(resolve_face(s, FaceRef::parse("1:0")), BadFaceRef);
  CHECK_THROWS_AS(FaceRef::parse("0-1"), BadFaceRef);
  CHECK(FaceRef::parse("2:7") == FaceRef{2, 7});

  const Scene cube = Scene::from_obstacles({make_box({0, 0, 0}, {1, 1, 1})});
  const FaceTarget bottom = resolve_face(cube, {0, 0});
  CHECK(std::abs(std::abs(bottom.plane.n.z) - 1.0) < 1e-12);
  CHECK(std::abs(bottom.plane.d) < 1e-12);
}

TEST_CASE("source validation") {
  const Scene cube = Scene::from_obstacles({make_box({0, 0, 0}, {1, 1, 1})});
  CHECK_NOTHROW(validate_source(cube, {2, 2, 2}));
  CHECK_THROWS_AS(validate_source(cube, {0.5, 0.5, 0.5}), SourceInsideObstacle);
  CHECK_NOTHROW(validate_source(cube, {0.5, 0.5, 1.0}));
  // open obstacles cannot be checked and are reported back
  const Scene wall = Scene::from_obstacles({make_quad({0, -1, -1}, {0, 1, -1}, {0, 1, 1}, {0, -1, 1})});
  CHECK(validate_source(wall, {1, 0, 0}) == std::vector<int>{0});
}

TEST_CASE("serialization round-trips bit for bit") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Fixture fx = random_fixture(seed);
    const std::string text = serialize_scene(fx.scene, SceneQuery{fx.source, fx.face});
    const Scene back = load_scene(text);
    REQUIRE(back.vertex_count() == fx.scene.vertex_count());
    REQUIRE(back.edge_count() == fx.scene.edge_count());
    REQUIRE(back.triangle_count() == fx.scene.triangle_count());
    for (int i = 0; i < back.vertex_count(); ++i) CHECK(back.vertex(i) == fx.scene.vertex(i));
    const auto q = load_query(text);
    REQUIRE(q.has_value());
    CHECK(q->source == fx.source);
    CHECK(q->face == fx.face);
    CHECK(serialize_scene(back, *q) == text);
  }
}

TEST_CASE("diameter bounds pairwise vertex distances") {
  const Fixture fx = random_fixture(3);
  const auto& v = fx.scene.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) CHECK(distance(v[i], v[j]) <= fx.scene.diameter() + 1e-12);
  }
}

TEST_CASE("segment_free sees through grazing and not through solids") {
  const Scene cube = Scene::from_obstacles({make_box({0, 0, 0}, {1, 1, 1})});
  // both on the top face, segment inside the face
  CHECK(cube.segment_free({0.2, 0.2, 1}, {0.8, 0.7, 1}));
  // across the solid between two faces
  CHECK_FALSE(cube.segment_free({0, 0.5, 0.5}, {1, 0.5, 0.5}));
  CHECK_FALSE(cube.segment_free({-1, 0.5, 0.5}, {2, 0.5, 0.5}));
  // diagonal of a face from vertex to vertex, and along an edge
  CHECK(cube.segment_free({0, 0, 1}, {1, 1, 1}));
  CHECK(cube.segment_free({0, 0, 0}, {1, 0, 0}));
  // main diagonal through the interior touches the surface only at its ends
  CHECK_FALSE(cube.segment_free({0, 0, 0}, {1, 1, 1}));
}

TEST_CASE("open surfaces block through their interior edges") {
  // Quad diagonal runs from (0,-1,-1) to (0,1,1) through the origin.
  const Scene wall = Scene::from_obstacles({make_quad({0, -1, -1}, {0, 1, -1}, {0, 1, 1}, {0, -1, 1})});
  CHECK_FALSE(wall.segment_free({-2, 0, 0}, {2, 0, 0}));
  CHECK_FALSE(wall.segment_free({-1, 0.5, 0.5}, {1, -0.5, -0.5}));
  // in the wall's plane, or touching it from one side only
  CHECK(wall.segment_free({0, -2, -2}, {0, 2, 2}));
  CHECK(wall.segment_free({-1, 0, 0}, {0, 0, 0}));
  // around the outer boundary edge
  CHECK(wall.segment_free({-1, 0, 1.5}, {1, 0, 1.5}));

  int flat = 0;
  for (int e = 0; e < wall.edge_count(); ++e) flat += wall.edge_flat(e);
  CHECK(flat == 1);

  // A bent open surface: crossing the fold from the convex side to the
  // concave side passes through it.
  Obstacle fold;
  fold.vertices = {{0, -1, 0}, {0, 1, 0}, {1, 0, 1}, {-1, 0, 1}};
  fold.triangles = {{0, 1, 2}, {0, 3, 1}};
  const Scene bent = Scene::from_obstacles({fold});
  CHECK_FALSE(bent.segment_free({0, 0, -1}, {0, 0, 1}));
  CHECK(bent.segment_free({-1, 0, -0.5}, {1, 0, -0.5}));
  CHECK_FALSE(bent.edge_flat(*bent.find_edge(0, 1)));
}

TEST_CASE("box face diagonals are flat") {
  const Scene cube = Scene::from_obstacles({make_box({0, 0, 0}, {1, 1, 1})});
  int flat = 0;
  for (int e = 0; e < cube.edge_count(); ++e) flat += cube.edge_flat(e);
  CHECK(flat == 6);
}
