#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "facepath/scene.hpp"

// Scene builders and the fixed and seeded query fixtures used by tests, the
// acceptance run and the bench command.

namespace facepath {

Obstacle make_box(const Point3& lo, const Point3& hi);
Obstacle make_tetrahedron(const Point3& a, const Point3& b, const Point3& c, const Point3& d);
/// Open two-triangle quad a-b-c-d.
Obstacle make_quad(const Point3& a, const Point3& b, const Point3& c, const Point3& d);
/// Closed prism under the triangle `top`; triangle 0 is `top` itself.
Obstacle make_prism(const Triangle3& top, double depth);

struct Fixture {
  std::string name;
  Scene scene;
  Point3 source;
  FaceRef face;
  std::optional<double> exact;  // known optimum, when there is one
};

/// Thin wall in x = 0 whose top edge z = 2 is the ridge; the target
/// triangle lies in x = z. The optimum crosses (0,0,2) and lands at (1,0,1).
Fixture ridge_fixture();

/// Target prism with 1..4 blocker boxes or tetrahedra between source and face;
/// at most 6 obstacles and 56 triangles.
Fixture random_fixture(std::uint64_t seed);

/// Source that sees its closest face point; optionally with stray blockers.
Fixture random_unobstructed_fixture(std::uint64_t seed);

/// Uniform double in [0,1) from the top 53 bits, independent of the
/// standard library's distribution implementations.
double uniform01(std::mt19937_64& rng);
double uniform(std::mt19937_64& rng, double lo, double hi);

}  // namespace facepath
