#include <random>

#include "doctest.h"
#include "facepath/kernels.hpp"
#include "facepath/scenes.hpp"
#include "support.hpp"

using namespace facepath;
using namespace facepath::kernels;

TEST_CASE("crossing kernel: scalar and AVX2 agree") {
  if (!avx2_available()) {
    MESSAGE("AVX2 not available; only the scalar kernel is exercised");
    return;
  }
  std::mt19937_64 rng(21);
  for (int scene = 0; scene < 40; ++scene) {
    TriangleSoA soa;
    std::vector<Triangle3> tris;
    const int count = 1 + static_cast<int>(rng() % 37);
    while (static_cast<int>(tris.size()) < count) {
      Triangle3 t;
      for (int k = 0; k < 3; ++k) t[k] = {uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
      if (t.area() < 1e-3) continue;
      tris.push_back(t);
      soa.push(t);
    }
    for (int i = 0; i < 500; ++i) {
      Point3 p{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)};
      Point3 q{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)};
      // Some segments start exactly on a triangle vertex or edge.
      if (i % 5 == 0) p = tris[rng() % tris.size()].v0;
      if (i % 7 == 0) {
        const auto& t = tris[rng() % tris.size()];
        q = edge_point(t.v1, t.v2, uniform01(rng));
      }
      const std::size_t begin = rng() % soa.size();
      const std::size_t end = begin + rng() % (soa.size() - begin + 1);
      CHECK(any_crossing_scalar(soa, begin, end, p, q, 1e-9) == any_crossing_avx2(soa, begin, end, p, q, 1e-9));
    }
  }
}

TEST_CASE("crossing kernel matches the per-triangle predicate") {
  std::mt19937_64 rng(5);
  TriangleSoA soa;
  std::vector<Triangle3> tris;
  while (tris.size() < 13) {
    Triangle3 t;
    for (int k = 0; k < 3; ++k) t[k] = {uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
    if (t.area() < 1e-2) continue;
    tris.push_back(t);
    soa.push(t);
  }
  const TolerancePolicy tol{};
  for (int i = 0; i < 3000; ++i) {
    const Point3 p{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)};
    const Point3 q{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)};
    bool any = false;
    for (const auto& t : tris) any = any || segment_triangle_blocked({p, q}, t, tol);
    CHECK(any_crossing_scalar(soa, 0, soa.size(), p, q, tol.abs) == any);
  }
}

TEST_CASE("cone membership: scalar and AVX2 agree") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    AxisSoA axes;
    const int count = 1 + static_cast<int>(rng() % 71);
    for (int i = 0; i < count; ++i) {
      const Vec3 a = support::random_unit(rng);
      axes.x.push_back(a.x);
      axes.y.push_back(a.y);
      axes.z.push_back(a.z);
    }
    for (int i = 0; i < 100; ++i) {
      const Vec3 d = support::random_unit(rng);
      const double c = uniform(rng, 0.5, 1.0);
      std::vector<std::uint8_t> a(axes.size()), b(axes.size());
      cone_membership_scalar(axes, d, c, a);
      if (avx2_available()) {
        cone_membership_avx2(axes, d, c, b);
        CHECK(a == b);
      }
      for (std::size_t k = 0; k < axes.size(); ++k) {
        const double dot = d.x * axes.x[k] + d.y * axes.y[k] + d.z * axes.z[k];
        CHECK((a[k] != 0) == (dot >= c));
      }
    }
  }
}

TEST_CASE("forcing the ISA switches the dispatcher") {
  const Isa before = active_isa();
  force_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  if (avx2_available()) {
    force_isa(Isa::Avx2);
    CHECK(active_isa() == Isa::Avx2);
  }
  force_isa(before);
}
