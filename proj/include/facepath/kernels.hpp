#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference and an AVX2
// variant; both evaluate the same IEEE operation sequence (no FMA contraction)
// so they return identical results. The variant is chosen once at runtime.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "facepath/geom.hpp"

namespace facepath::kernels {

enum class Isa { Scalar, Avx2 };

bool avx2_available();
/// ISA used by the dispatching entry points. Defaults to AVX2 when the CPU
/// supports it, unless FACEPATH_FORCE_SCALAR is set in the environment.
Isa active_isa();
void force_isa(Isa isa);
const char* isa_name(Isa isa);

/// Triangle data in structure-of-arrays layout, precomputed for the strict
/// crossing test: unit normal and offset, inward unit edge normals with
/// offsets, and the bounding box.
class TriangleSoA {
 public:
  void push(const Triangle3& tri);
  std::size_t size() const { return nx.size(); }

  std::vector<double> nx, ny, nz, d;
  std::vector<double> m0x, m0y, m0z, c0;
  std::vector<double> m1x, m1y, m1z, c1;
  std::vector<double> m2x, m2y, m2z, c2;
  std::vector<double> lox, loy, loz, hix, hiy, hiz;
};

/// One segment against triangles [begin, end): true iff the open segment
/// crosses any of them transversally at a triangle-interior point.
bool any_crossing_scalar(const TriangleSoA& tris, std::size_t begin, std::size_t end, const Point3& p,
                         const Point3& q, double tol);
bool any_crossing_avx2(const TriangleSoA& tris, std::size_t begin, std::size_t end, const Point3& p,
                       const Point3& q, double tol);
bool any_crossing(const TriangleSoA& tris, std::size_t begin, std::size_t end, const Point3& p,
                  const Point3& q, double tol);

/// Unit axes in structure-of-arrays layout.
struct AxisSoA {
  std::vector<double> x, y, z;
  std::size_t size() const { return x.size(); }
};

/// out[i] = 1 iff axis i lies within the angle whose cosine is `cos_theta`
/// of the unit direction `dir`.
void cone_membership_scalar(const AxisSoA& axes, const Vec3& dir, double cos_theta, std::span<std::uint8_t> out);
void cone_membership_avx2(const AxisSoA& axes, const Vec3& dir, double cos_theta, std::span<std::uint8_t> out);
void cone_membership(const AxisSoA& axes, const Vec3& dir, double cos_theta, std::span<std::uint8_t> out);

}  // namespace facepath::kernels
