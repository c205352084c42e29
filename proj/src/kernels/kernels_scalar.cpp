#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>

#include "crossing_inl.hpp"
#include "facepath/kernels.hpp"

namespace facepath::kernels {

namespace {

Isa detect_isa() {
  if (std::getenv("FACEPATH_FORCE_SCALAR") != nullptr) return Isa::Scalar;
  return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& isa_slot() {
  static std::atomic<Isa> slot{detect_isa()};
  return slot;
}

}  // namespace

bool avx2_available() {
#if defined(FACEPATH_HAVE_AVX2_KERNELS) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() { return isa_slot().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_available()) isa = Isa::Scalar;
  isa_slot().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void TriangleSoA::push(const Triangle3& tri) {
  const Vec3 n = (tri.v1 - tri.v0).cross(tri.v2 - tri.v0).normalized();
  nx.push_back(n.x);
  ny.push_back(n.y);
  nz.push_back(n.z);
  d.push_back(n.dot(tri.v0));

  auto edge = [&](const Point3& a, const Point3& b, std::vector<double>& mx, std::vector<double>& my,
                  std::vector<double>& mz, std::vector<double>& c) {
    const Vec3 m = n.cross(b - a).normalized();
    mx.push_back(m.x);
    my.push_back(m.y);
    mz.push_back(m.z);
    c.push_back(m.dot(a));
  };
  edge(tri.v0, tri.v1, m0x, m0y, m0z, c0);
  edge(tri.v1, tri.v2, m1x, m1y, m1z, c1);
  edge(tri.v2, tri.v0, m2x, m2y, m2z, c2);

  lox.push_back(std::min({tri.v0.x, tri.v1.x, tri.v2.x}));
  loy.push_back(std::min({tri.v0.y, tri.v1.y, tri.v2.y}));
  loz.push_back(std::min({tri.v0.z, tri.v1.z, tri.v2.z}));
  hix.push_back(std::max({tri.v0.x, tri.v1.x, tri.v2.x}));
  hiy.push_back(std::max({tri.v0.y, tri.v1.y, tri.v2.y}));
  hiz.push_back(std::max({tri.v0.z, tri.v1.z, tri.v2.z}));
}

bool any_crossing_scalar(const TriangleSoA& tris, std::size_t begin, std::size_t end, const Point3& p,
                         const Point3& q, double tol) {
  for (std::size_t i = begin; i < end; ++i) {
    if (detail::crossing_one(tris, i, p, q, tol)) return true;
  }
  return false;
}

void cone_membership_scalar(const AxisSoA& axes, const Vec3& dir, double cos_theta, std::span<std::uint8_t> out) {
  const std::size_t n = axes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double c = axes.x[i] * dir.x + axes.y[i] * dir.y + axes.z[i] * dir.z;
    out[i] = c >= cos_theta ? 1 : 0;
  }
}

#if !defined(FACEPATH_HAVE_AVX2_KERNELS)
bool any_crossing_avx2(const TriangleSoA& tris, std::size_t begin, std::size_t end, const Point3& p,
                       const Point3& q, double tol) {
  return any_crossing_scalar(tris, begin, end, p, q, tol);
}

void cone_membership_avx2(const AxisSoA& axes, const Vec3& dir, double cos_theta, std::span<std::uint8_t> out) {
  cone_membership_scalar(axes, dir, cos_theta, out);
}
#endif

bool any_crossing(const TriangleSoA& tris, std::size_t begin, std::size_t end, const Point3& p, const Point3& q,
                  double tol) {
  if (active_isa() == Isa::Avx2) return any_crossing_avx2(tris, begin, end, p, q, tol);
  return any_crossing_scalar(tris, begin, end, p, q, tol);
}

void cone_membership(const AxisSoA& axes, const Vec3& dir, double cos_theta, std::span<std::uint8_t> out) {
  if (active_isa() == Isa::Avx2) {
    cone_membership_avx2(axes, dir, cos_theta, out);
  } else {
    cone_membership_scalar(axes, dir, cos_theta, out);
  }
}

}  // namespace facepath::kernels
