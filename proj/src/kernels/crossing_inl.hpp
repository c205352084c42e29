#pragma once

// Scalar per-triangle crossing test shared by the reference kernel, the AVX2
// tail loop, and geom::segment_triangle_blocked.

#include "facepath/kernels.hpp"

namespace facepath::kernels::detail {

inline bool crossing_one(const TriangleSoA& t, std::size_t i, const Point3& p, const Point3& q, double tol) {
  const double sx_lo = p.x < q.x ? p.x : q.x;
  const double sx_hi = p.x < q.x ? q.x : p.x;
  const double sy_lo = p.y < q.y ? p.y : q.y;
  const double sy_hi = p.y < q.y ? q.y : p.y;
  const double sz_lo = p.z < q.z ? p.z : q.z;
  const double sz_hi = p.z < q.z ? q.z : p.z;
  if (sx_hi < t.lox[i] - tol || sx_lo > t.hix[i] + tol) return false;
  if (sy_hi < t.loy[i] - tol || sy_lo > t.hiy[i] + tol) return false;
  if (sz_hi < t.loz[i] - tol || sz_lo > t.hiz[i] + tol) return false;

  const double da = t.nx[i] * p.x + t.ny[i] * p.y + t.nz[i] * p.z - t.d[i];
  const double db = t.nx[i] * q.x + t.ny[i] * q.y + t.nz[i] * q.z - t.d[i];
  const bool straddle = (da > tol && db < -tol) || (da < -tol && db > tol);
  if (!straddle) return false;

  const double s = da / (da - db);
  const double x = p.x + (q.x - p.x) * s;
  const double y = p.y + (q.y - p.y) * s;
  const double z = p.z + (q.z - p.z) * s;
  const double e0 = t.m0x[i] * x + t.m0y[i] * y + t.m0z[i] * z - t.c0[i];
  const double e1 = t.m1x[i] * x + t.m1y[i] * y + t.m1z[i] * z - t.c1[i];
  const double e2 = t.m2x[i] * x + t.m2y[i] * y + t.m2z[i] * z - t.c2[i];
  return e0 > tol && e1 > tol && e2 > tol;
}

}  // namespace facepath::kernels::detail
