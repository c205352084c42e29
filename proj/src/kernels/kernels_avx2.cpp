// Compiled with -mavx2 only; no FMA so lane arithmetic matches the scalar path.

#include <immintrin.h>

#include "crossing_inl.hpp"
#include "facepath/kernels.hpp"

namespace facepath::kernels {

namespace {

inline __m256d load(const std::vector<double>& v, std::size_t i) { return _mm256_loadu_pd(v.data() + i); }

inline __m256d dot3(__m256d ax, __m256d ay, __m256d az, __m256d bx, __m256d by, __m256d bz) {
  return _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(ax, bx), _mm256_mul_pd(ay, by)), _mm256_mul_pd(az, bz));
}

inline __m256d gt(__m256d a, __m256d b) { return _mm256_cmp_pd(a, b, _CMP_GT_OQ); }
inline __m256d lt(__m256d a, __m256d b) { return _mm256_cmp_pd(a, b, _CMP_LT_OQ); }

}  // namespace

bool any_crossing_avx2(const TriangleSoA& t, std::size_t begin, std::size_t end, const Point3& p, const Point3& q,
                       double tol) {
  const __m256d vtol = _mm256_set1_pd(tol);
  const __m256d vntol = _mm256_set1_pd(-tol);
  const __m256d px = _mm256_set1_pd(p.x), py = _mm256_set1_pd(p.y), pz = _mm256_set1_pd(p.z);
  const __m256d qx = _mm256_set1_pd(q.x), qy = _mm256_set1_pd(q.y), qz = _mm256_set1_pd(q.z);
  const __m256d sxlo = _mm256_set1_pd(p.x < q.x ? p.x : q.x), sxhi = _mm256_set1_pd(p.x < q.x ? q.x : p.x);
  const __m256d sylo = _mm256_set1_pd(p.y < q.y ? p.y : q.y), syhi = _mm256_set1_pd(p.y < q.y ? q.y : p.y);
  const __m256d szlo = _mm256_set1_pd(p.z < q.z ? p.z : q.z), szhi = _mm256_set1_pd(p.z < q.z ? q.z : p.z);
  const __m256d dx = _mm256_sub_pd(qx, px), dy = _mm256_sub_pd(qy, py), dz = _mm256_sub_pd(qz, pz);

  std::size_t i = begin;
  for (; i + 4 <= end; i += 4) {
    __m256d reject = _mm256_or_pd(lt(sxhi, _mm256_sub_pd(load(t.lox, i), vtol)),
                                  gt(sxlo, _mm256_add_pd(load(t.hix, i), vtol)));
    reject = _mm256_or_pd(reject, lt(syhi, _mm256_sub_pd(load(t.loy, i), vtol)));
    reject = _mm256_or_pd(reject, gt(sylo, _mm256_add_pd(load(t.hiy, i), vtol)));
    reject = _mm256_or_pd(reject, lt(szhi, _mm256_sub_pd(load(t.loz, i), vtol)));
    reject = _mm256_or_pd(reject, gt(szlo, _mm256_add_pd(load(t.hiz, i), vtol)));
    if (_mm256_movemask_pd(reject) == 0xF) continue;

    const __m256d nx = load(t.nx, i), ny = load(t.ny, i), nz = load(t.nz, i), d = load(t.d, i);
    const __m256d da = _mm256_sub_pd(dot3(nx, ny, nz, px, py, pz), d);
    const __m256d db = _mm256_sub_pd(dot3(nx, ny, nz, qx, qy, qz), d);
    const __m256d straddle =
        _mm256_or_pd(_mm256_and_pd(gt(da, vtol), lt(db, vntol)), _mm256_and_pd(lt(da, vntol), gt(db, vtol)));
    __m256d hit = _mm256_andnot_pd(reject, straddle);
    if (_mm256_movemask_pd(hit) == 0) continue;

    const __m256d s = _mm256_div_pd(da, _mm256_sub_pd(da, db));
    const __m256d x = _mm256_add_pd(px, _mm256_mul_pd(dx, s));
    const __m256d y = _mm256_add_pd(py, _mm256_mul_pd(dy, s));
    const __m256d z = _mm256_add_pd(pz, _mm256_mul_pd(dz, s));
    const __m256d e0 = _mm256_sub_pd(dot3(load(t.m0x, i), load(t.m0y, i), load(t.m0z, i), x, y, z), load(t.c0, i));
    const __m256d e1 = _mm256_sub_pd(dot3(load(t.m1x, i), load(t.m1y, i), load(t.m1z, i), x, y, z), load(t.c1, i));
    const __m256d e2 = _mm256_sub_pd(dot3(load(t.m2x, i), load(t.m2y, i), load(t.m2z, i), x, y, z), load(t.c2, i));
    hit = _mm256_and_pd(hit, _mm256_and_pd(gt(e0, vtol), _mm256_and_pd(gt(e1, vtol), gt(e2, vtol))));
    if (_mm256_movemask_pd(hit) != 0) return true;
  }
  for (; i < end; ++i) {
    if (detail::crossing_one(t, i, p, q, tol)) return true;
  }
  return false;
}

void cone_membership_avx2(const AxisSoA& axes, const Vec3& dir, double cos_theta, std::span<std::uint8_t> out) {
  const std::size_t n = axes.size();
  const __m256d dx = _mm256_set1_pd(dir.x), dy = _mm256_set1_pd(dir.y), dz = _mm256_set1_pd(dir.z);
  const __m256d c = _mm256_set1_pd(cos_theta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dot = dot3(load(axes.x, i), load(axes.y, i), load(axes.z, i), dx, dy, dz);
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(dot, c, _CMP_GE_OQ));
    out[i] = mask & 1;
    out[i + 1] = (mask >> 1) & 1;
    out[i + 2] = (mask >> 2) & 1;
    out[i + 3] = (mask >> 3) & 1;
  }
  for (; i < n; ++i) {
    const double dot = axes.x[i] * dir.x + axes.y[i] * dir.y + axes.z[i] * dir.z;
    out[i] = dot >= cos_theta ? 1 : 0;
  }
}

}  // namespace facepath::kernels
