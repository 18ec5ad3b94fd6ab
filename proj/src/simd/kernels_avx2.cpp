// Compiled with -mavx2 (and without -mfma); only reached after a runtime
// CPU check.

#include <immintrin.h>

#include "heliocant/simd/kernels.hpp"

namespace heliocant::simd::detail {

void reflect_to_grid_avx2(const SurfaceSoA& s, const double* sun, double scale, const PlaneGrid& g,
                          std::int32_t* cell, double* power) {
  const std::size_t n = s.size();
  const std::size_t n4 = n - n % 4;

  const __m256d sx = _mm256_set1_pd(sun[0]);
  const __m256d sy = _mm256_set1_pd(sun[1]);
  const __m256d sz = _mm256_set1_pd(sun[2]);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d vscale = _mm256_set1_pd(scale);
  const __m256d plane = _mm256_set1_pd(g.plane_x);
  const __m256d y0 = _mm256_set1_pd(g.y0);
  const __m256d z0 = _mm256_set1_pd(g.z0);
  const __m256d inv = _mm256_set1_pd(g.inv_cell);
  const __m256d ny_cells = _mm256_set1_pd(static_cast<double>(g.cells_y));
  const __m256d nz_cells = _mm256_set1_pd(static_cast<double>(g.cells_z));
  const __m128i row_stride = _mm_set1_epi32(g.cells_y);
  const __m128i miss = _mm_set1_epi32(-1);

  for (std::size_t k = 0; k < n4; k += 4) {
    const __m256d nx = _mm256_loadu_pd(&s.nx[k]);
    const __m256d ny = _mm256_loadu_pd(&s.ny[k]);
    const __m256d nz = _mm256_loadu_pd(&s.nz[k]);

    const __m256d c = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(nx, sx), _mm256_mul_pd(ny, sy)),
                                    _mm256_mul_pd(nz, sz));
    const __m256d c2 = _mm256_mul_pd(c, two);
    const __m256d rx = _mm256_sub_pd(_mm256_mul_pd(c2, nx), sx);
    const __m256d ry = _mm256_sub_pd(_mm256_mul_pd(c2, ny), sy);
    const __m256d rz = _mm256_sub_pd(_mm256_mul_pd(c2, nz), sz);

    const __m256d t = _mm256_div_pd(_mm256_sub_pd(plane, _mm256_loadu_pd(&s.px[k])), rx);
    const __m256d fy = _mm256_mul_pd(
        _mm256_sub_pd(_mm256_add_pd(_mm256_loadu_pd(&s.py[k]), _mm256_mul_pd(t, ry)), y0), inv);
    const __m256d fz = _mm256_mul_pd(
        _mm256_sub_pd(_mm256_add_pd(_mm256_loadu_pd(&s.pz[k]), _mm256_mul_pd(t, rz)), z0), inv);

    const __m256d lit = _mm256_cmp_pd(c, zero, _CMP_GT_OQ);
    __m256d hit = _mm256_and_pd(lit, _mm256_cmp_pd(t, zero, _CMP_GT_OQ));
    hit = _mm256_and_pd(hit, _mm256_cmp_pd(fy, zero, _CMP_GE_OQ));
    hit = _mm256_and_pd(hit, _mm256_cmp_pd(fy, ny_cells, _CMP_LT_OQ));
    hit = _mm256_and_pd(hit, _mm256_cmp_pd(fz, zero, _CMP_GE_OQ));
    hit = _mm256_and_pd(hit, _mm256_cmp_pd(fz, nz_cells, _CMP_LT_OQ));

    const __m256d pw = _mm256_mul_pd(_mm256_mul_pd(_mm256_loadu_pd(&s.weight[k]), vscale), c);
    _mm256_storeu_pd(&power[k], _mm256_and_pd(pw, lit));

    // Zero the misses before conversion so no lane overflows int32.
    const __m128i iy = _mm256_cvttpd_epi32(_mm256_and_pd(_mm256_floor_pd(fy), hit));
    const __m128i iz = _mm256_cvttpd_epi32(_mm256_and_pd(_mm256_floor_pd(fz), hit));
    const __m128i idx = _mm_add_epi32(_mm_mullo_epi32(iz, row_stride), iy);

    const int mask = _mm256_movemask_pd(hit);
    const __m128i lane_mask = _mm_set_epi32((mask & 8) ? -1 : 0, (mask & 4) ? -1 : 0,
                                            (mask & 2) ? -1 : 0, (mask & 1) ? -1 : 0);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(&cell[k]), _mm_blendv_epi8(miss, idx, lane_mask));
  }

  if (n4 < n) {
    SurfaceSoA tail{s.px.subspan(n4), s.py.subspan(n4), s.pz.subspan(n4), s.nx.subspan(n4),
                    s.ny.subspan(n4), s.nz.subspan(n4), s.weight.subspan(n4)};
    reflect_to_grid_scalar(tail, sun, scale, g, cell + n4, power + n4);
  }
}

void complex_multiply_avx2(double* a, const double* b, std::size_t n) {
  const std::size_t n2 = n - n % 2;
  for (std::size_t k = 0; k < n2; k += 2) {
    const __m256d va = _mm256_loadu_pd(a + 2 * k);
    const __m256d vb = _mm256_loadu_pd(b + 2 * k);
    const __m256d br = _mm256_permute_pd(vb, 0b0000);      // br br
    const __m256d bi = _mm256_permute_pd(vb, 0b1111);      // bi bi
    const __m256d swapped = _mm256_permute_pd(va, 0b0101);  // ai ar
    // (ar*br - ai*bi, ai*br + ar*bi)
    const __m256d r = _mm256_addsub_pd(_mm256_mul_pd(va, br), _mm256_mul_pd(swapped, bi));
    _mm256_storeu_pd(a + 2 * k, r);
  }
  if (n2 < n) complex_multiply_scalar(a + 2 * n2, b + 2 * n2, n - n2);
}

void accumulate_avx2(double* dst, const double* src, std::size_t n) {
  const std::size_t n4 = n - n % 4;
  for (std::size_t k = 0; k < n4; k += 4) {
    _mm256_storeu_pd(dst + k, _mm256_add_pd(_mm256_loadu_pd(dst + k), _mm256_loadu_pd(src + k)));
  }
  if (n4 < n) accumulate_scalar(dst + n4, src + n4, n - n4);
}

}  // namespace heliocant::simd::detail
