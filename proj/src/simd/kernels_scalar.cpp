#include <cmath>

#include "heliocant/simd/kernels.hpp"

namespace heliocant::simd::detail {

void reflect_to_grid_scalar(const SurfaceSoA& s, const double* sun, double scale, const PlaneGrid& g,
                            std::int32_t* cell, double* power) {
  const double sx = sun[0], sy = sun[1], sz = sun[2];
  const double ny_cells = g.cells_y;
  const double nz_cells = g.cells_z;
  const std::size_t n = s.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double c = s.nx[k] * sx + s.ny[k] * sy + s.nz[k] * sz;
    const double c2 = c * 2.0;
    const double rx = c2 * s.nx[k] - sx;
    const double ry = c2 * s.ny[k] - sy;
    const double rz = c2 * s.nz[k] - sz;
    const double t = (g.plane_x - s.px[k]) / rx;
    const double fy = (s.py[k] + t * ry - g.y0) * g.inv_cell;
    const double fz = (s.pz[k] + t * rz - g.z0) * g.inv_cell;
    const bool lit = c > 0.0;
    const bool hit = lit && t > 0.0 && fy >= 0.0 && fy < ny_cells && fz >= 0.0 && fz < nz_cells;
    power[k] = lit ? s.weight[k] * scale * c : 0.0;
    cell[k] = hit ? static_cast<std::int32_t>(std::floor(fz)) * g.cells_y +
                        static_cast<std::int32_t>(std::floor(fy))
                  : -1;
  }
}

void complex_multiply_scalar(double* a, const double* b, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = a[2 * k], ai = a[2 * k + 1];
    const double br = b[2 * k], bi = b[2 * k + 1];
    a[2 * k] = ar * br - ai * bi;
    a[2 * k + 1] = ar * bi + ai * br;
  }
}

void accumulate_scalar(double* dst, const double* src, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) dst[k] += src[k];
}

}  // namespace heliocant::simd::detail
