#pragma once

// Data-parallel inner loops of the flux engines. Each kernel has a scalar
// reference implementation and an AVX2 variant selected at runtime. Both
// variants perform the same IEEE operations in the same order (no FMA
// contraction), so their outputs are bit-identical.

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>

namespace heliocant::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// True when the CPU and this build support `isa`.
bool supported(Isa isa);

/// Best supported ISA, unless HELIOCANT_SIMD=scalar|avx2 overrides it.
Isa active_isa();

/// Structure-of-arrays facet surface samples. `weight` is the per-sample
/// power scale (area * reflectivity * DNI-normalization) before cos(i).
struct SurfaceSoA {
  std::span<const double> px, py, pz;
  std::span<const double> nx, ny, nz;
  std::span<const double> weight;
  std::size_t size() const { return px.size(); }
};

/// Receiver plane x' = plane_x with a grid whose lower-left corner is
/// (y0, z0) and whose cells are 1 / inv_cell wide.
struct PlaneGrid {
  double plane_x = 0.0;
  double y0 = 0.0;
  double z0 = 0.0;
  double inv_cell = 1.0;
  int cells_y = 0;
  int cells_z = 0;
};

/// For every sample: reflect the incoming sun direction `sun` (pointing
/// toward the sun) about the sample normal, intersect the plane, and emit
/// the flat cell index (row * cells_y + col) or -1 when the ray misses,
/// together with the carried power weight * max(cos i, 0).
void reflect_to_grid(Isa isa, const SurfaceSoA& samples, const double sun[3], double scale,
                     const PlaneGrid& grid, std::span<std::int32_t> cell, std::span<double> power);

/// a[k] *= b[k], computed as (ar*br - ai*bi, ar*bi + ai*br).
void complex_multiply(Isa isa, std::span<std::complex<double>> a, std::span<const std::complex<double>> b);

/// dst[k] += src[k].
void accumulate(Isa isa, std::span<double> dst, std::span<const double> src);

namespace detail {
void reflect_to_grid_scalar(const SurfaceSoA&, const double*, double, const PlaneGrid&, std::int32_t*, double*);
void complex_multiply_scalar(double* a, const double* b, std::size_t n);
void accumulate_scalar(double* dst, const double* src, std::size_t n);
#if defined(HELIOCANT_HAVE_AVX2)
void reflect_to_grid_avx2(const SurfaceSoA&, const double*, double, const PlaneGrid&, std::int32_t*, double*);
void complex_multiply_avx2(double* a, const double* b, std::size_t n);
void accumulate_avx2(double* dst, const double* src, std::size_t n);
#endif
}  // namespace detail

}  // namespace heliocant::simd
