#include <cstdlib>
#include <string>

#include "heliocant/error.hpp"
#include "heliocant/simd/kernels.hpp"

namespace heliocant::simd {

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(HELIOCANT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

namespace {

Isa detect() {
  if (const char* env = std::getenv("HELIOCANT_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && supported(Isa::avx2)) return Isa::avx2;
  }
  return supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

void require(Isa isa) {
  if (!supported(isa)) {
    throw Error(ErrorCode::InvalidArgument, "SIMD variant '" + std::string(to_string(isa)) + "' unavailable");
  }
}

}  // namespace

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

void reflect_to_grid(Isa isa, const SurfaceSoA& samples, const double sun[3], double scale,
                     const PlaneGrid& grid, std::span<std::int32_t> cell, std::span<double> power) {
  if (cell.size() < samples.size() || power.size() < samples.size()) {
    throw Error(ErrorCode::InvalidArgument, "reflect_to_grid output spans too small");
  }
  require(isa);
#if defined(HELIOCANT_HAVE_AVX2)
  if (isa == Isa::avx2) {
    detail::reflect_to_grid_avx2(samples, sun, scale, grid, cell.data(), power.data());
    return;
  }
#endif
  detail::reflect_to_grid_scalar(samples, sun, scale, grid, cell.data(), power.data());
}

void complex_multiply(Isa isa, std::span<std::complex<double>> a, std::span<const std::complex<double>> b) {
  if (b.size() < a.size()) throw Error(ErrorCode::InvalidArgument, "complex_multiply size mismatch");
  require(isa);
  auto* pa = reinterpret_cast<double*>(a.data());
  const auto* pb = reinterpret_cast<const double*>(b.data());
#if defined(HELIOCANT_HAVE_AVX2)
  if (isa == Isa::avx2) {
    detail::complex_multiply_avx2(pa, pb, a.size());
    return;
  }
#endif
  detail::complex_multiply_scalar(pa, pb, a.size());
}

void accumulate(Isa isa, std::span<double> dst, std::span<const double> src) {
  if (src.size() != dst.size()) throw Error(ErrorCode::InvalidArgument, "accumulate size mismatch");
  require(isa);
#if defined(HELIOCANT_HAVE_AVX2)
  if (isa == Isa::avx2) {
    detail::accumulate_avx2(dst.data(), src.data(), dst.size());
    return;
  }
#endif
  detail::accumulate_scalar(dst.data(), src.data(), dst.size());
}

}  // namespace heliocant::simd
