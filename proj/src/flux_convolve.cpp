#include <complex>
#include <memory>

#include <fftw3.h>

#include "heliocant/error.hpp"
#include "heliocant/flux.hpp"

namespace heliocant {
namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

/// Smallest n' >= n whose only prime factors are 2, 3, 5, 7.
int smooth_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

/// Real-to-complex transform of a zero-padded rows x cols image.
class PaddedTransform {
 public:
  PaddedTransform(int rows, int cols)
      : rows_(rows),
        cols_(cols),
        half_(cols / 2 + 1),
        real_(fftw_alloc_real(static_cast<std::size_t>(rows) * cols)),
        spectrum_(fftw_alloc_complex(static_cast<std::size_t>(rows) * half_)),
        forward_(fftw_plan_dft_r2c_2d(rows, cols, real_.get(), spectrum_.get(), FFTW_ESTIMATE)),
        inverse_(fftw_plan_dft_c2r_2d(rows, cols, spectrum_.get(), real_.get(), FFTW_ESTIMATE)) {
    if (!real_ || !spectrum_ || !forward_ || !inverse_) {
      throw Error(ErrorCode::InvalidArgument, "FFTW allocation or planning failed");
    }
  }

  double* real() { return real_.get(); }
  std::span<std::complex<double>> spectrum() {
    return {reinterpret_cast<std::complex<double>*>(spectrum_.get()), static_cast<std::size_t>(rows_) * half_};
  }

  void load(const double* src, int src_cols, int src_rows) {
    std::fill_n(real_.get(), static_cast<std::size_t>(rows_) * cols_, 0.0);
    for (int r = 0; r < src_rows; ++r) {
      std::copy_n(src + static_cast<std::size_t>(r) * src_cols, src_cols,
                  real_.get() + static_cast<std::size_t>(r) * cols_);
    }
  }
  void forward() { fftw_execute(forward_.get()); }
  void inverse() { fftw_execute(inverse_.get()); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  int rows_;
  int cols_;
  int half_;
  FftwBuffer<double> real_;
  FftwBuffer<fftw_complex> spectrum_;
  Plan forward_;
  Plan inverse_;
};

}  // namespace

FluxMap convolve_spot(const FluxMap& spot, const SunKernel& kernel, simd::Isa isa) {
  spot.grid.validate();
  FluxMap out = spot;
  out.engine = "conv";

  if (kernel.is_delta()) {
    const double w = kernel.weights(kernel.radius, kernel.radius);
    if (w != 1.0) {
      for (double& v : out.values) v *= w;
    }
    return out;
  }

  const int gy = spot.grid.cells_y;
  const int gz = spot.grid.cells_z;
  const int side = kernel.weights.cols();
  const int K = kernel.radius;
  const int py = smooth_size(gy + side - 1);
  const int pz = smooth_size(gz + side - 1);

  PaddedTransform image(pz, py);
  PaddedTransform psf(pz, py);
  image.load(spot.values.data(), gy, gz);
  psf.load(kernel.weights.data().data(), side, side);
  image.forward();
  psf.forward();
  simd::complex_multiply(isa, image.spectrum(), psf.spectrum());
  image.inverse();

  // Linear convolution lives in [0, g + side - 1); the centred crop starts at K.
  const double norm = 1.0 / (static_cast<double>(py) * pz);
  const double* full = image.real();
  double full_total = 0.0;
  double kept_total = 0.0;
  for (int r = 0; r < gz + side - 1; ++r) {
    for (int c = 0; c < gy + side - 1; ++c) {
      double v = full[static_cast<std::size_t>(r) * py + c] * norm;
      // FFT round-off leaves tiny negative values where the exact result is 0.
      if (v < 0.0) v = 0.0;
      full_total += v;
      const int oy = c - K;
      const int oz = r - K;
      if (oy >= 0 && oy < gy && oz >= 0 && oz < gz) {
        out.at(oy, oz) = v;
        kept_total += v;
      }
    }
  }
  out.spilled = spot.spilled + (full_total - kept_total) * spot.grid.cell_area();
  return out;
}

}  // namespace heliocant
