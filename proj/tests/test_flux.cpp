#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "heliocant/error.hpp"
#include "heliocant/flux.hpp"
#include "heliocant/metrics.hpp"

using namespace heliocant;

namespace {

struct Fixture {
  Scene scene;
  SunPosition sun;
  RealizedHeliostat heliostat;

  explicit Fixture(const SunPosition& s, CantingVariant v = CantingVariant::off_axis,
                   const HeliostatSpec& spec = HeliostatSpec{})
      : sun(s) {
    heliostat = aim_heliostat(spec, compute_canting(scene, spec, v), sun_vector(sun), scene.receiver);
  }

  FluxMap map(Engine e, const SamplingSpec& sampling) const {
    return compute_flux(e, std::span(&heliostat, 1), sun, scene.sunshape, scene.receiver, sampling);
  }
  FluxMap map(Engine e) const { return map(e, scene.sampling); }
};

double peak(const FluxMap& m) { return *std::max_element(m.values.begin(), m.values.end()); }

}  // namespace

TEST(Conservation, TotalPlusSpillEqualsApertureFlux) {
  for (double hour : {9.0, 12.0, 15.0}) {
    const Fixture f(equinox_path(45.37, hour));
    const double expected = aperture_power(f.heliostat, sun_vector(f.sun));
    for (Engine e : {Engine::grt, Engine::conv}) {
      SCOPED_TRACE(to_string(e) + " at " + std::to_string(hour));
      const FluxMap m = f.map(e);
      EXPECT_NEAR((m.total() + m.spilled) / expected, 1.0, 0.01);
    }
  }
}

TEST(Conservation, ApertureFluxAtNoon) {
  const Fixture f(equinox_path(45.37, 12.0));
  const double cos_i = std::cos(bisector_normal(sun_vector(f.sun), target_direction(HeliostatSpec{}, {})).incidence);
  EXPECT_NEAR(aperture_power(f.heliostat, sun_vector(f.sun)), 7.84 * cos_i, 7.84 * 1e-3);
}

TEST(Convolution, DeltaKernelIsExactCopy) {
  const Fixture f(equinox_path(45.37, 10.5));
  const FluxMap spot = geometric_spot(f.heliostat, f.sun, f.scene.receiver, f.scene.sampling);
  const FluxMap out = convolve_spot(spot, SunKernel::delta());
  EXPECT_EQ(out.values, spot.values);
  EXPECT_EQ(out.spilled, spot.spilled);
}

TEST(Convolution, ConservesPowerAndIsLinear) {
  const Fixture a(equinox_path(45.37, 12.0));
  const Fixture b(equinox_path(45.37, 9.0));
  const FluxMap sa = geometric_spot(a.heliostat, a.sun, a.scene.receiver, a.scene.sampling);
  const FluxMap sb = geometric_spot(b.heliostat, b.sun, b.scene.receiver, b.scene.sampling);
  const SunKernel k = heliostat_kernel(a.heliostat, sun_vector(a.sun), a.scene.sunshape, a.scene.receiver);

  const FluxMap ca = convolve_spot(sa, k);
  EXPECT_NEAR(ca.total() + ca.spilled, sa.total() + sa.spilled, 1e-9 * sa.total());
  EXPECT_TRUE(std::all_of(ca.values.begin(), ca.values.end(), [](double v) { return v >= 0.0; }));

  FluxMap scaled = sb;
  for (double& v : scaled.values) v *= 2.5;
  const FluxMap lhs = convolve_spot(map_add(sa, scaled), k);
  const FluxMap cb = convolve_spot(sb, k);
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.values.size(); ++i) {
    worst = std::max(worst, std::abs(lhs.values[i] - (ca.values[i] + 2.5 * cb.values[i])));
  }
  EXPECT_LT(worst, 1e-10 * peak(lhs));
}

TEST(Convolution, GridTooSmallForTheSpot) {
  Fixture f(equinox_path(45.37, 12.0), CantingVariant::spherical);
  f.scene.receiver.grid = GridSpec::square(0.5, 64);
  try {
    f.map(Engine::conv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::GridTooSmall || e.code() == ErrorCode::KernelAliasing);
  }
}

TEST(Engines, AgreeWithinTwoPercentRms) {
  for (double hour : {9.0, 12.0}) {
    for (CantingVariant v : {CantingVariant::spherical, CantingVariant::off_axis}) {
      const Fixture f(equinox_path(45.37, hour), v);
      const FluxMap g = f.map(Engine::grt);
      const FluxMap c = f.map(Engine::conv);
      EXPECT_LE(rms_difference(g, c) / peak(g), 0.02);
      EXPECT_NEAR(peak(c) / peak(g), 1.0, 0.05);
    }
  }
}

TEST(Symmetry, MirroredHeliostatUnderMirroredSunMirrorsTheMap) {
  const SunPosition am = equinox_path(45.37, 9.0);
  const SunPosition pm = equinox_path(45.37, 15.0);
  const HeliostatSpec mirror = HeliostatSpec{}.mirrored_across_x_axis();
  for (Engine e : {Engine::grt, Engine::conv}) {
    const FluxMap a = Fixture(am).map(e);
    const FluxMap b = Fixture(pm, CantingVariant::off_axis, mirror).map(e);
    EXPECT_LT(rms_difference(mirror_y(a), b), 1e-10 * peak(a));
  }
}

TEST(GridRefinement, PeakDriftBelowOnePercent) {
  for (CantingVariant v : {CantingVariant::spherical, CantingVariant::off_axis}) {
    Fixture coarse(equinox_path(45.37, 12.0), v);
    Fixture fine = coarse;
    fine.scene.receiver.grid = GridSpec::square(4.0, 512);
    const double p0 = peak(coarse.map(Engine::conv));
    const double p1 = peak(fine.map(Engine::conv));
    EXPECT_NEAR(p1 / p0, 1.0, 0.01);
  }
}

TEST(FluxMap, AddRejectsMismatchedGrids) {
  const FluxMap a = FluxMap::zeros(GridSpec::square(4.0, 64));
  const FluxMap b = FluxMap::zeros(GridSpec::square(4.0, 128));
  try {
    map_add(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
  FluxMap empty;
  EXPECT_THROW(map_stats(empty), Error);
}

TEST(FluxMap, StatsOfASingleCell) {
  FluxMap m = FluxMap::zeros(GridSpec::square(4.0, 4));
  m.at(3, 0) = 2.0;
  const MapStats s = map_stats(m);
  EXPECT_EQ(s.peak, 2.0);
  EXPECT_DOUBLE_EQ(s.total, 2.0);
  EXPECT_DOUBLE_EQ(s.centroid_y, 1.5);
  EXPECT_DOUBLE_EQ(s.centroid_z, -1.5);
  EXPECT_EQ(mirror_y(m).at(0, 0), 2.0);
}

TEST(FluxMap, CsvAndGraymapLayout) {
  FluxMap m = FluxMap::zeros(GridSpec::square(4.0, 4));
  m.at(0, 3) = 1.0;  // top-left in the written image
  m.at(1, 3) = 0.5;
  std::ostringstream csv;
  write_flux_csv(csv, m);
  EXPECT_NE(csv.str().find("\n1,0.5,0,0\n"), std::string::npos);

  std::ostringstream pgm;
  write_flux_pgm(pgm, m);
  const std::string bytes = pgm.str();
  const std::string header = "P5\n4 4\n65535\n";
  ASSERT_EQ(bytes.size(), header.size() + 32);
  EXPECT_EQ(bytes.substr(0, header.size()), header);
  EXPECT_EQ(static_cast<unsigned char>(bytes[header.size()]), 0xFF);
  EXPECT_EQ(static_cast<unsigned char>(bytes[header.size() + 2]), 0x80);  // 0.5 -> 32768
}
