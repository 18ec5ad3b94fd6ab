#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "heliocant/error.hpp"
#include "heliocant/heliostat.hpp"
#include "heliocant/sun.hpp"
#include "support.hpp"

using namespace heliocant;

namespace {

const Vec3 kAim{0.0, 0.0, 0.0};

OffAxisContext reference_context(const HeliostatSpec& h) {
  return make_off_axis_context(sun_vector(equinox_path(45.37, 12.0)), target_direction(h, kAim));
}

std::vector<CantingRow> computed_canting_table() {
  const HeliostatSpec h;
  const ModuleLayout layout = module_centres(h);
  const double d = slant_distance(h, kAim);
  return canting_table(spherical_canting(h, layout, d), off_axis_canting(h, layout, reference_context(h), d));
}

// RMS distance from the aim point of the centre rays of all facets.
double centre_ray_spread(const HeliostatSpec& h, const CantingSet& c, const SunPosition& sun) {
  const UnitVector3 s = sun_vector(sun);
  const UnitVector3 n = bisector_normal(s, target_direction(h, kAim)).normal;
  const RealizedHeliostat rh = realize_modules(h, module_centres(h), c, n);
  double acc = 0.0;
  for (const Facet& f : rh.facets) {
    const SurfaceSample p = f.sample(0.0, 0.0);
    const UnitVector3 r = reflect(s, p.normal);
    const double t = -p.point.x / r.x();
    const Vec3 hit = p.point + t * r.vec();
    acc += hit.y * hit.y + hit.z * hit.z;
  }
  return std::sqrt(acc / static_cast<double>(rh.facets.size()));
}

}  // namespace

TEST(Layout, ModuleCentresOfTheReferenceHeliostat) {
  const ModuleLayout l = module_centres(HeliostatSpec{});
  ASSERT_EQ(l.centres.size(), 8u);
  EXPECT_NEAR(l.at(1, 1).y, 1.275, 1e-12);
  EXPECT_NEAR(l.at(4, 1).y, -1.275, 1e-12);
  EXPECT_NEAR(l.at(2, 2).y, 0.425, 1e-12);
  EXPECT_NEAR(l.at(1, 1).z, 0.75, 1e-12);
  EXPECT_NEAR(l.at(1, 2).z, -0.75, 1e-12);
  EXPECT_EQ(l.centres[1].i, 2);  // i runs fastest
}

TEST(Layout, SlantDistance) {
  EXPECT_NEAR(slant_distance(HeliostatSpec{}, kAim), 100.0, 0.01);
}

TEST(Spec, ValidationAndMirror) {
  HeliostatSpec h;
  EXPECT_NO_THROW(h.validate());
  EXPECT_NEAR(h.mirror_area(), 7.84, 1e-12);
  h.modules_across = 5;
  EXPECT_THROW(h.validate(), Error);
  const HeliostatSpec m = HeliostatSpec{}.mirrored_across_x_axis();
  EXPECT_EQ(m.name, "H1_mirror");
  EXPECT_EQ(m.position.y, -50.0);
  EXPECT_EQ(m.position.x, 86.6);
}

TEST(Canting, SphericalMatchesPublishedTable) {
  const auto golden = test_support::load_canting_golden();
  const auto rows = computed_canting_table();
  ASSERT_EQ(golden.size(), rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].i, golden[k].i);
    EXPECT_EQ(rows[k].j, golden[k].j);
    EXPECT_NEAR(rows[k].spherical_a, golden[k].spherical_a, 0.01);
    EXPECT_NEAR(rows[k].spherical_h, golden[k].spherical_h, 0.01);
  }
}

TEST(Canting, OffAxisMatchesPublishedTable) {
  const auto golden = test_support::load_canting_golden();
  const auto rows = computed_canting_table();
  double worst = 0.0, sq = 0.0, worst_diff = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (auto [ours, theirs] : {std::pair{rows[k].off_axis_a, golden[k].off_axis_a},
                                std::pair{rows[k].off_axis_h, golden[k].off_axis_h}}) {
      worst = std::max(worst, std::abs(ours - theirs));
      sq += (ours - theirs) * (ours - theirs);
    }
    worst_diff = std::max({worst_diff, std::abs(rows[k].diff_a - golden[k].diff_a),
                           std::abs(rows[k].diff_h - golden[k].diff_h)});
    EXPECT_NEAR(rows[k].diff_a, rows[k].off_axis_a - rows[k].spherical_a, 1e-12);
  }
  EXPECT_LE(worst, 0.15);
  EXPECT_LE(std::sqrt(sq / (2.0 * rows.size())), 0.08);
  EXPECT_LE(worst_diff, 0.15);
}

TEST(Canting, OffAxisEqualsSphericalAtNormalIncidence) {
  const HeliostatSpec h;
  const ModuleLayout layout = module_centres(h);
  const double d = slant_distance(h, kAim);
  const UnitVector3 r = target_direction(h, kAim);
  const OffAxisContext ctx = make_off_axis_context(r, r);
  EXPECT_EQ(ctx.incidence, 0.0);
  const CantingSet off = off_axis_canting(h, layout, ctx, d);
  const CantingSet sph = spherical_canting(h, layout, d);
  ASSERT_EQ(off.tilts.size(), sph.tilts.size());
  for (std::size_t k = 0; k < off.tilts.size(); ++k) {
    EXPECT_NEAR(off.tilts[k].a, sph.tilts[k].a, 1e-15);
    EXPECT_NEAR(off.tilts[k].h, sph.tilts[k].h, 1e-15);
  }
}

TEST(Canting, ExtremeIncidenceIsRejected) {
  const HeliostatSpec h;
  const OffAxisContext ctx =
      make_off_axis_context(UnitVector3::normalize({0.5, 0.3, 0.8}), target_direction(h, kAim));
  try {
    off_axis_canting(h, module_centres(h), ctx, 100.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ExtremeIncidence);
  }
}

TEST(Canting, PointSymmetryAboutTheHeliostatCentre) {
  const HeliostatSpec h;
  const ModuleLayout layout = module_centres(h);
  const double d = slant_distance(h, kAim);
  for (const CantingSet& c : {spherical_canting(h, layout, d), off_axis_canting(h, layout, reference_context(h), d)}) {
    for (const ModuleTilt& t : c.tilts) {
      const ModuleTilt& o = c.at(h.modules_across + 1 - t.i, h.modules_up + 1 - t.j);
      EXPECT_NEAR(t.a, -o.a, 1e-15);
      EXPECT_NEAR(t.h, -o.h, 1e-15);
    }
  }
}

TEST(Canting, OffAxisSuperposesCentreRaysAtTheReferenceSun) {
  const HeliostatSpec h;
  const ModuleLayout layout = module_centres(h);
  const double d = slant_distance(h, kAim);
  const SunPosition s0 = equinox_path(45.37, 12.0);
  const double sph = centre_ray_spread(h, spherical_canting(h, layout, d), s0);
  const double off = centre_ray_spread(h, off_axis_canting(h, layout, reference_context(h), d), s0);
  EXPECT_LT(off, 0.01);
  EXPECT_LT(off, sph / 5.0);
}

TEST(Canting, CsvLayout) {
  std::ostringstream os;
  write_canting_csv(os, "H1", computed_canting_table());
  const std::string text = os.str();
  EXPECT_NE(text.find("i,j,spherical_a,spherical_h,off_axis_a,off_axis_h,diff_a,diff_h\n1,1,12.75"),
            std::string::npos);
  EXPECT_NE(text.find("# unit,mrad"), std::string::npos);
}

TEST(Facet, CentreNormalAndFlatLimit) {
  const HeliostatSpec h;
  const CantingSet c = spherical_canting(h, module_centres(h), 100.0);
  const RealizedHeliostat rh = realize_modules(h, module_centres(h), c, kWorldX);
  ASSERT_EQ(rh.facets.size(), 8u);
  for (const Facet& f : rh.facets) {
    EXPECT_LT(norm(f.sample(0.0, 0.0).normal.vec() - f.vertex_normal().vec()), 1e-15);
    // Sphere of radius 2f: the edge normal turns by u / (2f).
    const double turn = std::acos(dot(f.sample(0.35, 0.0).normal, f.vertex_normal()));
    EXPECT_NEAR(turn, 0.35 / 200.0, 1e-9);
  }

  HeliostatSpec flat = h;
  flat.focal_length = std::numeric_limits<double>::infinity();
  const RealizedHeliostat rf = realize_modules(flat, module_centres(flat),
                                                 spherical_canting(flat, module_centres(flat), flat.focal_length), kWorldX);
  for (const Facet& f : rf.facets) {
    EXPECT_LT(norm(f.sample(0.3, -0.6).normal.vec() - kWorldX.vec()), 1e-15);
  }
}
