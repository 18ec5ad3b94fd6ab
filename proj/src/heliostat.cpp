#include "heliocant/heliostat.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "heliocant/error.hpp"
#include "heliocant/io.hpp"

namespace heliocant {

void HeliostatSpec::validate() const {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::InvalidArgument, "heliostat '" + name + "': " + what);
  };
  if (modules_across <= 0 || modules_up <= 0) fail("module counts must be positive");
  if (!(module_width > 0.0 && module_height > 0.0)) fail("module dimensions must be positive");
  if (modules_across * module_width > width * (1.0 + 1e-12)) fail("modules overflow heliostat width");
  if (modules_up * module_height > height * (1.0 + 1e-12)) fail("modules overflow heliostat height");
  if (!(focal_length > 0.0)) fail("focal length must be positive");
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0)) fail("reflectivity must lie in [0, 1]");
}

HeliostatSpec HeliostatSpec::mirrored_across_x_axis() const {
  HeliostatSpec m = *this;
  m.name = name + "_mirror";
  m.position.y = -position.y;
  return m;
}

const ModuleCentre& ModuleLayout::at(int i, int j) const {
  return centres.at(static_cast<std::size_t>(j - 1) * modules_across + (i - 1));
}

const ModuleTilt& CantingSet::at(int i, int j) const {
  auto it = std::find_if(tilts.begin(), tilts.end(), [&](const ModuleTilt& t) { return t.i == i && t.j == j; });
  if (it == tilts.end()) throw Error(ErrorCode::InvalidArgument, "no such module in canting set");
  return *it;
}

std::string to_string(CantingVariant v) {
  return v == CantingVariant::spherical ? "spherical" : "off_axis";
}

OffAxisContext make_off_axis_context(const UnitVector3& reference_sun, const UnitVector3& target) {
  const ReflectionGeometry g = bisector_normal(reference_sun, target);
  const Frame3 frame = heliostat_frame(g.normal);
  OffAxisContext ctx;
  ctx.sun = reference_sun;
  ctx.normal = g.normal;
  ctx.incidence = g.incidence;
  ctx.s0y = dot(reference_sun, frame.axis_y);
  ctx.s0z = dot(reference_sun, frame.axis_z);
  ctx.phi = std::atan2(ctx.s0z, ctx.s0y);
  return ctx;
}

UnitVector3 target_direction(const HeliostatSpec& spec, const Vec3& aim_point) {
  return UnitVector3::normalize(aim_point - spec.position);
}

double slant_distance(const HeliostatSpec& spec, const Vec3& aim_point) {
  return norm(aim_point - spec.position);
}

ModuleLayout module_centres(const HeliostatSpec& spec) {
  if (spec.modules_across <= 0 || spec.modules_up <= 0) {
    throw Error(ErrorCode::InvalidArgument, "module counts must be positive");
  }
  ModuleLayout layout;
  layout.modules_across = spec.modules_across;
  layout.modules_up = spec.modules_up;
  const int m = spec.modules_across;
  const int n = spec.modules_up;
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= m; ++i) {
      // Integer numerators keep the grid exactly antisymmetric.
      const double y = static_cast<double>(m + 1 - 2 * i) / (2.0 * m) * spec.width;
      const double z = static_cast<double>(n + 1 - 2 * j) / (2.0 * n) * spec.height;
      layout.centres.push_back({i, j, y, z});
    }
  }
  return layout;
}

CantingSet spherical_canting(const HeliostatSpec&, const ModuleLayout& layout, double distance) {
  if (!(distance > 0.0)) throw Error(ErrorCode::InvalidArgument, "canting distance must be positive");
  CantingSet c{CantingVariant::spherical, {}};
  for (const ModuleCentre& mc : layout.centres) {
    c.tilts.push_back({mc.i, mc.j, mc.y / (2.0 * distance), mc.z / (2.0 * distance)});
  }
  return c;
}

CantingSet off_axis_canting(const HeliostatSpec&, const ModuleLayout& layout, const OffAxisContext& ctx,
                            double distance) {
  if (!(distance > 0.0)) throw Error(ErrorCode::InvalidArgument, "canting distance must be positive");
  const double ci = std::cos(ctx.incidence);
  if (!(ci > 0.5)) {
    std::ostringstream os;
    os << "reference incidence " << ctx.incidence * 180.0 / 3.14159265358979323846
       << " deg is too large for the off-axis formulas (needs < 60 deg)";
    throw Error(ErrorCode::ExtremeIncidence, os.str());
  }
  const double si2 = std::sin(ctx.incidence) * std::sin(ctx.incidence);
  const double cp = std::cos(ctx.phi);
  const double sp = std::sin(ctx.phi);
  const double s2p = std::sin(2.0 * ctx.phi);

  const double yy = (ci * ci * cp * cp + sp * sp) / ci;  // y -> a
  const double zz = (ci * ci * sp * sp + cp * cp) / ci;  // z -> h
  const double cross_term = s2p * si2 / ci;                // y <-> z coupling

  CantingSet c{CantingVariant::off_axis, {}};
  for (const ModuleCentre& mc : layout.centres) {
    const double a = mc.y / (2.0 * distance) * yy - mc.z / (4.0 * distance) * cross_term;
    const double h = -mc.y / (4.0 * distance) * cross_term + mc.z / (2.0 * distance) * zz;
    c.tilts.push_back({mc.i, mc.j, a, h});
  }
  return c;
}

std::vector<std::pair<double, double>> report_mrad(const CantingSet& c) {
  std::vector<std::pair<double, double>> out;
  out.reserve(c.tilts.size());
  for (const ModuleTilt& t : c.tilts) out.emplace_back(2e3 * t.a, 2e3 * t.h);
  return out;
}

std::vector<CantingRow> canting_table(const CantingSet& spherical, const CantingSet& off_axis) {
  if (spherical.tilts.size() != off_axis.tilts.size()) {
    throw Error(ErrorCode::InvalidArgument, "canting sets cover different module grids");
  }
  std::vector<CantingRow> rows;
  for (const ModuleTilt& s : spherical.tilts) {
    const ModuleTilt& o = off_axis.at(s.i, s.j);
    CantingRow r;
    r.i = s.i;
    r.j = s.j;
    r.spherical_a = 2e3 * s.a;
    r.spherical_h = 2e3 * s.h;
    r.off_axis_a = 2e3 * o.a;
    r.off_axis_h = 2e3 * o.h;
    r.diff_a = r.off_axis_a - r.spherical_a;
    r.diff_h = r.off_axis_h - r.spherical_h;
    rows.push_back(r);
  }
  return rows;
}

void write_canting_csv(std::ostream& os, const std::string& heliostat, const std::vector<CantingRow>& rows) {
  os << "# heliocant canting table\n"
     << "# heliostat," << heliostat << "\n"
     << "# unit,mrad\n"
     << "# convention,reported = 2 x mirror-normal rotation; a about Z, h about Y\n"
     << "i,j,spherical_a,spherical_h,off_axis_a,off_axis_h,diff_a,diff_h\n";
  for (const CantingRow& r : rows) {
    os << r.i << ',' << r.j << ',' << format_fixed(r.spherical_a, 4) << ','
       << format_fixed(r.spherical_h, 4) << ',' << format_fixed(r.off_axis_a, 4) << ','
       << format_fixed(r.off_axis_h, 4) << ',' << format_fixed(r.diff_a, 4) << ','
       << format_fixed(r.diff_h, 4) << '\n';
  }
}

Facet::Facet(int i, int j, double width, double height, double focal_length, const Mat3& to_world,
             const Vec3& origin_world)
    : i_(i),
      j_(j),
      width_(width),
      height_(height),
      curvature_radius_(2.0 * focal_length),
      to_world_(to_world),
      origin_(origin_world) {}

SurfaceSample Facet::sample(double u, double v) const {
  Vec3 local;
  Vec3 normal_local;
  if (std::isinf(curvature_radius_)) {
    local = {0.0, u, v};
    normal_local = {1.0, 0.0, 0.0};
  } else {
    const double r = curvature_radius_;
    const double sag = r - std::sqrt(r * r - u * u - v * v);
    local = {sag, u, v};
    normal_local = Vec3{r - sag, -u, -v} / r;
  }
  return {origin_ + to_world_ * local, UnitVector3::normalize(to_world_ * normal_local)};
}

UnitVector3 Facet::vertex_normal() const {
  return UnitVector3::normalize(to_world_ * Vec3{1.0, 0.0, 0.0});
}

RealizedHeliostat realize_modules(const HeliostatSpec& spec, const ModuleLayout& layout,
                                  const CantingSet& canting, const UnitVector3& tracking_normal) {
  RealizedHeliostat out;
  out.name = spec.name;
  out.reflectivity = spec.reflectivity;
  out.frame = heliostat_frame(tracking_normal, spec.position);
  const Frame3& f = out.frame;
  const Mat3 frame_to_world{{{f.axis_x.x(), f.axis_y.x(), f.axis_z.x()},
                             {f.axis_x.y(), f.axis_y.y(), f.axis_z.y()},
                             {f.axis_x.z(), f.axis_y.z(), f.axis_z.z()}}};
  for (const ModuleCentre& mc : layout.centres) {
    const ModuleTilt& t = canting.at(mc.i, mc.j);
    const Mat3 cant = rotation_about_y(t.h) * rotation_about_z(-t.a);
    const Vec3 origin = f.to_world({0.0, mc.y, mc.z});
    out.facets.emplace_back(mc.i, mc.j, spec.module_width, spec.module_height, spec.focal_length,
                            frame_to_world * cant, origin);
  }
  return out;
}

}  // namespace heliocant
