#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "heliocant/geometry.hpp"

namespace heliocant {

/// Multi-faceted focusing heliostat. Defaults are the reference plant's
/// 4 x 2 module heliostat.
struct HeliostatSpec {
  std::string name = "H1";
  Vec3 position{86.6, 50.0, 0.0};  // m, world frame
  double width = 3.4;              // m, along Y
  double height = 3.0;             // m, along Z
  int modules_across = 4;
  int modules_up = 2;
  double module_width = 0.7;    // m
  double module_height = 1.4;   // m
  double focal_length = 100.0;  // m; infinity gives flat facets
  double reflectivity = 1.0;

  void validate() const;
  double facet_area() const { return module_width * module_height; }
  double mirror_area() const { return facet_area() * modules_across * modules_up; }

  /// Copy mirrored through the X'Z' plane (y -> -y), renamed.
  HeliostatSpec mirrored_across_x_axis() const;
};

struct ModuleCentre {
  int i = 1;  // 1..m, increasing toward -Y
  int j = 1;  // 1..n, increasing toward -Z
  double y = 0.0;
  double z = 0.0;
};

/// Module centres in heliostat YZ, ordered with i fastest: (1,1), (2,1), ...
struct ModuleLayout {
  int modules_across = 0;
  int modules_up = 0;
  std::vector<ModuleCentre> centres;

  const ModuleCentre& at(int i, int j) const;
};

enum class CantingVariant { spherical, off_axis };

std::string to_string(CantingVariant v);

struct ModuleTilt {
  int i = 1;
  int j = 1;
  double a = 0.0;  // rad, mirror-normal rotation about heliostat Z
  double h = 0.0;  // rad, mirror-normal rotation about heliostat Y
  bool operator==(const ModuleTilt&) const = default;
};

/// Physical mirror-normal rotations. Positive `a` turns the facet normal
/// toward -Y and positive `h` toward -Z, so a facet at (+y, +z) leans
/// toward the heliostat axis.
struct CantingSet {
  CantingVariant variant = CantingVariant::spherical;
  std::vector<ModuleTilt> tilts;

  const ModuleTilt& at(int i, int j) const;
  bool operator==(const CantingSet&) const = default;
};

/// Reference-sun quantities the off-axis formulas need, all in the frame of
/// the heliostat tracking S0.
struct OffAxisContext {
  UnitVector3 sun;     // S0
  UnitVector3 normal;  // N0
  double incidence = 0.0;  // i0 [rad]
  double s0y = 0.0;
  double s0z = 0.0;
  double phi = 0.0;  // atan2(s0z, s0y)
};

OffAxisContext make_off_axis_context(const UnitVector3& reference_sun, const UnitVector3& target);

/// Unit vector from the heliostat centre to `aim_point`, and its distance.
UnitVector3 target_direction(const HeliostatSpec& spec, const Vec3& aim_point);
double slant_distance(const HeliostatSpec& spec, const Vec3& aim_point);

ModuleLayout module_centres(const HeliostatSpec& spec);

/// a = y / (2d), h = z / (2d).
CantingSet spherical_canting(const HeliostatSpec& spec, const ModuleLayout& layout, double distance);

/// Tangent-to-paraboloid canting for the reference sun in `ctx`.
/// Throws ExtremeIncidence when cos(i0) <= 0.5.
CantingSet off_axis_canting(const HeliostatSpec& spec, const ModuleLayout& layout,
                            const OffAxisContext& ctx, double distance);

/// One row of the tilt-angle table, milliradians, reported as twice the
/// mirror-normal rotation (the reflected-beam deviation).
struct CantingRow {
  int i = 1;
  int j = 1;
  double spherical_a = 0.0;
  double spherical_h = 0.0;
  double off_axis_a = 0.0;
  double off_axis_h = 0.0;
  double diff_a = 0.0;
  double diff_h = 0.0;
};

/// Reported value for a single canting set (2 x rotation, mrad), same order
/// as the set.
std::vector<std::pair<double, double>> report_mrad(const CantingSet& c);

std::vector<CantingRow> canting_table(const CantingSet& spherical, const CantingSet& off_axis);

void write_canting_csv(std::ostream& os, const std::string& heliostat,
                       const std::vector<CantingRow>& rows);

/// Point and outward normal on a realized facet, world frame.
struct SurfaceSample {
  Vec3 point;
  UnitVector3 normal;
};

/// Spherical cap of radius 2f placed at its module centre, canted, and
/// carried by the tracking heliostat frame.
class Facet {
 public:
  Facet(int i, int j, double width, double height, double focal_length, const Mat3& to_world,
        const Vec3& origin_world);

  /// (u, v) are facet-local lateral coordinates within
  /// [-width/2, width/2] x [-height/2, height/2].
  SurfaceSample sample(double u, double v) const;

  int i() const { return i_; }
  int j() const { return j_; }
  double width() const { return width_; }
  double height() const { return height_; }
  double area() const { return width_ * height_; }
  UnitVector3 vertex_normal() const;

 private:
  int i_;
  int j_;
  double width_;
  double height_;
  double curvature_radius_;
  Mat3 to_world_;
  Vec3 origin_;
};

struct RealizedHeliostat {
  std::string name;
  Frame3 frame;  // tracking frame, X = N
  double reflectivity = 1.0;
  std::vector<Facet> facets;
};

/// Builds the facets for a heliostat tracking `tracking_normal`. Canting is
/// applied about each module centre as a rotation by -a about Z, then by h
/// about Y.
RealizedHeliostat realize_modules(const HeliostatSpec& spec, const ModuleLayout& layout,
                                  const CantingSet& canting, const UnitVector3& tracking_normal);

}  // namespace heliocant
