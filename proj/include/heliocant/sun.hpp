#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heliocant/geometry.hpp"
#include "heliocant/grid.hpp"

namespace heliocant {

struct UtcTime {
  int year = 2000;
  int month = 1;
  int day = 1;
  int hour = 0;
  int minute = 0;
  double second = 0.0;

  double julian_day() const;
  /// ISO-8601 "YYYY-MM-DDTHH:MM:SSZ".
  std::string iso() const;
  /// Accepts "YYYY-MM-DDTHH:MM[:SS[.fff]][Z]" (a space may replace T).
  static UtcTime parse(const std::string& text);

  bool operator==(const UtcTime&) const = default;
};

/// Azimuth from due South, positive toward West; elevation above horizon.
struct SunPosition {
  double azimuth_deg = 0.0;
  double elevation_deg = 45.0;
  std::optional<UtcTime> timestamp;
};

struct SiteSpec {
  double latitude_deg = 45.37;
  double longitude_deg = 0.0;

  void validate() const;
};

enum class SunshapeKind { pillbox, limb_darkened };

/// Radially symmetric sun radiance over the disc of angular radius
/// `half_angle`. The default half-angle reproduces the absolute
/// concentration scale of the reference plant study (see README).
struct SunshapeModel {
  SunshapeKind kind = SunshapeKind::limb_darkened;
  double half_angle = 2.6e-3;  // rad
  double limb_coefficient = 0.5138;

  void validate() const;
};

std::string to_string(SunshapeKind kind);
SunshapeKind parse_sunshape_kind(const std::string& text);

/// S = (-cos h cos a, cos h sin a, sin h). Throws SunBelowHorizon when h <= 0.
UnitVector3 sun_vector(const SunPosition& pos);

/// Inverse of sun_vector (no elevation check).
SunPosition sun_position_from_vector(const UnitVector3& s);

/// Low-precision solar position (NOAA formulation: mean elements, equation
/// of center, obliquity, equation of time, hour angle). Geometric elevation,
/// no refraction. Years 1950-2100, otherwise OutOfDomain.
SunPosition ephemeris(const SiteSpec& site, const UtcTime& t);

/// Sun position for a given declination and local hour angle (deg, + after
/// noon). With declination 0 this is the equinox path used for idealized
/// day schedules.
SunPosition position_from_hour_angle(double latitude_deg, double declination_deg,
                                     double hour_angle_deg);

/// Idealized equinox sun at `solar_hours` local apparent solar time.
SunPosition equinox_path(double latitude_deg, double solar_hours);

/// Relative radiance at rho = theta / half_angle in [0, 1].
double sunshape_radiance(const SunshapeModel& model, double rho);

/// One direction node of the sun-cone quadrature.
struct ConeNode {
  double offset = 0.0;   // angle from the sun centre [rad]
  double azimuth = 0.0;  // angle around the sun centre [rad]
  double weight = 0.0;   // sums to 1 over the rule
};

/// Gauss-Legendre in rho with weight rho*B(rho), midpoint rule in azimuth.
std::vector<ConeNode> cone_quadrature(const SunshapeModel& model, int radial, int azimuthal);

/// Unit-sum discrete kernel on the receiver grid spacing, centred at
/// (radius, radius).
struct SunKernel {
  Grid2D<double> weights;
  int radius = 0;
  double semi_minor = 0.0;  // m
  double semi_major = 0.0;  // m

  static SunKernel delta();
  bool is_delta() const;
};

/// Projects the sun cone of path length `path_length` along `beam_dir` onto
/// the plane with normal `receiver_normal`. The plane's in-grid axes are
/// u = normalize(Z' x n), v = n x u (Y', Z' for n = X').
SunKernel build_kernel(const SunshapeModel& model, double path_length, const UnitVector3& beam_dir,
                       const UnitVector3& receiver_normal, const GridSpec& grid,
                       int supersample = 4);

}  // namespace heliocant
