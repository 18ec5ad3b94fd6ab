#include "heliocant/sun.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/legendre.hpp>

#include "heliocant/error.hpp"

namespace heliocant {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double wrap_degrees(double x) {
  x = std::fmod(x, 360.0);
  return x < 0.0 ? x + 360.0 : x;
}

}  // namespace

double UtcTime::julian_day() const {
  int y = year;
  int m = month;
  if (m <= 2) {
    y -= 1;
    m += 12;
  }
  const int a = y / 100;
  const int b = 2 - a + a / 4;
  const double day_fraction = (hour + (minute + second / 60.0) / 60.0) / 24.0;
  return std::floor(365.25 * (y + 4716)) + std::floor(30.6001 * (m + 1)) + day + b - 1524.5 +
         day_fraction;
}

std::string UtcTime::iso() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", year, month, day, hour, minute,
                static_cast<int>(std::lround(second)));
  return buf;
}

UtcTime UtcTime::parse(const std::string& text) {
  UtcTime t;
  char sep = 0;
  int consumed = 0;
  const int n = std::sscanf(text.c_str(), "%4d-%2d-%2d%c%2d:%2d%n", &t.year, &t.month, &t.day, &sep,
                            &t.hour, &t.minute, &consumed);
  if (n < 6 || (sep != 'T' && sep != ' ')) {
    throw Error(ErrorCode::InvalidArgument, "bad UTC datetime '" + text + "'");
  }
  std::string rest = text.substr(static_cast<std::size_t>(consumed));
  if (!rest.empty() && rest.back() == 'Z') rest.pop_back();
  if (!rest.empty()) {
    if (rest.front() != ':') throw Error(ErrorCode::InvalidArgument, "bad UTC datetime '" + text + "'");
    char* end = nullptr;
    t.second = std::strtod(rest.c_str() + 1, &end);
    if (*end != '\0') throw Error(ErrorCode::InvalidArgument, "bad UTC datetime '" + text + "'");
  }
  if (t.month < 1 || t.month > 12 || t.day < 1 || t.day > 31 || t.hour < 0 || t.hour > 23 ||
      t.minute < 0 || t.minute > 59 || t.second < 0.0 || t.second >= 61.0) {
    throw Error(ErrorCode::InvalidArgument, "UTC datetime field out of range in '" + text + "'");
  }
  return t;
}

void SiteSpec::validate() const {
  if (!(std::abs(latitude_deg) <= 90.0) || !(std::abs(longitude_deg) <= 180.0)) {
    throw Error(ErrorCode::InvalidArgument, "site latitude/longitude out of range");
  }
}

void SunshapeModel::validate() const {
  if (!(half_angle > 0.0 && half_angle < 0.02)) {
    throw Error(ErrorCode::InvalidArgument, "sunshape half-angle must lie in (0, 0.02) rad");
  }
  if (kind == SunshapeKind::limb_darkened && !(limb_coefficient >= 0.0 && limb_coefficient <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "limb coefficient must lie in [0, 1]");
  }
}

std::string to_string(SunshapeKind kind) {
  return kind == SunshapeKind::pillbox ? "pillbox" : "limb_darkened";
}

SunshapeKind parse_sunshape_kind(const std::string& text) {
  if (text == "pillbox") return SunshapeKind::pillbox;
  if (text == "limb_darkened") return SunshapeKind::limb_darkened;
  throw Error(ErrorCode::InvalidArgument, "unknown sunshape kind '" + text + "'");
}

UnitVector3 sun_vector(const SunPosition& pos) {
  if (!(pos.elevation_deg > 0.0) || pos.elevation_deg > 90.0) {
    std::ostringstream os;
    os << "sun elevation " << pos.elevation_deg << " deg is not above the horizon";
    throw Error(ErrorCode::SunBelowHorizon, os.str());
  }
  const double a = pos.azimuth_deg * kDeg;
  const double h = pos.elevation_deg * kDeg;
  return UnitVector3::normalize({-std::cos(h) * std::cos(a), std::cos(h) * std::sin(a), std::sin(h)});
}

SunPosition sun_position_from_vector(const UnitVector3& s) {
  SunPosition p;
  p.elevation_deg = std::asin(std::clamp(s.z(), -1.0, 1.0)) / kDeg;
  p.azimuth_deg = std::atan2(s.y(), -s.x()) / kDeg;
  return p;
}

SunPosition position_from_hour_angle(double latitude_deg, double declination_deg,
                                     double hour_angle_deg) {
  const double lat = latitude_deg * kDeg;
  const double dec = declination_deg * kDeg;
  const double ha = hour_angle_deg * kDeg;
  const double sin_h = std::sin(lat) * std::sin(dec) + std::cos(lat) * std::cos(dec) * std::cos(ha);
  SunPosition p;
  p.elevation_deg = std::asin(std::clamp(sin_h, -1.0, 1.0)) / kDeg;
  // From South, + West: atan2(sin H, cos H sin(lat) - tan(dec) cos(lat)).
  p.azimuth_deg =
      std::atan2(std::sin(ha), std::cos(ha) * std::sin(lat) - std::tan(dec) * std::cos(lat)) / kDeg;
  return p;
}

SunPosition equinox_path(double latitude_deg, double solar_hours) {
  return position_from_hour_angle(latitude_deg, 0.0, 15.0 * (solar_hours - 12.0));
}

SunPosition ephemeris(const SiteSpec& site, const UtcTime& t) {
  site.validate();
  if (t.year < 1950 || t.year > 2100) {
    throw Error(ErrorCode::OutOfDomain, "ephemeris valid for years 1950-2100 only");
  }
  const double jd = t.julian_day();
  const double T = (jd - 2451545.0) / 36525.0;

  const double l0 = wrap_degrees(280.46646 + T * (36000.76983 + 0.0003032 * T));
  const double m = 357.52911 + T * (35999.05029 - 0.0001537 * T);
  const double e = 0.016708634 - T * (0.000042037 + 0.0000001267 * T);
  const double mr = m * kDeg;
  const double center = std::sin(mr) * (1.914602 - T * (0.004817 + 0.000014 * T)) +
                        std::sin(2.0 * mr) * (0.019993 - 0.000101 * T) + std::sin(3.0 * mr) * 0.000289;
  const double omega = (125.04 - 1934.136 * T) * kDeg;
  const double apparent_long = (l0 + center - 0.00569 - 0.00478 * std::sin(omega)) * kDeg;
  const double eps0 = 23.0 + (26.0 + (21.448 - T * (46.815 + T * (0.00059 - T * 0.001813))) / 60.0) / 60.0;
  const double eps = (eps0 + 0.00256 * std::cos(omega)) * kDeg;

  const double declination = std::asin(std::sin(eps) * std::sin(apparent_long)) / kDeg;

  const double y = std::pow(std::tan(eps / 2.0), 2);
  const double l0r = l0 * kDeg;
  const double eot_minutes =
      4.0 / kDeg *
      (y * std::sin(2.0 * l0r) - 2.0 * e * std::sin(mr) + 4.0 * e * y * std::sin(mr) * std::cos(2.0 * l0r) -
       0.5 * y * y * std::sin(4.0 * l0r) - 1.25 * e * e * std::sin(2.0 * mr));

  const double utc_minutes = t.hour * 60.0 + t.minute + t.second / 60.0;
  const double true_solar_minutes = utc_minutes + eot_minutes + 4.0 * site.longitude_deg;
  const double hour_angle = true_solar_minutes / 4.0 - 180.0;

  SunPosition p = position_from_hour_angle(site.latitude_deg, declination, hour_angle);
  p.timestamp = t;
  return p;
}

double sunshape_radiance(const SunshapeModel& model, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "sunshape radius ratio outside [0, 1]");
  }
  if (model.kind == SunshapeKind::pillbox) return 1.0;
  const double r2 = rho * rho;
  return std::max(0.0, 1.0 - model.limb_coefficient * r2 * r2);
}

std::vector<ConeNode> cone_quadrature(const SunshapeModel& model, int radial, int azimuthal) {
  model.validate();
  if (radial < 1 || azimuthal < 1) {
    throw Error(ErrorCode::InvalidArgument, "cone quadrature needs at least one node per axis");
  }
  // boost returns the non-negative roots of P_n on [-1, 1].
  const std::vector<double> roots = boost::math::legendre_p_zeros<double>(radial);
  std::vector<std::pair<double, double>> gl;
  for (double x : roots) {
    const double dp = boost::math::legendre_p_prime(radial, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.emplace_back(x, w);
    if (x != 0.0) gl.emplace_back(-x, w);
  }
  std::sort(gl.begin(), gl.end());

  std::vector<ConeNode> nodes;
  nodes.reserve(static_cast<std::size_t>(radial) * azimuthal);
  double total = 0.0;
  for (const auto& [x, w] : gl) {
    const double rho = 0.5 * (x + 1.0);
    const double radial_weight = 0.5 * w * rho * sunshape_radiance(model, rho);
    for (int k = 0; k < azimuthal; ++k) {
      const double psi = 2.0 * std::numbers::pi * (k + 0.5) / azimuthal;
      nodes.push_back({rho * model.half_angle, psi, radial_weight / azimuthal});
      total += radial_weight / azimuthal;
    }
  }
  for (ConeNode& n : nodes) n.weight /= total;
  return nodes;
}

SunKernel SunKernel::delta() {
  SunKernel k;
  k.weights = Grid2D<double>(1, 1, 1.0);
  return k;
}

bool SunKernel::is_delta() const {
  int nonzero = 0;
  for (double w : weights.data()) nonzero += (w != 0.0);
  return nonzero == 1 && weights(radius, radius) != 0.0;
}

SunKernel build_kernel(const SunshapeModel& model, double path_length, const UnitVector3& beam_dir,
                       const UnitVector3& receiver_normal, const GridSpec& grid, int supersample) {
  model.validate();
  grid.validate();
  if (!(path_length > 0.0)) throw Error(ErrorCode::InvalidArgument, "kernel path length must be positive");
  const double cos_beta = -dot(beam_dir, receiver_normal);
  if (!(cos_beta > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "beam does not hit the receiver front face");
  }
  if (supersample < 1) throw Error(ErrorCode::InvalidArgument, "kernel supersampling must be >= 1");

  SunKernel k;
  k.semi_minor = path_length * std::tan(model.half_angle);
  k.semi_major = k.semi_minor / cos_beta;
  const double grid_extent = std::min(grid.extent_y, grid.extent_z);
  if (2.0 * k.semi_major > 0.5 * grid_extent) {
    std::ostringstream os;
    os << "sun kernel support " << 2.0 * k.semi_major << " m exceeds half the grid extent "
       << 0.5 * grid_extent << " m";
    throw Error(ErrorCode::KernelAliasing, os.str());
  }

  const double cell = grid.cell_size();
  k.radius = static_cast<int>(std::ceil(k.semi_major / cell)) + 1;
  const int side = 2 * k.radius + 1;
  k.weights = Grid2D<double>(side, side, 0.0);

  const UnitVector3 u = UnitVector3::normalize(cross(kWorldZ, receiver_normal));
  const UnitVector3 v = UnitVector3::normalize(cross(receiver_normal, u));
  const Vec3 chief = path_length * beam_dir.vec();
  const double theta_s = model.half_angle;

  double total = 0.0;
  for (int row = 0; row < side; ++row) {
    for (int col = 0; col < side; ++col) {
      double acc = 0.0;
      for (int sv = 0; sv < supersample; ++sv) {
        for (int su = 0; su < supersample; ++su) {
          const double du = (col - k.radius + (su + 0.5) / supersample - 0.5) * cell;
          const double dv = (row - k.radius + (sv + 0.5) / supersample - 0.5) * cell;
          const Vec3 ray = chief + du * u.vec() + dv * v.vec();
          const double r = norm(ray);
          const double theta = std::atan2(norm(cross(ray, beam_dir)), dot(ray, beam_dir));
          const double rho = theta / theta_s;
          if (rho > 1.0) continue;
          // Irradiance on the plane: radiance * cos(obliquity) / r^2.
          const double obliquity = -dot(ray, receiver_normal) / r;
          acc += sunshape_radiance(model, rho) * obliquity / (r * r);
        }
      }
      k.weights(col, row) = acc;
      total += acc;
    }
  }
  if (!(total > 0.0)) return SunKernel::delta();
  for (double& w : k.weights.data()) w /= total;
  return k;
}

}  // namespace heliocant
