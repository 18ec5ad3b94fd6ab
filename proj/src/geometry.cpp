#include "heliocant/geometry.hpp"

#include <algorithm>
#include <sstream>

#include "heliocant/error.hpp"

namespace heliocant {

UnitVector3 UnitVector3::normalize(const Vec3& v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::InvalidArgument, "cannot normalize a zero or non-finite vector");
  }
  return UnitVector3(v / n);
}

double Frame3::orthonormality_residual() const {
  const Vec3& x = axis_x;
  const Vec3& y = axis_y;
  const Vec3& z = axis_z;
  double r = std::max({std::abs(dot(x, y)), std::abs(dot(y, z)), std::abs(dot(z, x)),
                       std::abs(norm(x) - 1.0), std::abs(norm(y) - 1.0), std::abs(norm(z) - 1.0)});
  const Vec3 handed = cross(x, y) - z;
  return std::max(r, norm(handed));
}

double ReflectionGeometry::residual() const {
  const Vec3 lhs = sun.vec() + target.vec();
  const Vec3 rhs = 2.0 * std::cos(incidence) * normal.vec();
  return norm(lhs - rhs);
}

UnitVector3 reflect(const UnitVector3& sun, const UnitVector3& normal) {
  const double c = dot(sun, normal);
  if (!(c > 0.0)) {
    std::ostringstream os;
    os << "sun is behind the mirror (S.N = " << c << ")";
    throw Error(ErrorCode::SunBehindMirror, os.str());
  }
  // Renormalize to absorb rounding; the exact result is unit length.
  return UnitVector3::normalize(2.0 * c * normal.vec() - sun.vec());
}

ReflectionGeometry bisector_normal(const UnitVector3& sun, const UnitVector3& target) {
  const double sr = dot(sun, target);
  const Vec3 sum = sun.vec() + target.vec();
  if (1.0 + sr < 1e-12 || norm(sum) < 1e-9) {
    throw Error(ErrorCode::DegenerateBisector, "sun and target are anti-parallel; bisector undefined");
  }
  const UnitVector3 n = UnitVector3::normalize(sum / std::sqrt(2.0 * (1.0 + sr)));
  const double c = std::clamp(dot(sun, n), -1.0, 1.0);
  return {sun, target, n, std::acos(c)};
}

Frame3 heliostat_frame(const UnitVector3& normal, const Vec3& origin) {
  const double horizontal = std::hypot(normal.x(), normal.y());
  if (horizontal < 1e-6) {
    throw Error(ErrorCode::DegenerateFrame, "heliostat normal is vertical; frame azimuth undefined");
  }
  const UnitVector3 y = UnitVector3::normalize(cross(kWorldZ, normal));
  const UnitVector3 z = UnitVector3::normalize(cross(normal, y));
  return {origin, normal, y, z};
}

Mat3 rotation_about_z(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
}

Mat3 rotation_about_y(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {{{c, 0.0, s}, {0.0, 1.0, 0.0}, {-s, 0.0, c}}};
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
    }
  }
  return r;
}

Vec3 operator*(const Mat3& m, const Vec3& v) {
  return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
          m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
          m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

}  // namespace heliocant
