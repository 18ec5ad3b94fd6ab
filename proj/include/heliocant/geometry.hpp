#pragma once

#include <array>
#include <cmath>

namespace heliocant {

// World frame: X' South->North, Y' East->West, Z' Nadir->Zenith, meters.

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Direction with |v| = 1 (within 1e-12). Construction normalizes.
class UnitVector3 {
 public:
  constexpr UnitVector3() = default;

  /// Throws InvalidArgument for a zero or non-finite vector.
  static UnitVector3 normalize(const Vec3& v);

  /// Trusts the caller; used where the input is unit length by construction.
  static constexpr UnitVector3 unchecked(const Vec3& v) { return UnitVector3(v); }

  constexpr double x() const { return v_.x; }
  constexpr double y() const { return v_.y; }
  constexpr double z() const { return v_.z; }
  constexpr const Vec3& vec() const { return v_; }
  constexpr operator const Vec3&() const { return v_; }
  constexpr UnitVector3 operator-() const { return UnitVector3(-v_); }
  constexpr bool operator==(const UnitVector3&) const = default;

 private:
  constexpr explicit UnitVector3(const Vec3& v) : v_(v) {}
  Vec3 v_{1.0, 0.0, 0.0};
};

inline constexpr UnitVector3 kWorldX = UnitVector3::unchecked({1.0, 0.0, 0.0});
inline constexpr UnitVector3 kWorldY = UnitVector3::unchecked({0.0, 1.0, 0.0});
inline constexpr UnitVector3 kWorldZ = UnitVector3::unchecked({0.0, 0.0, 1.0});

/// Orthonormal right-handed frame.
struct Frame3 {
  Vec3 origin;
  UnitVector3 axis_x = kWorldX;
  UnitVector3 axis_y = kWorldY;
  UnitVector3 axis_z = kWorldZ;

  Vec3 to_world(const Vec3& local) const {
    return origin + local.x * axis_x.vec() + local.y * axis_y.vec() + local.z * axis_z.vec();
  }
  Vec3 direction_to_world(const Vec3& local) const {
    return local.x * axis_x.vec() + local.y * axis_y.vec() + local.z * axis_z.vec();
  }
  Vec3 direction_to_local(const Vec3& world) const {
    return {dot(world, axis_x), dot(world, axis_y), dot(world, axis_z)};
  }

  /// Max deviation from orthonormality and right-handedness.
  double orthonormality_residual() const;
};

/// S + R = 2 cos(i) N.
struct ReflectionGeometry {
  UnitVector3 sun;
  UnitVector3 target;
  UnitVector3 normal;
  double incidence = 0.0;  // rad

  double residual() const;
};

/// Mirror reflection R = 2(S.N)N - S. Throws SunBehindMirror when S.N <= 0.
UnitVector3 reflect(const UnitVector3& sun, const UnitVector3& normal);

/// Mirror normal that sends `sun` onto `target`. Throws DegenerateBisector
/// for anti-parallel inputs.
ReflectionGeometry bisector_normal(const UnitVector3& sun, const UnitVector3& target);

/// Heliostat frame: X along the normal, Y horizontal (Z' x normal), Z up-ish.
/// Throws DegenerateFrame when the normal is within 1e-6 of vertical.
Frame3 heliostat_frame(const UnitVector3& normal, const Vec3& origin = {});

/// Row-major 3x3 rotation.
using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 rotation_about_z(double angle);
Mat3 rotation_about_y(double angle);
Mat3 operator*(const Mat3& a, const Mat3& b);
Vec3 operator*(const Mat3& m, const Vec3& v);

}  // namespace heliocant
