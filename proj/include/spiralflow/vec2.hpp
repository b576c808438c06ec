#pragma once

#include <cmath>

namespace spiralflow {

/// Plain 2D vector in double precision.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 r) const { return {x + r.x, y + r.y}; }
  constexpr Vec2 operator-(Vec2 r) const { return {x - r.x, y - r.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(Vec2 r) {
    x += r.x;
    y += r.y;
    return *this;
  }
  Vec2& operator-=(Vec2 r) {
    x -= r.x;
    y -= r.y;
    return *this;
  }

  constexpr double dot(Vec2 r) const { return x * r.x + y * r.y; }
  constexpr double norm2() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }
  double angle() const { return std::atan2(y, x); }

  /// Rotation by -pi/2: maps an outer normal (cos t, sin t) to the tangent
  /// (sin t, -cos t) used for polygonal facets.
  constexpr Vec2 rot_cw() const { return {y, -x}; }
  /// Rotation by +pi/2.
  constexpr Vec2 rot_ccw() const { return {-y, x}; }
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

inline Vec2 unit_dir(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace spiralflow
