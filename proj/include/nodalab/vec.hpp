#pragma once

#include <cmath>

namespace nodalab {

// Base dimension of the domains; the lifted problem lives in n+1 coordinates
// (x_1, ..., x_n, t).  Formulas keep `n` symbolic where it is free, but the
// geometry kinds shipped here are planar.
inline constexpr int kBaseDim = 2;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double c) const { return {x * c, y * c}; }
  Vec2 operator/(double c) const { return {x / c, y / c}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
  Vec2 normalized() const { double n = norm(); return {x / n, y / n}; }
  // rotate by +90 degrees
  Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double c, const Vec2& v) { return v * c; }
inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Point in the lifted cylinder: (x, t) with x planar and t the extra variable.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double t_) : x(x_), y(y_), t(t_) {}
  Vec3(const Vec2& p, double t_) : x(p.x), y(p.y), t(t_) {}

  Vec2 base() const { return {x, y}; }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, t + o.t}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, t - o.t}; }
  Vec3 operator*(double c) const { return {x * c, y * c, t * c}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + t * o.t; }
  double norm2() const { return x * x + y * y + t * t; }
  double norm() const { return std::sqrt(norm2()); }
};

inline Vec3 operator*(double c, const Vec3& v) { return v * c; }

}  // namespace nodalab
