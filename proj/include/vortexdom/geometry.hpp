#pragma once

#include <array>
#include <cmath>
#include <string>

namespace vortexdom {

/// Point in the analysis half-plane. For rings the components are (z, r);
/// for dipoles they are (x1, x2).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
};

inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

enum class GeometryKind { Dipole2D, Ring3D };

inline std::string to_string(GeometryKind g) {
  return g == GeometryKind::Dipole2D ? "dipole" : "ring";
}

/// Axis-aligned bounding box.
struct Box {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double diag() const { return std::hypot(width(), height()); }
  bool contains(const Vec2& p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
  /// Distance from p to the box (0 if inside).
  double distance(const Vec2& p) const {
    const double dx = std::max({x0 - p.x, 0.0, p.x - x1});
    const double dy = std::max({y0 - p.y, 0.0, p.y - y1});
    return std::hypot(dx, dy);
  }
  Box inflated(double factor) const {
    const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    const double hw = 0.5 * width() * factor, hh = 0.5 * height() * factor;
    return {cx - hw, cx + hw, cy - hh, cy + hh};
  }
};

}  // namespace vortexdom
