#pragma once

#include "vortexdom/geometry.hpp"

#include <array>
#include <functional>
#include <vector>

namespace vortexdom {

/// Gauss-Legendre rule on [-1, 1].
struct GLRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Cached Gauss-Legendre rule of order n (2 <= n <= 64).
const GLRule& gl_rule(int n);

/// Adaptive Gauss-Kronrod 7-15 quadrature on [a, b].
double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol = 1e-13, int max_depth = 48);

/// Integration cell over a piece of the half-plane. Rect cells map (u, v)
/// directly to physical coordinates; polar cells map (u, v) = (radius, angle)
/// around a fixed center and pick up the radial jacobian. Cells are chosen so
/// the vorticity profile is smooth in the cell interior (patch boundaries and
/// Gaussian length scales are resolved by the base cell layout).
struct QuadCell {
  enum class Kind { Rect, Polar };
  Kind kind = Kind::Rect;
  double u0 = 0.0, u1 = 0.0, v0 = 0.0, v1 = 0.0;
  Vec2 center{};  // polar cells only

  static QuadCell rect(double x0, double x1, double y0, double y1) {
    return {Kind::Rect, x0, x1, y0, y1, {}};
  }
  static QuadCell polar(const Vec2& c, double rad0, double rad1, double ang0,
                        double ang1) {
    return {Kind::Polar, rad0, rad1, ang0, ang1, c};
  }

  Vec2 map(double u, double v) const;
  double jac(double u, double v) const;
  Box bbox() const;
  double diam() const;
  /// Parameter coordinates of a physical point; false if outside the cell.
  bool param_of(const Vec2& p, double& u, double& v) const;
  std::array<QuadCell, 4> split() const;
};

/// Multi-output integrand: writes n_out values for the physical point.
using Integrand = std::function<void(const Vec2&, double*)>;

struct CubatureOptions {
  int order = 12;         // tensor Gauss-Legendre order per leaf cell
  double kappa = 1.5;     // refine while dist(p, cell) < kappa * diam
  double min_size = 1e-3; // absolute floor on the cell diameter
  int max_depth = 30;
};

/// Integrates f over the cells, refining toward the point `singular` when
/// given. Integrable 1/rho and log singularities of f at that point are
/// handled by triangle (Duffy) subdivision of the innermost cell, which makes
/// the transformed integrand bounded.
void integrate_cells(const std::vector<QuadCell>& cells, const Integrand& f,
                     int n_out, const Vec2* singular,
                     const CubatureOptions& opt, double* out);

double integrate_cells(const std::vector<QuadCell>& cells,
                       const std::function<double(const Vec2&)>& f,
                       const Vec2* singular, const CubatureOptions& opt);

}  // namespace vortexdom
