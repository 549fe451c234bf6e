#pragma once

#include "vortexdom/geometry.hpp"

namespace vortexdom {

/// Result of a 3D ring kernel evaluation.
struct KernelValue {
  double value = 0.0;
  bool elliptic = true;  // false when the angular-quadrature path was used
  double est_error = 0.0;
};

/// Odd-image log kernel for the half-plane: (1/2pi)(log|x - y*| - log|x - y|)
/// with y* the reflection of y across the x1-axis. Requires y.y > 0.
/// Exactly antisymmetric in x.y -> -x.y and exactly zero on the axis x.y = 0.
double kernel2d(const Vec2& x, const Vec2& y);

/// Gradient in x of kernel2d.
Vec2 kernel2d_grad(const Vec2& x, const Vec2& y);

/// Axisymmetric ring Green's function
///   G = (r r' / 2pi) \int_0^pi cos(t) [r^2 + r'^2 - 2 r r' cos t + (z-z')^2]^{-1/2} dt,
/// evaluated through its complete-elliptic-integral reduction. Nonnegative;
/// exactly zero at r = 0.
KernelValue kernel3d(double r, double z, double rp, double zp);

/// Partial derivatives of kernel3d with respect to z and r.
double kernel3d_dz(double r, double z, double rp, double zp);
double kernel3d_dr(double r, double z, double rp, double zp);

/// Evaluates G, dG/dz and dG/dr in one pass (shared elliptic integrals).
void kernel3d_all(double r, double z, double rp, double zp, double out[3]);

/// Adaptive quadrature of the defining angular integrals; used as the
/// reference oracle for the elliptic fast path and as the fallback in the
/// immediate vicinity of the kernel diagonal.
double kernel3d_theta_quad(double r, double z, double rp, double zp,
                           double rel_tol = 1e-12);
double kernel3d_dz_theta_quad(double r, double z, double rp, double zp,
                              double rel_tol = 1e-12);
double kernel3d_dr_theta_quad(double r, double z, double rp, double zp,
                              double rel_tol = 1e-12);

}  // namespace vortexdom
