#pragma once

#include "vortexdom/vorticity.hpp"

#include <string>
#include <vector>

namespace vortexdom {

/// Shared tolerance knobs; see the config schema.
struct ToleranceSet {
  double quadrature = 1e-8;
  double root = 1e-8;
  double ode = 1e-9;
};

struct FieldSample {
  Vec2 point;
  double stream = 0.0;        // psi for rings, G for dipoles
  Vec2 velocity{};            // (v^z, v^r) or (u1, u2), lab frame
  double relative_stream = 0.0;  // stream - W r^2/2 (ring) or - W x2 (dipole)
};

struct AxisSample {
  double s = 0.0;      // transverse coordinate (r or x2) along z = 0 / x1 = 0
  double phi = 0.0;    // relative stream at (0, s)
  double speed = 0.0;  // axial velocity component at (0, s)
};

struct AxisProfile {
  std::vector<AxisSample> samples;
  double R1 = 0.0, R2 = 0.0;  // core interval endpoints on the transverse axis
};

/// Stream-function and velocity evaluation by cubature of the kernels
/// against the vorticity. Stateless with respect to queries; safe to call
/// concurrently.
class StreamSolver {
 public:
  explicit StreamSolver(const TravelingVortex& tv, ToleranceSet tol = {});

  const TravelingVortex& vortex() const { return tv_; }
  const ToleranceSet& tolerances() const { return tol_; }
  double speed() const { return tv_.speed; }
  double scale() const { return scale_; }

  double stream(const Vec2& p) const;
  Vec2 velocity(const Vec2& p) const;
  double relative_stream(const Vec2& p) const;
  /// One cubature pass producing stream, velocity and relative stream.
  FieldSample sample(const Vec2& p) const;

  /// On-axis axial speed v^z(z, 0) for rings via the reduced formula
  ///   (1/2) int r'^3 xi(z', r') [r'^2 + (z - z')^2]^{-3/2} dr' dz'.
  double axis_speed(double z) const;

  /// u1(0,0) for dipoles, axis_speed(0) for rings.
  double center_speed() const;

  /// Samples of (s, phi(0,s), axial speed(0,s)) for s in (0, s_max].
  AxisProfile axis_profile(int n, double s_max) const;

  /// sup over a sampled arc of |psi/r^2| (ring) or |G/x2| (dipole) at each
  /// probe radius; samples restricted to transverse component >= R/sqrt(2).
  std::vector<double> decay_probe(const std::vector<double>& radii,
                                  int n_samples = 32) const;

  /// Normalized advection residual of the vorticity in the moving frame.
  /// Smooth profiles: volumetric L2 of (v - W e_z) . grad(q) over the core,
  /// normalized by W ||grad q||. Patch profiles: spread of the relative
  /// stream over the core boundary, normalized by the overall phi scale.
  double steadiness_residual(int n = 20) const;

 private:
  TravelingVortex tv_;
  ToleranceSet tol_;
  std::vector<QuadCell> cells_;
  CubatureOptions opt_;
  double scale_ = 1.0;

  FieldSample sample_dipole(const Vec2& p) const;
  FieldSample sample_ring(const Vec2& p) const;
  double boundary_residual(int n) const;
  double volumetric_residual(int n) const;
};

/// Calibrates W for a smooth profile by golden-section minimization of the
/// steadiness residual; velocities are W-independent and computed once.
double calibrate_speed(const VorticitySpec& spec, ToleranceSet tol = {},
                       int n = 20);

/// Writes a field sweep CSV over an nu x nv grid of the box.
void export_field_csv(const StreamSolver& solver, const Box& box, int nu,
                      int nv, const std::string& path);

}  // namespace vortexdom
