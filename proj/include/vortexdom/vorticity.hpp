#pragma once

#include "vortexdom/geometry.hpp"
#include "vortexdom/quadrature.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace vortexdom {

/// xi = A on the half-disk {z^2 + r^2 < a^2, r > 0} (ring geometry).
struct HillBall {
  double amplitude = 1.0;
  double radius = 1.0;
};

/// Classical Chaplygin-Lamb dipole of radius a traveling at speed W; the
/// interior vorticity is proportional to J1(k rho) x2 / rho with k a / a the
/// first zero of J1, zero outside.
struct LambDipole {
  double radius = 1.0;
  double speed = 1.0;
};

/// Odd pair of uniform disks of strength +-w0, radius eps, centered (0, +-d).
struct PatchPair {
  double strength = 1.0;
  double center_offset = 1.0;
  double patch_radius = 0.1;
};

/// xi = N exp(-(z^2 + (r - R0)^2) / (2 sigma^2)) with N = Gamma / (2 pi sigma^2 R0),
/// truncated at the 1e-14 relative tail so the support is genuinely bounded.
struct GaussianRing {
  double circulation = 1.0;
  double ring_radius = 1.0;
  double core_width = 0.1;
};

/// 2D odd pair of Gaussian blobs of circulation +-Gamma centered (0, +-d).
struct GaussianPair {
  double circulation = 1.0;
  double offset = 1.0;
  double core_width = 0.1;
};

/// Bilinearly interpolated samples on a rectangular grid covering the upper
/// half-plane part of the profile; dipole values are odd-reflected below the
/// axis. values[j * nu + i] is the sample at (u_i, v_j) with u the axial and
/// v the transverse coordinate.
struct GriddedSpec {
  int nu = 0, nv = 0;
  double u0 = 0.0, u1 = 0.0, v0 = 0.0, v1 = 0.0;
  std::vector<double> values;
  GeometryKind geometry = GeometryKind::Ring3D;
  std::string source_path;  // CSV origin, if loaded from a file
};

struct SteinerReport {
  bool is_symmetric = false;
  double max_violation = 0.0;
};

class VorticitySpec {
 public:
  using Kind = std::variant<HillBall, LambDipole, PatchPair, GaussianRing,
                            GaussianPair, GriddedSpec>;

  explicit VorticitySpec(Kind kind);

  GeometryKind geometry() const { return geom_; }
  const Kind& kind() const { return kind_; }
  std::string kind_name() const;

  /// Pointwise vorticity: xi(z, r) for rings, omega(x1, x2) for dipoles,
  /// with exact odd reflection below the dipole axis.
  double evaluate(const Vec2& p) const;

  /// True when the query lies outside the declared support (always pairs
  /// with a zero return from evaluate).
  bool outside_support(const Vec2& p) const;

  /// Analytic gradient of the profile where it is smooth; zero inside
  /// uniform patches. Gridded specs use finite differences of the
  /// interpolant.
  Vec2 gradient(const Vec2& p) const;

  /// True for profiles that are continuously differentiable (Lamb and the
  /// Gaussians); false for uniform patches and gridded data.
  bool smooth_profile() const;

  /// Peak magnitude of the profile.
  double peak() const;

  /// Bounding box of the upper-half-plane support.
  Box support_box() const;

  /// Characteristic outer length scale (used for escape radii and probes).
  double support_scale() const;

  /// Base integration cells covering the upper-half support, aligned with
  /// patch boundaries and sized to resolve the profile's length scale.
  std::vector<QuadCell> cells() const;

  /// Measure of the core: area (both halves) for dipoles, the 2 pi int r
  /// volume for rings. Analytic for the built-in primitives.
  double core_measure() const;

  /// Polyline sampling of the core boundary for patch-type profiles
  /// (empty for smooth profiles, where no sharp boundary exists).
  std::vector<Vec2> core_boundary(int n) const;

  nlohmann::ordered_json to_json() const;
  static VorticitySpec from_json(const nlohmann::json& j,
                                 const std::string& base_dir = "");

 private:
  Kind kind_;
  GeometryKind geom_;
};

/// Monotonicity scan of Steiner symmetry: evenness in the travel coordinate
/// plus non-increase of the profile away from the symmetry line, sampled on
/// an n x n grid over the support.
SteinerReport check_steiner(const VorticitySpec& spec, int n = 64);

/// A vorticity profile paired with a traveling speed W > 0.
struct TravelingVortex {
  VorticitySpec vorticity;
  double speed = 0.0;
  std::optional<double> steadiness_residual;

  TravelingVortex(VorticitySpec v, double w);
};

/// Loads a gridded spec from a CSV of (z, r, value) rows with a header row;
/// the sample points must form a full rectangular grid.
GriddedSpec load_gridded_csv(const std::string& path, GeometryKind geometry);
void save_gridded_csv(const GriddedSpec& spec, const std::string& path);

}  // namespace vortexdom
