#pragma once

#include "vortexdom/stream.hpp"

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace vortexdom {

enum class Topology { Oval2D, Spheroid, Lemniscate, Toroid };
enum class CaseTag { Dipole, CaseI, CaseII };

std::string to_string(Topology t);
std::string to_string(CaseTag c);

/// One sample of the domain boundary: half-width l at transverse offset s,
/// i.e. the boundary passes through (axial, transverse) = (+-l, s).
struct BoundaryPoint {
  double s = 0.0;
  double l = 0.0;
};

struct DomainResult {
  Topology topology = Topology::Spheroid;
  CaseTag case_tag = CaseTag::CaseI;
  double center_speed = 0.0;
  double gamma = 0.0;         // stream level of the domain boundary
  double inner_radius = 0.0;  // L (0 outside Case II)
  double outer_radius = 0.0;  // R
  double core_r1 = 0.0;       // core interval (R1, R2) on the transverse axis
  double core_r2 = 0.0;
  double l0 = 0.0;            // boundary half-width at s -> 0 (0 for toroids)
  std::vector<BoundaryPoint> boundary;
  double core_measure = 0.0;        // area (2D) or 2 pi int r volume (3D)
  double domain_measure = 0.0;
  double atmosphere_measure = 0.0;
  double atmosphere_ratio = 0.0;
  bool sadovskii = false;  // 2D only: empty atmosphere + core on the axis
  bool assumptions_verified = true;
  std::vector<std::string> flags;  // diagnostics for unverified assumptions

  nlohmann::ordered_json to_json() const;
};

/// Extracts the vortex domain of a traveling vortex as a superlevel set of
/// the relative stream function, classifies its topology from the center
/// speed, and measures the atmosphere.
class DomainExtractor {
 public:
  explicit DomainExtractor(const StreamSolver& solver);

  /// Positive interval (R1, R2) of the profile on the transverse axis;
  /// rejects profiles whose axis trace is not a single interval.
  std::pair<double, double> core_axis_interval() const;

  /// Center-speed classification. Rings: center speed above W gives Case I
  /// (spheroid), below gives Case II (toroid), within the eps_cls band gives
  /// the lemniscate; dipoles are ovals unconditionally.
  std::pair<CaseTag, Topology> classify(double center_speed) const;

  /// Case II inner radius: root of v^z(0, r) = W on (0, R1].
  double find_inner_radius(double r1) const;

  /// Boundary level gamma and outer radius R (first root of phi(0, s) = gamma
  /// past the core interval).
  std::pair<double, double> find_level_and_outer_radius(CaseTag tag, double l,
                                                        double r2) const;

  /// Half-width samples l(s) on a Chebyshev grid over (inner, outer), each
  /// from a bisection of phi(z, s) = gamma in the axial coordinate.
  std::vector<BoundaryPoint> boundary_curve(double gamma, double inner,
                                            double outer, int n_samples) const;

  /// Full pipeline; n_boundary Chebyshev samples of l. Precondition failures
  /// (asymmetry, large steadiness residual) are recorded in flags and clear
  /// assumptions_verified instead of aborting.
  DomainResult extract(int n_boundary = 128) const;

 private:
  const StreamSolver& solver_;

  double phi_axis(double s) const;   // relative stream at (0, s)
  double axial_speed_at(double s) const;  // axial velocity component at (0, s)
  double bisect_boundary(double s, double gamma, double z_hint) const;
};

void export_boundary_csv(const DomainResult& result, const std::string& path);

}  // namespace vortexdom
