/// @file
/// Domain extraction and topology classification checks against the
/// closed-form benchmark vortices.

#include "doctest.h"
#include "vortexdom/domain.hpp"
#include "vortexdom/errors.hpp"

#include <cmath>

using namespace vortexdom;

namespace {

constexpr double kHillW = 2.0 / 15.0;

StreamSolver& hill_solver() {
  static StreamSolver s(TravelingVortex(VorticitySpec{HillBall{1.0, 1.0}},
                                        kHillW));
  return s;
}

StreamSolver& lamb_solver() {
  static StreamSolver s(TravelingVortex(VorticitySpec{LambDipole{1.0, 0.8}},
                                        0.8));
  return s;
}

}  // namespace

TEST_CASE("core axis intervals of the primitives") {
  const DomainExtractor hill(hill_solver());
  const auto [h1, h2] = hill.core_axis_interval();
  CHECK(h1 == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(h2 == doctest::Approx(1.0).epsilon(1e-6));

  const StreamSolver pp(TravelingVortex(
      VorticitySpec{PatchPair{1.0, 1.0, 0.1}}, 1.0 / (4.0 * M_PI)));
  const auto [p1, p2] = DomainExtractor(pp).core_axis_interval();
  CHECK(p1 == doctest::Approx(0.9).epsilon(1e-6));
  CHECK(p2 == doctest::Approx(1.1).epsilon(1e-6));

  // Gaussian ring support is cut at the 1e-14 relative tail, i.e. at
  // |rho - R0| = sigma sqrt(2 * 14 * ln 10).
  const double sigma = 0.05;
  const StreamSolver ring(TravelingVortex(
      VorticitySpec{GaussianRing{1.0, 1.0, sigma}}, 0.3));
  const auto [g1, g2] = DomainExtractor(ring).core_axis_interval();
  const double cut = sigma * std::sqrt(28.0 * std::log(10.0));
  CHECK(g1 == doctest::Approx(1.0 - cut).epsilon(1e-4));
  CHECK(g2 == doctest::Approx(1.0 + cut).epsilon(1e-4));
}

TEST_CASE("classification bands around the traveling speed") {
  const DomainExtractor d(hill_solver());
  const double w = kHillW;
  CHECK(d.classify(2.0 * w).second == Topology::Spheroid);
  CHECK(d.classify(w).second == Topology::Lemniscate);
  CHECK(d.classify(w * (1.0 + 5e-4)).second == Topology::Lemniscate);
  CHECK(d.classify(0.5 * w).second == Topology::Toroid);
  CHECK(d.classify(0.5 * w).first == CaseTag::CaseII);

  const DomainExtractor lamb(lamb_solver());
  CHECK(lamb.classify(123.0).second == Topology::Oval2D);
  CHECK(lamb.classify(123.0).first == CaseTag::Dipole);
}

TEST_CASE("Hill ball: spheroidal domain equals the unit sphere") {
  const DomainExtractor d(hill_solver());
  const DomainResult res = d.extract(64);
  CHECK(res.topology == Topology::Spheroid);
  CHECK(res.case_tag == CaseTag::CaseI);
  CHECK(res.assumptions_verified);
  CHECK(res.gamma == 0.0);
  CHECK(res.inner_radius == 0.0);
  CHECK(res.outer_radius == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(res.center_speed == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  double max_dev = 0.0;
  for (const auto& p : res.boundary) {
    const double oracle = std::sqrt(std::max(0.0, 1.0 - p.s * p.s));
    max_dev = std::max(max_dev, std::abs(p.l - oracle));
  }
  CHECK(max_dev < 1e-2);
  CHECK(res.l0 == doctest::Approx(1.0).epsilon(2e-2));
  // Empty atmosphere: the domain coincides with the core ball.
  CHECK(res.atmosphere_ratio < 0.01);
  CHECK(res.domain_measure == doctest::Approx(4.0 * M_PI / 3.0).epsilon(5e-3));

  // Superlevel identity along the boundary polyline.
  const double phi_scale = kHillW * res.outer_radius * res.outer_radius;
  for (size_t i = 0; i < res.boundary.size(); i += 8) {
    const auto& p = res.boundary[i];
    const double phi = hill_solver().relative_stream({p.l, p.s});
    CHECK(std::abs(phi - res.gamma) < 1e-6 * phi_scale);
  }
}

TEST_CASE("Lamb dipole: oval domain equals the circle, Sadovskii") {
  const DomainExtractor d(lamb_solver());
  const DomainResult res = d.extract(64);
  CHECK(res.topology == Topology::Oval2D);
  CHECK(res.case_tag == CaseTag::Dipole);
  CHECK(res.assumptions_verified);
  CHECK(res.gamma == 0.0);
  CHECK(res.outer_radius == doctest::Approx(1.0).epsilon(1e-2));
  double max_dev = 0.0;
  for (const auto& p : res.boundary) {
    const double oracle = std::sqrt(std::max(0.0, 1.0 - p.s * p.s));
    max_dev = std::max(max_dev, std::abs(p.l - oracle));
  }
  CHECK(max_dev < 1e-2);
  CHECK(res.l0 == doctest::Approx(1.0).epsilon(2e-2));
  CHECK(res.atmosphere_ratio < 0.01);
  CHECK(res.sadovskii);

  // Axis touch: the relative stream is positive just above the axis.
  for (double s : {0.01, 0.05, 0.1}) {
    CHECK(lamb_solver().relative_stream({0.0, s}) > 0.0);
  }
}

TEST_CASE("patch pair: oval with a large atmosphere, not Sadovskii") {
  const double d = 1.0, eps = 0.1;
  const double w0 = 1.0 / (M_PI * eps * eps);
  const double w = 1.0 / (4.0 * M_PI * d);
  const StreamSolver s(TravelingVortex(VorticitySpec{PatchPair{w0, d, eps}},
                                       w));
  const DomainResult res = DomainExtractor(s).extract(33);
  CHECK(res.topology == Topology::Oval2D);
  CHECK_FALSE(res.sadovskii);
  CHECK(res.core_r1 > 0.5);
  // Kelvin-oval-sized domain vs two small disks.
  CHECK(res.atmosphere_ratio > 10.0);
  CHECK(res.domain_measure > res.core_measure);
  CHECK(res.l0 > 0.0);
}

TEST_CASE("Gaussian pair is not Sadovskii") {
  const StreamSolver s(TravelingVortex(
      VorticitySpec{GaussianPair{1.0, 1.0, 0.05}}, 1.0 / (4.0 * M_PI)));
  const DomainResult res = DomainExtractor(s).extract(33);
  CHECK(res.topology == Topology::Oval2D);
  CHECK_FALSE(res.sadovskii);
  CHECK(res.atmosphere_ratio > 1.0);
}

TEST_CASE("thin Gaussian ring: Case II toroidal domain") {
  const double sigma = 0.004;
  const VorticitySpec spec{GaussianRing{1.0, 1.0, sigma}};
  const double w = calibrate_speed(spec);
  const StreamSolver s(TravelingVortex(spec, w));
  const DomainExtractor d(s);
  const DomainResult res = d.extract(33);
  CHECK(res.topology == Topology::Toroid);
  CHECK(res.case_tag == CaseTag::CaseII);
  CHECK(res.gamma < 0.0);
  CHECK(res.inner_radius > 0.0);
  CHECK(res.inner_radius <= res.core_r1 + 1e-9);
  CHECK(res.outer_radius > res.core_r2);
  // Edge speed and monotonicity on (0, L).
  CHECK(s.velocity({0.0, res.inner_radius}).x ==
        doctest::Approx(w).epsilon(1e-4));
  double prev = s.velocity({0.0, 0.05 * res.inner_radius}).x;
  CHECK(prev < w);
  for (int i = 2; i <= 10; ++i) {
    const double v = s.velocity({0.0, 0.1 * i * res.inner_radius}).x;
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  // Core containment: phi(0, s) > gamma across the core interval.
  for (int i = 1; i < 8; ++i) {
    const double r = res.core_r1 + (res.core_r2 - res.core_r1) * i / 8.0;
    CHECK(s.relative_stream({0.0, r}) > res.gamma);
  }
  // Atmosphere dominates a thin core.
  CHECK(res.atmosphere_ratio > 1.0);
}

TEST_CASE("classification and boundary are invariant under uniform scaling") {
  const DomainResult base =
      DomainExtractor(hill_solver()).extract(17);
  const StreamSolver scaled(TravelingVortex(
      VorticitySpec{HillBall{2.0, 1.0}}, 2.0 * kHillW));
  const DomainResult twice = DomainExtractor(scaled).extract(17);
  CHECK(base.topology == twice.topology);
  REQUIRE(base.boundary.size() == twice.boundary.size());
  for (size_t i = 0; i < base.boundary.size(); ++i) {
    CHECK(twice.boundary[i].l ==
          doctest::Approx(base.boundary[i].l).epsilon(1e-3).scale(1.0));
  }
  CHECK(twice.gamma == doctest::Approx(2.0 * base.gamma).epsilon(1e-6));
}

TEST_CASE("off-speed vortex is flagged but still classified") {
  const StreamSolver s(TravelingVortex(VorticitySpec{HillBall{1.0, 1.0}},
                                       0.10));
  const DomainResult res = DomainExtractor(s).extract(17);
  CHECK_FALSE(res.assumptions_verified);
  CHECK_FALSE(res.flags.empty());
  CHECK(res.topology == Topology::Spheroid);
  // Slower frame speed inflates the domain beyond the core ball.
  CHECK(res.outer_radius > 1.0);
  CHECK(res.atmosphere_ratio > 0.0);
}

TEST_CASE("multiply connected axis trace is rejected") {
  // Two Gaussian rings of different radii glued as a gridded profile.
  GriddedSpec g;
  g.nu = 101;
  g.nv = 161;
  g.u0 = -0.3;
  g.u1 = 0.3;
  g.v0 = 0.0;
  g.v1 = 1.6;
  g.geometry = GeometryKind::Ring3D;
  g.values.assign(g.nu * g.nv, 0.0);
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) {
      const double z = g.u0 + (g.u1 - g.u0) * i / (g.nu - 1);
      const double r = g.v0 + (g.v1 - g.v0) * j / (g.nv - 1);
      const double d1 = (z * z + (r - 0.6) * (r - 0.6)) / (2 * 0.03 * 0.03);
      const double d2 = (z * z + (r - 1.3) * (r - 1.3)) / (2 * 0.03 * 0.03);
      if (d1 < 30.0) g.values[j * g.nu + i] += std::exp(-d1);
      if (d2 < 30.0) g.values[j * g.nu + i] += std::exp(-d2);
    }
  const StreamSolver s(TravelingVortex(VorticitySpec{g}, 0.3));
  CHECK_THROWS_AS(DomainExtractor(s).core_axis_interval(),
                  precondition_error);
}

TEST_CASE("domain result serialization") {
  const DomainResult res = DomainExtractor(hill_solver()).extract(9);
  const auto j = res.to_json();
  CHECK(j.at("topology") == "spheroid");
  CHECK(j.at("case") == "case_I");
  CHECK(j.at("boundary").size() == 9);
  CHECK(j.at("sadovskii") == false);
  CHECK(double(j.at("atmosphere_ratio")) < 0.01);
}
