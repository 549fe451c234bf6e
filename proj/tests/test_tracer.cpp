/// @file
/// Streamline tracing: conservation, closed orbits, escape asymptotes and
/// domain invariance, checked against closed-form benchmark fields.

#include "doctest.h"
#include "vortexdom/tracer.hpp"
#include "vortexdom/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

using namespace vortexdom;

namespace {

constexpr double kHillW = 2.0 / 15.0;

// Closed-form Hill field (unit radius, unit amplitude).
struct hill_field : FieldProvider {
  Vec2 velocity(const Vec2& p) const override {
    const double z = p.x, r = p.y, rho2 = z * z + r * r;
    if (rho2 < 1.0)
      return {0.2 * (1.0 - rho2 - r * r) + kHillW, 0.2 * z * r};
    const double rho = std::sqrt(rho2);
    const double rho3 = rho2 * rho, rho5 = rho2 * rho3;
    return {0.5 * kHillW * (2.0 / rho3 - 3.0 * r * r / rho5),
            1.5 * kHillW * z * r / rho5};
  }
  double relative_stream(const Vec2& p) const override {
    const double z = p.x, r = p.y, rho2 = z * z + r * r;
    if (rho2 < 1.0) return 0.1 * r * r * (1.0 - rho2);
    const double rho3 = rho2 * std::sqrt(rho2);
    return 0.5 * kHillW * r * r * (1.0 / rho3 - 1.0);
  }
  GeometryKind geometry() const override { return GeometryKind::Ring3D; }
  double speed() const override { return kHillW; }
  double scale() const override { return 1.0; }
  Box valid_box() const override { return {-1e6, 1e6, 0.0, 1e6}; }
};

// Closed-form Lamb dipole field (unit radius, W = 0.8).
struct lamb_field : FieldProvider {
  static constexpr double W = 0.8;
  static constexpr double k = 3.8317059702075123;

  static double phi_of(const Vec2& p) {
    const double rho2 = p.x * p.x + p.y * p.y;
    const double C = -2.0 * W * k / std::cyl_bessel_j(0, k);
    if (rho2 >= 1.0) return W * p.y * (1.0 / rho2 - 1.0);
    const double rho = std::sqrt(rho2);
    if (rho < 1e-12) return 0.5 * C / k * p.y;
    return (C / (k * k)) * std::cyl_bessel_j(1, k * rho) * p.y / rho;
  }

  Vec2 velocity(const Vec2& p) const override {
    const double x = p.x, y = p.y, rho2 = x * x + y * y;
    if (rho2 >= 1.0) {
      const double q = 1.0 / (rho2 * rho2);
      return {W * (1.0 / rho2 - 1.0) - 2.0 * W * y * y * q + W,
              2.0 * W * x * y * q};
    }
    const double C = -2.0 * W * k / std::cyl_bessel_j(0, k);
    const double rho = std::max(std::sqrt(rho2), 1e-12);
    const double j1 = std::cyl_bessel_j(1, k * rho);
    const double j1p = std::cyl_bessel_j(0, k * rho) - j1 / (k * rho);
    const double g = (C / (k * k)) * j1 / rho;
    const double gp = (C / (k * k)) * (k * j1p * rho - j1) / (rho2 * rho);
    return {g + y * y * gp + W, -x * y * gp};
  }
  double relative_stream(const Vec2& p) const override { return phi_of(p); }
  GeometryKind geometry() const override { return GeometryKind::Dipole2D; }
  double speed() const override { return W; }
  double scale() const override { return 1.0; }
  Box valid_box() const override { return {-1e6, 1e6, -1e6, 1e6}; }
};

}  // namespace

TEST_CASE("Hill interior seed gives a closed bounded orbit") {
  const hill_field f;
  const StreamlineTrace tr = trace(f, {0.0, 0.5});
  CHECK(tr.verdict == TraceVerdict::Bounded);
  CHECK(tr.closed_orbit);
  CHECK(tr.max_phi_drift < 1e-6);
  CHECK(tr.steps > 10);

  // Stationarity: re-seeding at a mid-orbit node reproduces the orbit.
  const TraceNode mid = tr.nodes[tr.nodes.size() / 2];
  const StreamlineTrace tr2 = trace(f, mid.p);
  CHECK(tr2.verdict == TraceVerdict::Bounded);
  CHECK(tr2.closed_orbit);
  CHECK(tr2.phi_seed == doctest::Approx(tr.phi_seed).epsilon(1e-6));
  CHECK(tr2.elapsed == doctest::Approx(tr.elapsed).epsilon(0.02));
}

TEST_CASE("dipole axis trajectories stay on the axis exactly") {
  const lamb_field f;
  TraceOptions opt;
  opt.horizon = 200.0;
  const StreamlineTrace tr = trace(f, {-2.0, 0.0}, opt);
  CHECK(tr.verdict == TraceVerdict::Escaping);
  for (const auto& n : tr.nodes) CHECK(n.p.y == 0.0);
  REQUIRE(tr.escape_asymptote.has_value());
  CHECK(*tr.escape_asymptote == 0.0);
}

TEST_CASE("escape asymptotes match the level-set prediction") {
  TraceOptions opt;
  opt.horizon = 1000.0;
  opt.escape_factor = 10.0;

  const hill_field ring;
  const Vec2 ring_seed{-3.0, 0.5};
  const EscapeReport r3 = verify_escape(ring, ring_seed, opt);
  CHECK(r3.hypotheses_hold);
  CHECK(r3.escape_confirmed);
  CHECK(r3.asymptote_matched);
  CHECK(r3.ok());
  CHECK(r3.level < 0.0);
  CHECK(r3.predicted ==
        doctest::Approx(std::sqrt(-2.0 * r3.level / kHillW)).epsilon(1e-12));

  const lamb_field dip;
  const EscapeReport r2 = verify_escape(dip, {-3.0, 0.5}, opt);
  CHECK(r2.ok());
  CHECK(r2.predicted == doctest::Approx(-r2.level / lamb_field::W));
  CHECK(std::abs(r2.observed - r2.predicted) <= 0.02 * r2.predicted);

  // Positive level: hypotheses must fail without any escape claim.
  const EscapeReport bad = verify_escape(ring, {-0.3, 0.5}, opt);
  CHECK_FALSE(bad.hypotheses_hold);
  CHECK_FALSE(bad.ok());
}

TEST_CASE("time reversal returns to the seed") {
  const hill_field f;
  TraceOptions opt;
  opt.horizon = 2.0;
  const Vec2 seed{0.2, 0.6};
  const StreamlineTrace fwd = trace(f, seed, opt);
  opt.horizon = -fwd.elapsed;
  const StreamlineTrace back = trace(f, fwd.nodes.back().p, opt);
  CHECK(dist(back.nodes.back().p, seed) < 1e-6);
}

TEST_CASE("conservation along random bounded traces") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  const hill_field ring;
  const lamb_field dip;
  TraceOptions opt;
  opt.horizon = 20.0;
  int traced = 0;
  while (traced < 20) {
    const Vec2 p{u(rng), u(rng)};
    if (p.x * p.x + p.y * p.y > 0.8 || std::abs(p.y) < 0.05) continue;
    const StreamlineTrace t3 = trace(ring, {p.x, std::abs(p.y)}, opt);
    CHECK(t3.max_phi_drift < 1e-6);
    const StreamlineTrace t2 = trace(dip, p, opt);
    CHECK(t2.max_phi_drift < 1e-6);
    ++traced;
  }
}

TEST_CASE("step limit yields an undecided verdict") {
  const hill_field f;
  TraceOptions opt;
  opt.max_steps = 5;
  const StreamlineTrace tr = trace(f, {0.0, 0.5}, opt);
  CHECK(tr.verdict == TraceVerdict::Undecided);
  CHECK_FALSE(tr.diagnostic.empty());
}

TEST_CASE("ring seeds below the axis are rejected") {
  const hill_field f;
  CHECK_THROWS_AS(trace(f, {0.0, -0.5}), precondition_error);
}

TEST_CASE("cached field reproduces the exact field and conserves phi") {
  const StreamSolver solver(
      TravelingVortex(VorticitySpec{HillBall{1.0, 1.0}}, kHillW));
  const CachedField cf(solver, {-2.0, 2.0, 0.0, 2.0}, 81, 41);
  const hill_field exact;

  for (const Vec2 p : {Vec2{0.0, 0.5}, Vec2{0.3, 0.4}, Vec2{-1.5, 0.8}}) {
    CHECK(cf.relative_stream(p) ==
          doctest::Approx(exact.relative_stream(p)).epsilon(2e-3).scale(0.1));
    const Vec2 vc = cf.velocity(p), ve = exact.velocity(p);
    CHECK(vc.x == doctest::Approx(ve.x).epsilon(5e-3).scale(0.1));
    CHECK(vc.y == doctest::Approx(ve.y).epsilon(5e-3).scale(0.1));
  }

  // The interpolated relative stream is a first integral of the cached
  // field, so the drift bound holds independently of grid resolution.
  const StreamlineTrace tr = trace(cf, {0.0, 0.5});
  CHECK(tr.verdict == TraceVerdict::Bounded);
  CHECK(tr.closed_orbit);
  CHECK(tr.max_phi_drift < 1e-6);
}

TEST_CASE("Monte-Carlo advection keeps the Hill domain invariant") {
  const StreamSolver solver(
      TravelingVortex(VorticitySpec{HillBall{1.0, 1.0}}, kHillW));
  const DomainResult dom = DomainExtractor(solver).extract(33);
  const hill_field f;
  const InvarianceReport rep = verify_domain_invariance(f, dom, 25, 50.0, 11);
  CHECK(rep.n_interior == 25);
  CHECK(rep.interior_fraction >= 0.99);
  CHECK(rep.exterior_fraction >= 0.99);
}

TEST_CASE("trace serialization and CSV export") {
  const hill_field f;
  const StreamlineTrace tr = trace(f, {0.0, 0.5});
  const auto j = tr.to_json();
  CHECK(j.at("verdict") == "bounded");
  CHECK(j.at("closed_orbit") == true);
  CHECK(double(j.at("max_phi_drift")) < 1e-6);

  const std::string path = "trace_test_tmp.csv";
  export_trace_csv(tr, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,axial,transverse,phi");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == int(tr.nodes.size()));
  in.close();
  std::remove(path.c_str());
}
