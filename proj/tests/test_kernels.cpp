/// @file
/// Checks for the 2D image kernel and the axisymmetric ring kernel.

#include "doctest.h"
#include "vortexdom/kernels.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace vortexdom;

TEST_CASE("kernel2d closed-form value") {
  // |x - y*| = 3, |x - y| = 1 -> (1/2pi) log 3.
  const double v = kernel2d({0.0, 1.0}, {0.0, 2.0});
  CHECK(v == doctest::Approx(std::log(3.0) / (2.0 * M_PI)).epsilon(1e-14));
}

TEST_CASE("kernel2d vanishes on the axis and is exactly antisymmetric") {
  CHECK(kernel2d({5.0, 0.0}, {1.0, 1.0}) == 0.0);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const Vec2 x{u(rng), u(rng)};
    const Vec2 y{u(rng), std::abs(u(rng)) + 0.01};
    if (dist(x, y) < 1e-6) continue;
    CHECK(kernel2d({x.x, -x.y}, y) == -kernel2d(x, y));
  }
}

TEST_CASE("kernel2d matches independent two-log evaluation") {
  const Vec2 x{0.3, 0.7}, y{0.1, 0.4};
  const double direct =
      (std::log(std::hypot(x.x - y.x, x.y + y.y)) -
       std::log(std::hypot(x.x - y.x, x.y - y.y))) /
      (2.0 * M_PI);
  CHECK(kernel2d(x, y) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("kernel2d_grad matches finite differences") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const Vec2 x{u(rng), u(rng)};
    const Vec2 y{u(rng), std::abs(u(rng)) + 0.05};
    if (dist(x, y) < 0.05 || dist({x.x, -x.y}, y) < 0.05) continue;
    const Vec2 g = kernel2d_grad(x, y);
    const double fx =
        (kernel2d({x.x + h, x.y}, y) - kernel2d({x.x - h, x.y}, y)) / (2 * h);
    const double fy =
        (kernel2d({x.x, x.y + h}, y) - kernel2d({x.x, x.y - h}, y)) / (2 * h);
    CHECK(g.x == doctest::Approx(fx).epsilon(1e-6));
    CHECK(g.y == doctest::Approx(fy).epsilon(1e-6));
  }
}

TEST_CASE("kernel3d basics") {
  CHECK(kernel3d(0.0, 3.0, 1.0, 0.0).value == 0.0);
  // Symmetry in (r,z) <-> (r',z').
  const double a = kernel3d(1.3, 0.4, 0.8, -0.2).value;
  const double b = kernel3d(0.8, -0.2, 1.3, 0.4).value;
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
  CHECK_THROWS_AS(kernel3d(1.0, 0.5, 1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(kernel3d(-0.5, 0.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("elliptic fast path vs angular quadrature oracle") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(0.05, 3.0), uz(-3.0, 3.0);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const double r = u(rng), rp = u(rng), z = uz(rng), zp = uz(rng);
    if (std::hypot(r - rp, z - zp) < 1e-3) continue;
    const KernelValue kv = kernel3d(r, z, rp, zp);
    const double oracle = kernel3d_theta_quad(r, z, rp, zp, 1e-12);
    CHECK(kv.value >= 0.0);
    CHECK(kv.value == doctest::Approx(oracle).epsilon(1e-10));
    ++checked;
  }
  CHECK(checked > 900);
}

TEST_CASE("kernel3d stays accurate close to the diagonal") {
  for (double d : {1e-2, 1e-4, 1e-6}) {
    const double v = kernel3d(1.0, 0.0, 1.0 + d, 0.0).value;
    const double oracle = kernel3d_theta_quad(1.0, 0.0, 1.0 + d, 0.0, 1e-12);
    CHECK(v == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("derivative kernels match finite differences") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(0.2, 2.5), uz(-2.0, 2.0);
  const double h = 1e-5;
  for (int i = 0; i < 300; ++i) {
    const double r = u(rng), rp = u(rng), z = uz(rng), zp = uz(rng);
    if (std::hypot(r - rp, z - zp) < 0.05) continue;
    const double dz = kernel3d_dz(r, z, rp, zp);
    const double dr = kernel3d_dr(r, z, rp, zp);
    const double fdz = (kernel3d(r, z + h, rp, zp).value -
                        kernel3d(r, z - h, rp, zp).value) /
                       (2 * h);
    const double fdr = (kernel3d(r + h, z, rp, zp).value -
                        kernel3d(r - h, z, rp, zp).value) /
                       (2 * h);
    CHECK(std::abs(dz - fdz) < std::max(1e-8, 1e-5 * std::abs(dz)));
    CHECK(std::abs(dr - fdr) < std::max(1e-8, 1e-5 * std::abs(dr)));
  }
}

TEST_CASE("dz kernel sign and antisymmetry") {
  // At equal heights the kernel is even in zeta, so the derivative is zero.
  CHECK(kernel3d_dz(1.0, 0.5, 1.3, 0.5) == 0.0);
  // z > z' gives a negative derivative.
  CHECK(kernel3d_dz(1.0, 0.5, 1.0, 0.0) < 0.0);
  const double a = kernel3d_dz(1.0, 0.7, 1.2, 0.2);
  const double b = kernel3d_dz(1.0, 0.7, 1.2, 1.2);  // z' -> 2z - z'
  CHECK(a == doctest::Approx(-b).epsilon(1e-11));
}

TEST_CASE("derivative kernels agree with their quadrature oracles") {
  const double dz = kernel3d_dz(1.0, 0.5, 1.3, -0.2);
  CHECK(dz == doctest::Approx(kernel3d_dz_theta_quad(1.0, 0.5, 1.3, -0.2))
                  .epsilon(1e-10));
  const double dr = kernel3d_dr(1.0, 0.0, 1.5, 0.2);
  CHECK(dr == doctest::Approx(kernel3d_dr_theta_quad(1.0, 0.0, 1.5, 0.2))
                  .epsilon(1e-10));
}

TEST_CASE("far-field decay of the radial derivative") {
  double prev = 1e300;
  for (double sep : {3.0, 6.0, 12.0}) {
    const double v = std::abs(kernel3d_dr(1.0, sep, 1.0, 0.0));
    CHECK(v < prev);
    prev = v;
  }
}
