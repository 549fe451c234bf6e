/// @file
/// Checks for the 1D adaptive quadrature and the half-plane cell cubature.

#include "doctest.h"
#include "vortexdom/quadrature.hpp"

#include <cmath>

using namespace vortexdom;

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int n : {4, 8, 12, 16}) {
    const GLRule& g = gl_rule(n);
    // x^(2n-2) is the highest even power integrated exactly.
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      acc += g.w[i] * std::pow(g.x[i], 2 * n - 2);
    CHECK(acc == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-12));
    double mass = 0.0;
    for (int i = 0; i < n; ++i) mass += g.w[i];
    CHECK(mass == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("adaptive quadrature on smooth and singular integrands") {
  const double a = adaptive_quad([](double x) { return std::sin(x); }, 0.0,
                                 M_PI, 1e-12);
  CHECK(a == doctest::Approx(2.0).epsilon(1e-12));

  const double b = adaptive_quad([](double x) { return std::log(x); }, 0.0,
                                 1.0, 1e-11);
  CHECK(b == doctest::Approx(-1.0).epsilon(1e-9));

  const double c = adaptive_quad(
      [](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10);
  CHECK(c == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("polar cell geometry") {
  const QuadCell c = QuadCell::polar({1.0, 2.0}, 0.0, 0.5, 0.0, 2.0 * M_PI);
  const Box b = c.bbox();
  CHECK(b.x0 == doctest::Approx(0.5));
  CHECK(b.x1 == doctest::Approx(1.5));
  CHECK(b.y0 == doctest::Approx(1.5));
  CHECK(b.y1 == doctest::Approx(2.5));
  double u, v;
  CHECK(c.param_of({1.2, 2.0}, u, v));
  CHECK(u == doctest::Approx(0.2));
  CHECK_FALSE(c.param_of({2.0, 2.0}, u, v));
}

TEST_CASE("cell cubature: areas") {
  CubatureOptions opt;
  auto one = [](const Vec2&) { return 1.0; };
  const std::vector<QuadCell> rect = {QuadCell::rect(0.0, 2.0, -1.0, 1.0)};
  CHECK(integrate_cells(rect, one, nullptr, opt) ==
        doctest::Approx(4.0).epsilon(1e-13));
  const std::vector<QuadCell> half_disk = {
      QuadCell::polar({0.0, 0.0}, 0.0, 1.0, 0.0, M_PI)};
  CHECK(integrate_cells(half_disk, one, nullptr, opt) ==
        doctest::Approx(M_PI / 2).epsilon(1e-12));
}

TEST_CASE("cell cubature resolves a Gaussian") {
  CubatureOptions opt;
  const double sigma = 0.05;
  std::vector<QuadCell> cells;
  const int n = 12;
  const double c = 8.1 * sigma;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      cells.push_back(QuadCell::rect(-c + 2 * c * i / n, -c + 2 * c * (i + 1) / n,
                                     -c + 2 * c * j / n, -c + 2 * c * (j + 1) / n));
  auto g = [sigma](const Vec2& p) {
    return std::exp(-0.5 * (p.x * p.x + p.y * p.y) / (sigma * sigma));
  };
  CHECK(integrate_cells(cells, g, nullptr, opt) ==
        doctest::Approx(2.0 * M_PI * sigma * sigma).epsilon(1e-10));
}

TEST_CASE("singular integrands via Duffy subdivision") {
  CubatureOptions opt;
  const Vec2 p{0.2, -0.1};
  const std::vector<QuadCell> disk = {
      QuadCell::polar(p, 0.0, 1.0, 0.0, 2.0 * M_PI)};

  // Integral of 1/|y - p| over the unit disk centered at p equals 2 pi.
  auto inv = [&p](const Vec2& y) { return 1.0 / dist(y, p); };
  CHECK(integrate_cells(disk, inv, &p, opt) ==
        doctest::Approx(2.0 * M_PI).epsilon(1e-10));

  // Integral of log|y - p| over the same disk equals -pi/2.
  auto lg = [&p](const Vec2& y) { return std::log(dist(y, p)); };
  CHECK(integrate_cells(disk, lg, &p, opt) ==
        doctest::Approx(-M_PI / 2).epsilon(1e-8));
}

TEST_CASE("singular point interior to a rect cell") {
  CubatureOptions opt;
  const Vec2 p{0.37, 0.21};
  const std::vector<QuadCell> sq = {QuadCell::rect(-1.0, 1.0, -1.0, 1.0)};
  auto inv = [&p](const Vec2& y) { return 1.0 / dist(y, p); };
  // Reference computed by splitting into four corner rectangles around p and
  // using the closed form for int 1/rho over a rectangle with a corner at
  // the singularity: a*asinh(b/a) + b*asinh(a/b).
  auto corner = [](double a, double b) {
    return a * std::asinh(b / a) + b * std::asinh(a / b);
  };
  const double ref = corner(1.0 - p.x, 1.0 - p.y) + corner(1.0 + p.x, 1.0 - p.y) +
                     corner(1.0 - p.x, 1.0 + p.y) + corner(1.0 + p.x, 1.0 + p.y);
  CHECK(integrate_cells(sq, inv, &p, opt) ==
        doctest::Approx(ref).epsilon(1e-11));
}

TEST_CASE("refinement toward a near-cell singularity") {
  CubatureOptions opt;
  const std::vector<QuadCell> sq = {QuadCell::rect(0.0, 1.0, 0.0, 1.0)};
  const Vec2 p{-0.001, 0.5};  // just outside the cell
  auto inv = [&p](const Vec2& y) { return 1.0 / dist(y, p); };
  const double coarse = integrate_cells(sq, inv, nullptr, opt);
  const double refined = integrate_cells(sq, inv, &p, opt);
  // Reference from dense adaptive 1D integration in x of the closed-form
  // y-integral: int dy 1/sqrt(dx^2+dy^2) = asinh((1-p.y)/dx)+asinh(p.y/dx).
  const double ref = adaptive_quad(
      [&p](double x) {
        const double dx = x - p.x;
        return std::asinh((1.0 - p.y) / dx) + std::asinh(p.y / dx);
      },
      0.0, 1.0, 1e-12);
  CHECK(refined == doctest::Approx(ref).epsilon(1e-8));
  CHECK(std::abs(coarse - ref) > std::abs(refined - ref));
}
