#include "vortexdom/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "vortexdom/elliptic.hpp"
#include "vortexdom/quadrature.hpp"

namespace vortexdom {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPiInv = 0.15915494309189533577;

// F(k) = ((2 - k^2) K(k) - 2 E(k)) / k with m = k^2. The leading terms of K
// and E cancel, so for small m the direct form loses precision; a Maclaurin
// series in m is used there instead.
//   F  = (pi/2) k^3 (1/8 + 3m/32 + 75m^2/1024 + 245m^3/4096 + 6615m^4/131072)
//   F' = (pi/2) m   (3/8 + 15m/32 + 525m^2/1024 + 2205m^3/4096 + 72765m^4/131072)
constexpr double kSmallM = 1e-3;

void f_and_fp(double m, double mc, double& F, double& Fp) {
  const double k = std::sqrt(m);
  if (m < kSmallM) {
    const double s = 1.0 / 8.0 +
                     m * (3.0 / 32.0 +
                          m * (75.0 / 1024.0 +
                               m * (245.0 / 4096.0 + m * (6615.0 / 131072.0))));
    const double sp = 3.0 / 8.0 +
                      m * (15.0 / 32.0 +
                           m * (525.0 / 1024.0 +
                                m * (2205.0 / 4096.0 +
                                     m * (72765.0 / 131072.0))));
    F = 0.5 * kPi * k * m * s;
    Fp = 0.5 * kPi * m * sp;
    return;
  }
  const EllipticKE ke = complete_elliptic_ke_c(mc);
  F = ((2.0 - m) * ke.K - 2.0 * ke.E) / k;
  Fp = ((2.0 - m) * ke.E / mc - 2.0 * ke.K) / m;
}

struct Reduced {
  double pre;   // sqrt(r r') / 2pi
  double S;     // (r + r')^2 + (z - z')^2
  double m;     // k^2 = 4 r r' / S
  double mc;    // 1 - m = ((r - r')^2 + (z - z')^2) / S, formed exactly
  double k;
  double zeta;  // z - z'
  double dist2;
};

Reduced reduce(double r, double z, double rp, double zp) {
  if (r < 0.0 || rp <= 0.0) {
    throw std::domain_error("kernel3d: radii must satisfy r >= 0, r' > 0");
  }
  Reduced q;
  q.zeta = z - zp;
  const double dr = r - rp;
  q.dist2 = dr * dr + q.zeta * q.zeta;
  if (q.dist2 == 0.0) throw std::domain_error("kernel singularity");
  const double sum = r + rp;
  q.S = sum * sum + q.zeta * q.zeta;
  q.m = 4.0 * r * rp / q.S;
  q.mc = q.dist2 / q.S;
  q.k = std::sqrt(q.m);
  q.pre = std::sqrt(r * rp) * kTwoPiInv;
  return q;
}

// The complementary parameter mc = dist^2 / S is formed exactly, so the
// elliptic path stays accurate essentially down to the diagonal; the angular
// quadrature fallback only guards the last digits before the singularity.
bool near_diagonal(double r, double rp, double dist2) {
  const double thr = 1e-12 * (r + rp);
  return dist2 < thr * thr;
}

double theta_quad_scaled(const std::function<double(double)>& f,
                         double rel_tol) {
  const double rough = adaptive_quad(f, 0.0, kPi, 1e-300, 1e-6, 30);
  const double scale = std::max(std::abs(rough), 1e-30);
  return adaptive_quad(f, 0.0, kPi, rel_tol * scale, rel_tol, 48);
}

}  // namespace

double kernel2d(const Vec2& x, const Vec2& y) {
  if (!(y.y > 0.0)) {
    throw std::domain_error("kernel2d: source must lie in the upper half-plane");
  }
  const double dx = x.x - y.x;
  const double dm = x.y - y.y;  // x - y
  const double dp = x.y + y.y;  // x - y*
  const double q0 = dx * dx + dm * dm;
  const double q1 = dx * dx + dp * dp;
  if (q0 == 0.0 || q1 == 0.0) throw std::domain_error("kernel singularity");
  return 0.5 * kTwoPiInv * (std::log(q1) - std::log(q0));
}

Vec2 kernel2d_grad(const Vec2& x, const Vec2& y) {
  if (!(y.y > 0.0)) {
    throw std::domain_error("kernel2d: source must lie in the upper half-plane");
  }
  const double dx = x.x - y.x;
  const double dm = x.y - y.y;
  const double dp = x.y + y.y;
  const double q0 = dx * dx + dm * dm;
  const double q1 = dx * dx + dp * dp;
  if (q0 == 0.0 || q1 == 0.0) throw std::domain_error("kernel singularity");
  return {kTwoPiInv * (dx / q1 - dx / q0),
          kTwoPiInv * (dp / q1 - dm / q0)};
}

KernelValue kernel3d(double r, double z, double rp, double zp) {
  if (r == 0.0) {
    if (rp <= 0.0) throw std::domain_error("kernel3d: r' must be positive");
    return {0.0, true, 0.0};
  }
  const Reduced q = reduce(r, z, rp, zp);
  if (near_diagonal(r, rp, q.dist2)) {
    const double v = kernel3d_theta_quad(r, z, rp, zp, 1e-12);
    return {v, false, 1e-11 * std::abs(v)};
  }
  double F, Fp;
  f_and_fp(q.m, q.mc, F, Fp);
  const double v = q.pre * F;
  return {v, true, 5e-14 * std::abs(v)};
}

void kernel3d_all(double r, double z, double rp, double zp, double out[3]) {
  if (r == 0.0) {
    if (rp <= 0.0) throw std::domain_error("kernel3d: r' must be positive");
    out[0] = out[1] = out[2] = 0.0;
    return;
  }
  const Reduced q = reduce(r, z, rp, zp);
  if (near_diagonal(r, rp, q.dist2)) {
    out[0] = kernel3d_theta_quad(r, z, rp, zp, 1e-12);
    out[1] = kernel3d_dz_theta_quad(r, z, rp, zp, 1e-12);
    out[2] = kernel3d_dr_theta_quad(r, z, rp, zp, 1e-12);
    return;
  }
  double F, Fp;
  f_and_fp(q.m, q.mc, F, Fp);
  const double dkdz = -q.k * q.zeta / q.S;
  const double dkdr = q.k * (0.5 / r - (r + rp) / q.S);
  out[0] = q.pre * F;
  out[1] = q.pre * Fp * dkdz;
  out[2] = q.pre * (0.5 * F / r + Fp * dkdr);
}

double kernel3d_dz(double r, double z, double rp, double zp) {
  double out[3];
  kernel3d_all(r, z, rp, zp, out);
  return out[1];
}

double kernel3d_dr(double r, double z, double rp, double zp) {
  if (!(r > 0.0)) {
    throw std::domain_error("kernel3d_dr: requires r > 0");
  }
  double out[3];
  kernel3d_all(r, z, rp, zp, out);
  return out[2];
}

namespace {

// r^2 + r'^2 + zeta^2 - 2 r r' cos t computed without cancellation:
// (r - r')^2 + zeta^2 + 4 r r' sin^2(t/2). Near the diagonal the naive form
// loses the leading digits and puts a noise floor above tight tolerances.
double denom_stable(double dist2, double rrp, double t) {
  const double s = std::sin(0.5 * t);
  return dist2 + 4.0 * rrp * s * s;
}

}  // namespace

double kernel3d_theta_quad(double r, double z, double rp, double zp,
                           double rel_tol) {
  if (r == 0.0) return 0.0;
  const double zeta = z - zp;
  const double dr = r - rp;
  const double dist2 = dr * dr + zeta * zeta;
  const double rrp = r * rp;
  auto f = [&](double t) {
    return std::cos(t) / std::sqrt(denom_stable(dist2, rrp, t));
  };
  return r * rp * kTwoPiInv * theta_quad_scaled(f, rel_tol);
}

double kernel3d_dz_theta_quad(double r, double z, double rp, double zp,
                              double rel_tol) {
  if (r == 0.0) return 0.0;
  const double zeta = z - zp;
  const double dr = r - rp;
  const double dist2 = dr * dr + zeta * zeta;
  const double rrp = r * rp;
  auto f = [&](double t) {
    const double d = denom_stable(dist2, rrp, t);
    return std::cos(t) / (d * std::sqrt(d));
  };
  return -zeta * r * rp * kTwoPiInv * theta_quad_scaled(f, rel_tol);
}

double kernel3d_dr_theta_quad(double r, double z, double rp, double zp,
                              double rel_tol) {
  const double zeta = z - zp;
  const double dr = r - rp;
  const double dist2 = dr * dr + zeta * zeta;
  const double rrp = r * rp;
  auto f = [&](double t) {
    const double c = std::cos(t);
    const double s = std::sin(0.5 * t);
    const double d = denom_stable(dist2, rrp, t);
    const double sd = std::sqrt(d);
    // r - r' cos t = (r - r') + 2 r' sin^2(t/2), again cancellation-free.
    const double rm = dr + 2.0 * rp * s * s;
    return c * (1.0 / sd - r * rm / (d * sd));
  };
  return rp * kTwoPiInv * theta_quad_scaled(f, rel_tol);
}

}  // namespace vortexdom
