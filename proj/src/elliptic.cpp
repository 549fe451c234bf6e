#include "vortexdom/elliptic.hpp"

#include <cmath>

namespace vortexdom {

namespace {

// AGM iteration with b0 = sqrt(mc). K = pi / (2 * agm), E from the c_n sums.
EllipticKE agm_ke(double mc) {
  const double pi = 3.14159265358979323846;
  double a = 1.0;
  double b = std::sqrt(mc);
  double c2 = 1.0 - mc;  // c_0^2 = m
  double sum = 0.5 * c2;
  double pow2 = 0.5;
  for (int n = 0; n < 64; ++n) {
    const double c = 0.5 * (a - b);
    if (!(std::abs(c) > 1e-17 * a) && n > 0) break;
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    a = an;
    b = bn;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  EllipticKE out;
  out.K = pi / (2.0 * a);
  out.E = out.K * (1.0 - sum);
  return out;
}

}  // namespace

EllipticKE complete_elliptic_ke(double m) {
  if (!(m >= 0.0 && m < 1.0)) {
    throw std::domain_error("complete_elliptic_ke: parameter m must be in [0,1)");
  }
  return agm_ke(1.0 - m);
}

EllipticKE complete_elliptic_ke_c(double mc) {
  if (!(mc > 0.0 && mc <= 1.0)) {
    throw std::domain_error(
        "complete_elliptic_ke_c: complementary parameter must be in (0,1]");
  }
  return agm_ke(mc);
}

}  // namespace vortexdom
