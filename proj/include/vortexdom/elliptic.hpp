#pragma once

#include <stdexcept>

namespace vortexdom {

struct EllipticKE {
  double K = 0.0;
  double E = 0.0;
};

/// Complete elliptic integrals K(m), E(m) for the parameter m = k^2 in [0, 1),
/// evaluated by the arithmetic-geometric mean iteration to ~1e-15 relative.
/// Throws std::domain_error for m outside [0, 1).
EllipticKE complete_elliptic_ke(double m);

/// Same integrals parameterized by the complementary parameter mc = 1 - m.
/// Accepts any mc in (0, 1]; stable when m is close to 1 (mc tiny), which is
/// where forming 1 - m in the caller would lose all precision.
EllipticKE complete_elliptic_ke_c(double mc);

}  // namespace vortexdom
