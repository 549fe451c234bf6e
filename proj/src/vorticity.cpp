#include "vortexdom/vorticity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vortexdom {

namespace {

constexpr double kPi = 3.14159265358979323846;
// First positive zero of J1 and the Gaussian tail cutoff (relative 1e-14).
constexpr double kJ11 = 3.8317059702075123;
const double kCutFactor = std::sqrt(2.0 * 14.0 * std::log(10.0));  // ~8.0294

// Power-series Bessel functions; ample accuracy for |x| <= 5, which covers
// every Lamb-dipole evaluation (arguments stay below the first J1 zero).
double bessel_j0(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int m = 1; m < 40; ++m) {
    term *= -q / (static_cast<double>(m) * m);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double bessel_j1(double x) {
  const double q = 0.25 * x * x;
  double term = 0.5 * x, sum = term;
  for (int m = 1; m < 40; ++m) {
    term *= -q / (static_cast<double>(m) * (m + 1));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument("VorticitySpec: " + msg);
}

bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

struct LambConsts {
  double k;     // j11 / a
  double c;     // interior amplitude, positive
};

LambConsts lamb_consts(const LambDipole& l) {
  const double k = kJ11 / l.radius;
  const double j0 = bessel_j0(kJ11);  // ~ -0.40276
  return {k, -2.0 * l.speed * k / j0};
}

double gridded_value(const GriddedSpec& g, double u, double v, bool* outside) {
  if (u < g.u0 || u > g.u1 || v < g.v0 || v > g.v1) {
    if (outside) *outside = true;
    return 0.0;
  }
  const double hu = (g.u1 - g.u0) / (g.nu - 1);
  const double hv = (g.v1 - g.v0) / (g.nv - 1);
  int i = std::min(static_cast<int>((u - g.u0) / hu), g.nu - 2);
  int j = std::min(static_cast<int>((v - g.v0) / hv), g.nv - 2);
  i = std::max(i, 0);
  j = std::max(j, 0);
  const double su = (u - (g.u0 + i * hu)) / hu;
  const double sv = (v - (g.v0 + j * hv)) / hv;
  const double f00 = g.values[j * g.nu + i];
  const double f10 = g.values[j * g.nu + i + 1];
  const double f01 = g.values[(j + 1) * g.nu + i];
  const double f11 = g.values[(j + 1) * g.nu + i + 1];
  return (1.0 - su) * (1.0 - sv) * f00 + su * (1.0 - sv) * f10 +
         (1.0 - su) * sv * f01 + su * sv * f11;
}

}  // namespace

VorticitySpec::VorticitySpec(Kind kind) : kind_(std::move(kind)) {
  std::visit(
      [this](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, HillBall>) {
          require(finite_pos(k.amplitude) && finite_pos(k.radius),
                  "HillBall parameters must be positive and finite");
          geom_ = GeometryKind::Ring3D;
        } else if constexpr (std::is_same_v<T, LambDipole>) {
          require(finite_pos(k.radius) && finite_pos(k.speed),
                  "LambDipole parameters must be positive and finite");
          geom_ = GeometryKind::Dipole2D;
        } else if constexpr (std::is_same_v<T, PatchPair>) {
          require(finite_pos(k.strength) && finite_pos(k.center_offset) &&
                      finite_pos(k.patch_radius),
                  "PatchPair parameters must be positive and finite");
          require(k.patch_radius < k.center_offset,
                  "PatchPair requires patch_radius < center_offset");
          geom_ = GeometryKind::Dipole2D;
        } else if constexpr (std::is_same_v<T, GaussianRing>) {
          require(finite_pos(k.circulation) && finite_pos(k.ring_radius) &&
                      finite_pos(k.core_width),
                  "GaussianRing parameters must be positive and finite");
          geom_ = GeometryKind::Ring3D;
        } else if constexpr (std::is_same_v<T, GaussianPair>) {
          require(finite_pos(k.circulation) && finite_pos(k.offset) &&
                      finite_pos(k.core_width),
                  "GaussianPair parameters must be positive and finite");
          geom_ = GeometryKind::Dipole2D;
        } else {
          require(k.nu >= 2 && k.nv >= 2 &&
                      static_cast<int>(k.values.size()) == k.nu * k.nv,
                  "Gridded spec has inconsistent dimensions");
          require(k.u1 > k.u0 && k.v1 > k.v0, "Gridded spec box is empty");
          for (double v : k.values)
            require(std::isfinite(v), "Gridded spec contains non-finite values");
          geom_ = k.geometry;
        }
      },
      kind_);
}

std::string VorticitySpec::kind_name() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, HillBall>) return "hill_ball";
        else if constexpr (std::is_same_v<T, LambDipole>) return "lamb_dipole";
        else if constexpr (std::is_same_v<T, PatchPair>) return "patch_pair";
        else if constexpr (std::is_same_v<T, GaussianRing>) return "gaussian_ring";
        else if constexpr (std::is_same_v<T, GaussianPair>) return "gaussian_pair";
        else return "gridded";
      },
      kind_);
}

double VorticitySpec::evaluate(const Vec2& p) const {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, HillBall>) {
          if (p.y < 0.0) return 0.0;
          return (p.x * p.x + p.y * p.y < k.radius * k.radius) ? k.amplitude
                                                               : 0.0;
        } else if constexpr (std::is_same_v<T, LambDipole>) {
          if (p.y < 0.0) {
            const double v = evaluate({p.x, -p.y});
            return v == 0.0 ? 0.0 : -v;
          }
          const double rho2 = p.x * p.x + p.y * p.y;
          if (rho2 >= k.radius * k.radius || p.y == 0.0 || rho2 == 0.0)
            return 0.0;
          const double rho = std::sqrt(rho2);
          const LambConsts lc = lamb_consts(k);
          return lc.c * bessel_j1(lc.k * rho) * (p.y / rho);
        } else if constexpr (std::is_same_v<T, PatchPair>) {
          const double dx = p.x;
          const double dup = p.y - k.center_offset;
          const double dlo = p.y + k.center_offset;
          const double e2 = k.patch_radius * k.patch_radius;
          if (dx * dx + dup * dup < e2) return k.strength;
          if (dx * dx + dlo * dlo < e2) return -k.strength;
          return 0.0;
        } else if constexpr (std::is_same_v<T, GaussianRing>) {
          if (p.y < 0.0) return 0.0;
          const double s2 = k.core_width * k.core_width;
          const double dv = p.y - k.ring_radius;
          const double q = p.x * p.x + dv * dv;
          const double cut = kCutFactor * k.core_width;
          if (q >= cut * cut) return 0.0;
          const double n = k.circulation / (2.0 * kPi * s2 * k.ring_radius);
          return n * std::exp(-0.5 * q / s2);
        } else if constexpr (std::is_same_v<T, GaussianPair>) {
          const double s2 = k.core_width * k.core_width;
          const double cut2 = kCutFactor * kCutFactor * s2;
          const double n = k.circulation / (2.0 * kPi * s2);
          const double qu = p.x * p.x + (p.y - k.offset) * (p.y - k.offset);
          const double ql = p.x * p.x + (p.y + k.offset) * (p.y + k.offset);
          const double up = qu < cut2 ? n * std::exp(-0.5 * qu / s2) : 0.0;
          const double lo = ql < cut2 ? n * std::exp(-0.5 * ql / s2) : 0.0;
          return up - lo;
        } else {
          if (geom_ == GeometryKind::Dipole2D && p.y < 0.0 && k.v0 >= 0.0) {
            const double v = gridded_value(k, p.x, -p.y, nullptr);
            return v == 0.0 ? 0.0 : -v;
          }
          return gridded_value(k, p.x, p.y, nullptr);
        }
      },
      kind_);
}

bool VorticitySpec::outside_support(const Vec2& p) const {
  const Vec2 q = geom_ == GeometryKind::Dipole2D && p.y < 0.0
                     ? Vec2{p.x, -p.y}
                     : p;
  if (const auto* g = std::get_if<GriddedSpec>(&kind_)) {
    bool outside = false;
    gridded_value(*g, q.x, q.y, &outside);
    return outside;
  }
  return !support_box().contains(q);
}

Vec2 VorticitySpec::gradient(const Vec2& p) const {
  return std::visit(
      [&](const auto& k) -> Vec2 {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LambDipole>) {
          if (p.y < 0.0) {
            const Vec2 g = gradient({p.x, -p.y});
            return {-g.x, g.y};  // omega odd in x2: d1 flips, d2 is even
          }
          const double rho2 = p.x * p.x + p.y * p.y;
          const LambConsts lc = lamb_consts(k);
          if (rho2 >= k.radius * k.radius) return {0.0, 0.0};
          if (rho2 < 1e-24 * k.radius * k.radius)
            return {0.0, 0.5 * lc.c * lc.k};
          const double rho = std::sqrt(rho2);
          const double x = lc.k * rho;
          const double j1 = bessel_j1(x);
          const double j1p = bessel_j0(x) - j1 / x;
          const double st = p.y / rho, ct = p.x / rho;
          const double dr = lc.c * lc.k * j1p * st;      // d/d rho at fixed angle
          const double dth = lc.c * j1 * ct / rho;       // (1/rho) d/d theta
          return {dr * ct - dth * st, dr * st + dth * ct};
        } else if constexpr (std::is_same_v<T, GaussianRing>) {
          const double v = evaluate(p);
          const double s2 = k.core_width * k.core_width;
          return {-v * p.x / s2, -v * (p.y - k.ring_radius) / s2};
        } else if constexpr (std::is_same_v<T, GaussianPair>) {
          const double s2 = k.core_width * k.core_width;
          const double cut2 = kCutFactor * kCutFactor * s2;
          const double n = k.circulation / (2.0 * kPi * s2);
          Vec2 g{0.0, 0.0};
          const double du = p.y - k.offset, dl = p.y + k.offset;
          const double qu = p.x * p.x + du * du, ql = p.x * p.x + dl * dl;
          if (qu < cut2) {
            const double v = n * std::exp(-0.5 * qu / s2);
            g.x += -v * p.x / s2;
            g.y += -v * du / s2;
          }
          if (ql < cut2) {
            const double v = n * std::exp(-0.5 * ql / s2);
            g.x -= -v * p.x / s2;
            g.y -= -v * dl / s2;
          }
          return g;
        } else if constexpr (std::is_same_v<T, GriddedSpec>) {
          const double h = 1e-5 * std::max(k.u1 - k.u0, k.v1 - k.v0);
          const double fx = (evaluate({p.x + h, p.y}) - evaluate({p.x - h, p.y}));
          const double fy = (evaluate({p.x, p.y + h}) - evaluate({p.x, p.y - h}));
          return {fx / (2.0 * h), fy / (2.0 * h)};
        } else {
          return {0.0, 0.0};  // uniform patches: zero a.e.
        }
      },
      kind_);
}

bool VorticitySpec::smooth_profile() const {
  return std::holds_alternative<LambDipole>(kind_) ||
         std::holds_alternative<GaussianRing>(kind_) ||
         std::holds_alternative<GaussianPair>(kind_);
}

double VorticitySpec::peak() const {
  return std::visit(
      [](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, HillBall>) return k.amplitude;
        else if constexpr (std::is_same_v<T, LambDipole>) {
          const LambConsts lc = lamb_consts(k);
          return lc.c * 0.5818652242632347;  // max of J1
        } else if constexpr (std::is_same_v<T, PatchPair>) return k.strength;
        else if constexpr (std::is_same_v<T, GaussianRing>)
          return k.circulation /
                 (2.0 * kPi * k.core_width * k.core_width * k.ring_radius);
        else if constexpr (std::is_same_v<T, GaussianPair>)
          return k.circulation / (2.0 * kPi * k.core_width * k.core_width);
        else {
          double m = 0.0;
          for (double v : k.values) m = std::max(m, std::abs(v));
          return m;
        }
      },
      kind_);
}

Box VorticitySpec::support_box() const {
  return std::visit(
      [](const auto& k) -> Box {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, HillBall>)
          return {-k.radius, k.radius, 0.0, k.radius};
        else if constexpr (std::is_same_v<T, LambDipole>)
          return {-k.radius, k.radius, 0.0, k.radius};
        else if constexpr (std::is_same_v<T, PatchPair>)
          return {-k.patch_radius, k.patch_radius,
                  k.center_offset - k.patch_radius,
                  k.center_offset + k.patch_radius};
        else if constexpr (std::is_same_v<T, GaussianRing>) {
          const double c = kCutFactor * k.core_width;
          return {-c, c, std::max(0.0, k.ring_radius - c), k.ring_radius + c};
        } else if constexpr (std::is_same_v<T, GaussianPair>) {
          const double c = kCutFactor * k.core_width;
          return {-c, c, std::max(0.0, k.offset - c), k.offset + c};
        } else {
          return {k.u0, k.u1, k.v0, k.v1};
        }
      },
      kind_);
}

double VorticitySpec::support_scale() const {
  const Box b = support_box();
  double m = 0.0;
  for (double x : {b.x0, b.x1})
    for (double y : {b.y0, b.y1}) m = std::max(m, std::hypot(x, y));
  return m;
}

std::vector<QuadCell> VorticitySpec::cells() const {
  return std::visit(
      [this](const auto& k) -> std::vector<QuadCell> {
        using T = std::decay_t<decltype(k)>;
        std::vector<QuadCell> out;
        if constexpr (std::is_same_v<T, HillBall> ||
                      std::is_same_v<T, LambDipole>) {
          out.push_back(QuadCell::polar({0.0, 0.0}, 0.0, k.radius, 0.0, kPi));
        } else if constexpr (std::is_same_v<T, PatchPair>) {
          out.push_back(QuadCell::polar({0.0, k.center_offset}, 0.0,
                                        k.patch_radius, 0.0, 2.0 * kPi));
        } else if constexpr (std::is_same_v<T, GaussianRing> ||
                             std::is_same_v<T, GaussianPair>) {
          const Box b = support_box();
          const double h_target = 1.5 * k.core_width;
          const int nu = std::clamp(
              static_cast<int>(std::ceil(b.width() / h_target)), 4, 24);
          const int nv = std::clamp(
              static_cast<int>(std::ceil(b.height() / h_target)), 4, 24);
          for (int j = 0; j < nv; ++j)
            for (int i = 0; i < nu; ++i)
              out.push_back(QuadCell::rect(
                  b.x0 + b.width() * i / nu, b.x0 + b.width() * (i + 1) / nu,
                  b.y0 + b.height() * j / nv,
                  b.y0 + b.height() * (j + 1) / nv));
        } else {
          // Blocks aligned to grid lines so the bilinear kinks sit on cell
          // boundaries (up to the blocking factor).
          const int bu = std::max(1, (k.nu - 1) / 12);
          const int bv = std::max(1, (k.nv - 1) / 12);
          const double hu = (k.u1 - k.u0) / (k.nu - 1);
          const double hv = (k.v1 - k.v0) / (k.nv - 1);
          for (int j = 0; j < k.nv - 1; j += bv)
            for (int i = 0; i < k.nu - 1; i += bu)
              out.push_back(QuadCell::rect(
                  k.u0 + i * hu, k.u0 + std::min(i + bu, k.nu - 1) * hu,
                  k.v0 + j * hv, k.v0 + std::min(j + bv, k.nv - 1) * hv));
        }
        return out;
      },
      kind_);
}

double VorticitySpec::core_measure() const {
  return std::visit(
      [this](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, HillBall>)
          return 4.0 * kPi * k.radius * k.radius * k.radius / 3.0;
        else if constexpr (std::is_same_v<T, LambDipole>)
          return kPi * k.radius * k.radius;
        else if constexpr (std::is_same_v<T, PatchPair>)
          return 2.0 * kPi * k.patch_radius * k.patch_radius;
        else if constexpr (std::is_same_v<T, GaussianRing>) {
          const double c = kCutFactor * k.core_width;
          return 2.0 * kPi * kPi * k.ring_radius * c * c;
        } else if constexpr (std::is_same_v<T, GaussianPair>) {
          const double c = kCutFactor * k.core_width;
          return 2.0 * kPi * c * c;
        } else {
          // Grid-cell counting of the nonzero region.
          const double hu = (k.u1 - k.u0) / (k.nu - 1);
          const double hv = (k.v1 - k.v0) / (k.nv - 1);
          double acc = 0.0;
          for (int j = 0; j + 1 < k.nv; ++j)
            for (int i = 0; i + 1 < k.nu; ++i) {
              int on = 0;
              for (int dj = 0; dj < 2; ++dj)
                for (int di = 0; di < 2; ++di)
                  if (k.values[(j + dj) * k.nu + i + di] != 0.0) ++on;
              if (on == 0) continue;
              const double frac = on / 4.0;
              const double r_mid = k.v0 + (j + 0.5) * hv;
              if (geom_ == GeometryKind::Ring3D)
                acc += frac * hu * hv * 2.0 * kPi * r_mid;
              else
                acc += frac * hu * hv * 2.0;  // doubled across the axis
            }
          return acc;
        }
      },
      kind_);
}

std::vector<Vec2> VorticitySpec::core_boundary(int n) const {
  std::vector<Vec2> out;
  if (const auto* h = std::get_if<HillBall>(&kind_)) {
    for (int i = 0; i < n; ++i) {
      const double t = kPi * (i + 0.5) / n;
      out.push_back({h->radius * std::cos(t), h->radius * std::sin(t)});
    }
  } else if (const auto* l = std::get_if<LambDipole>(&kind_)) {
    for (int i = 0; i < n; ++i) {
      const double t = kPi * (i + 0.5) / n;
      out.push_back({l->radius * std::cos(t), l->radius * std::sin(t)});
    }
  } else if (const auto* p = std::get_if<PatchPair>(&kind_)) {
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * kPi * i / n;
      out.push_back({p->patch_radius * std::cos(t),
                     p->center_offset + p->patch_radius * std::sin(t)});
    }
  }
  return out;
}

SteinerReport check_steiner(const VorticitySpec& spec, int n) {
  const Box b = spec.support_box();
  const double peak = spec.peak();
  const double umax = std::max(std::abs(b.x0), std::abs(b.x1));
  double violation = 0.0;
  for (int j = 0; j < n; ++j) {
    const double v = b.y0 + (b.y1 - b.y0) * (j + 0.5) / n;
    double prev = spec.evaluate({0.0, v});
    for (int i = 1; i <= n; ++i) {
      const double u = umax * i / n;
      const double cur = spec.evaluate({u, v});
      violation = std::max(violation, cur - prev);  // increase away from axis
      violation = std::max(violation, std::abs(cur - spec.evaluate({-u, v})));
      prev = cur;
    }
  }
  return {violation <= 1e-12 * std::max(peak, 1e-300), violation};
}

TravelingVortex::TravelingVortex(VorticitySpec v, double w)
    : vorticity(std::move(v)), speed(w) {
  if (!finite_pos(w))
    throw std::invalid_argument("TravelingVortex: speed must be positive");
}

nlohmann::ordered_json VorticitySpec::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind_name();
  std::visit(
      [&j](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, HillBall>) {
          j["amplitude"] = k.amplitude;
          j["radius"] = k.radius;
        } else if constexpr (std::is_same_v<T, LambDipole>) {
          j["radius"] = k.radius;
          j["speed"] = k.speed;
        } else if constexpr (std::is_same_v<T, PatchPair>) {
          j["strength"] = k.strength;
          j["center_offset"] = k.center_offset;
          j["patch_radius"] = k.patch_radius;
        } else if constexpr (std::is_same_v<T, GaussianRing>) {
          j["circulation"] = k.circulation;
          j["ring_radius"] = k.ring_radius;
          j["core_width"] = k.core_width;
        } else if constexpr (std::is_same_v<T, GaussianPair>) {
          j["circulation"] = k.circulation;
          j["offset"] = k.offset;
          j["core_width"] = k.core_width;
        } else {
          j["csv"] = k.source_path;
        }
      },
      kind_);
  j["geometry"] = to_string(geom_);
  return j;
}

VorticitySpec VorticitySpec::from_json(const nlohmann::json& j,
                                       const std::string& base_dir) {
  const std::string kind = j.at("kind").get<std::string>();
  auto num = [&j](const char* key) { return j.at(key).get<double>(); };
  if (kind == "hill_ball")
    return VorticitySpec(HillBall{num("amplitude"), num("radius")});
  if (kind == "lamb_dipole")
    return VorticitySpec(LambDipole{num("radius"), num("speed")});
  if (kind == "patch_pair")
    return VorticitySpec(PatchPair{num("strength"), num("center_offset"),
                                   num("patch_radius")});
  if (kind == "gaussian_ring")
    return VorticitySpec(GaussianRing{num("circulation"), num("ring_radius"),
                                      num("core_width")});
  if (kind == "gaussian_pair")
    return VorticitySpec(GaussianPair{num("circulation"), num("offset"),
                                      num("core_width")});
  if (kind == "gridded") {
    const std::string geom_s = j.at("geometry").get<std::string>();
    const GeometryKind geom = geom_s == "dipole" ? GeometryKind::Dipole2D
                                                 : GeometryKind::Ring3D;
    std::string path = j.at("csv").get<std::string>();
    if (!base_dir.empty() && !path.empty() && path[0] != '/')
      path = base_dir + "/" + path;
    return VorticitySpec(load_gridded_csv(path, geom));
  }
  throw std::invalid_argument("VorticitySpec: unknown kind '" + kind + "'");
}

GriddedSpec load_gridded_csv(const std::string& path, GeometryKind geometry) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open gridded CSV: " + path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::array<double, 3>> rows;
  std::set<double> us, vs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::array<double, 3> row{};
    char comma;
    if (!(ss >> row[0] >> comma >> row[1] >> comma >> row[2]))
      throw std::runtime_error("malformed row in gridded CSV: " + path);
    rows.push_back(row);
    us.insert(row[0]);
    vs.insert(row[1]);
  }
  GriddedSpec g;
  g.nu = static_cast<int>(us.size());
  g.nv = static_cast<int>(vs.size());
  g.geometry = geometry;
  g.source_path = path;
  if (g.nu < 2 || g.nv < 2 ||
      static_cast<int>(rows.size()) != g.nu * g.nv)
    throw std::runtime_error("gridded CSV is not a full rectangular grid: " +
                             path);
  g.u0 = *us.begin();
  g.u1 = *us.rbegin();
  g.v0 = *vs.begin();
  g.v1 = *vs.rbegin();
  g.values.assign(g.nu * g.nv, 0.0);
  const double hu = (g.u1 - g.u0) / (g.nu - 1);
  const double hv = (g.v1 - g.v0) / (g.nv - 1);
  for (const auto& row : rows) {
    const int i = static_cast<int>(std::lround((row[0] - g.u0) / hu));
    const int j = static_cast<int>(std::lround((row[1] - g.v0) / hv));
    g.values[j * g.nu + i] = row[2];
  }
  return g;
}

void save_gridded_csv(const GriddedSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write gridded CSV: " + path);
  out.precision(17);
  out << "z,r,value\n";
  const double hu = (spec.u1 - spec.u0) / (spec.nu - 1);
  const double hv = (spec.v1 - spec.v0) / (spec.nv - 1);
  for (int j = 0; j < spec.nv; ++j)
    for (int i = 0; i < spec.nu; ++i)
      out << spec.u0 + i * hu << ',' << spec.v0 + j * hv << ','
          << spec.values[j * spec.nu + i] << '\n';
}

}  // namespace vortexdom
