#include "vortexdom/domain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vortexdom/errors.hpp"
#include "vortexdom/parallel.hpp"

namespace vortexdom {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSteadinessThreshold = 0.05;
constexpr double kAtmosphereEmpty = 0.01;

// Illinois variant of regula falsi on a bracketing interval. Field
// evaluations behind f are full cubatures, so superlinear convergence
// matters; the bracket never widens and a periodic bisection step guards
// against stalls.
template <typename F>
double illinois_root(const F& f, double lo, double hi, double flo, double fhi,
                     double tol) {
  int side = 0, iter = 0;
  while (hi - lo > tol) {
    double mid = lo + (hi - lo) * flo / (flo - fhi);
    if (++iter % 4 == 0 || !(mid > lo) || !(mid < hi))
      mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = mid;
      fhi = fm;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string to_string(Topology t) {
  switch (t) {
    case Topology::Oval2D: return "oval";
    case Topology::Spheroid: return "spheroid";
    case Topology::Lemniscate: return "lemniscate";
    case Topology::Toroid: return "toroid";
  }
  return "?";
}

std::string to_string(CaseTag c) {
  switch (c) {
    case CaseTag::Dipole: return "dipole";
    case CaseTag::CaseI: return "case_I";
    case CaseTag::CaseII: return "case_II";
  }
  return "?";
}

DomainExtractor::DomainExtractor(const StreamSolver& solver)
    : solver_(solver) {}

double DomainExtractor::phi_axis(double s) const {
  return solver_.relative_stream({0.0, s});
}

double DomainExtractor::axial_speed_at(double s) const {
  return solver_.velocity({0.0, s}).x;
}

std::pair<double, double> DomainExtractor::core_axis_interval() const {
  const VorticitySpec& spec = solver_.vortex().vorticity;
  const Box box = spec.support_box();
  const double s_max = 1.05 * box.y1 + 1e-12;
  const int n = 4096;
  auto value = [&spec](double s) { return spec.evaluate({0.0, s}); };

  // Contiguous runs of positive samples along the transverse axis.
  std::vector<std::pair<int, int>> runs;
  bool in_run = false;
  for (int i = 1; i <= n; ++i) {
    const bool pos = value(s_max * i / n) > 0.0;
    if (pos && !in_run) {
      runs.emplace_back(i, i);
      in_run = true;
    } else if (pos) {
      runs.back().second = i;
    } else {
      in_run = false;
    }
  }
  if (runs.size() != 1) {
    std::ostringstream msg;
    msg << "core not simply connected on axis: " << runs.size()
        << " positive intervals found in (0, " << s_max << "]";
    throw precondition_error(msg.str());
  }

  const double tol = 1e-8 * std::max(solver_.scale(), 1.0);
  auto bisect_edge = [&](double lo, double hi, bool pos_at_hi) {
    // Exactly one endpoint evaluates positive (pos_at_hi says which).
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      const bool pos = value(mid) > 0.0;
      if (pos == pos_at_hi) hi = mid;
      else lo = mid;
    }
    return 0.5 * (lo + hi);
  };

  double r1 = 0.0;
  const double first = s_max * runs[0].first / n;
  if (runs[0].first > 1) {
    r1 = bisect_edge(s_max * (runs[0].first - 1) / n, first, true);
  } else if (value(0.5 * tol) <= 0.0) {
    // Positive at the first sample but not at the axis itself: resolve.
    r1 = bisect_edge(0.5 * tol, first, true);
  }
  double r2 = s_max;
  if (runs[0].second < n) {
    r2 = bisect_edge(s_max * runs[0].second / n,
                     s_max * (runs[0].second + 1) / n, false);
  }
  return {r1, r2};
}

std::pair<CaseTag, Topology> DomainExtractor::classify(
    double center_speed) const {
  if (solver_.vortex().vorticity.geometry() == GeometryKind::Dipole2D)
    return {CaseTag::Dipole, Topology::Oval2D};
  const double w = solver_.speed();
  const double eps = 1e-3 * w;
  if (center_speed > w + eps) return {CaseTag::CaseI, Topology::Spheroid};
  if (center_speed < w - eps) return {CaseTag::CaseII, Topology::Toroid};
  return {CaseTag::CaseI, Topology::Lemniscate};
}

double DomainExtractor::find_inner_radius(double r1) const {
  const double w = solver_.speed();
  const double tol = solver_.tolerances().root * std::max(solver_.scale(), 1.0);
  double lo = 1e-6 * r1, hi = r1;
  const double f_lo = axial_speed_at(lo) - w;
  const double f_hi = axial_speed_at(hi) - w;
  if (!(f_lo < 0.0) || !(f_hi >= 0.0)) {
    std::ostringstream msg;
    msg << "inner radius: no sign change of v_axial(0,r) - W on (0, R1];"
        << " profile:";
    for (int i = 0; i <= 8; ++i) {
      const double s = r1 * i / 8.0 + (i == 0 ? lo : 0.0);
      msg << " (" << s << ", " << axial_speed_at(s) - w << ")";
    }
    throw numerical_error(msg.str());
  }
  return illinois_root([&](double r) { return axial_speed_at(r) - w; }, lo,
                       hi, f_lo, f_hi, tol);
}

std::pair<double, double> DomainExtractor::find_level_and_outer_radius(
    CaseTag tag, double l, double r2) const {
  const double gamma = tag == CaseTag::CaseII ? phi_axis(l) : 0.0;
  const double scale = solver_.scale();
  const double tol = solver_.tolerances().root * std::max(scale, 1.0);

  // phi(0, s) - gamma is positive on the core interval and decreases
  // strictly past it, so any sign change beyond r2 brackets the unique root.
  double lo = r2;
  if (!(phi_axis(lo) - gamma > 0.0)) {
    // Cutoff-support profiles can sit essentially at the level already.
    lo = 0.5 * (l > 0.0 ? l + r2 : r2);
  }
  double step = 0.25 * scale;
  double hi = lo + step;
  double f_hi = phi_axis(hi) - gamma;
  while (f_hi > 0.0) {
    lo = hi;
    step *= 2.0;
    hi += step;
    if (hi > 10.0 * scale) {
      throw numerical_error(
          "outer radius escape: phi(0,s) never crosses the level within 10x "
          "the support radius");
    }
    f_hi = phi_axis(hi) - gamma;
  }
  const double root = illinois_root(
      [&](double s) { return phi_axis(s) - gamma; }, lo, hi,
      phi_axis(lo) - gamma, f_hi, tol);
  return {gamma, root};
}

double DomainExtractor::bisect_boundary(double s, double gamma,
                                        double z_hint) const {
  const double tol = solver_.tolerances().root * std::max(solver_.scale(), 1.0);
  auto h = [&](double z) { return solver_.relative_stream({z, s}) - gamma; };
  const double h0 = h(0.0);
  if (!(h0 > 0.0)) return 0.0;  // at or outside the level already
  double hi = z_hint;
  double f_hi = h(hi);
  int expand = 0;
  while (f_hi > 0.0) {
    if (++expand > 5) {
      std::ostringstream msg;
      msg << "boundary bracket failure at s = " << s
          << ": phi stays above the level out to z = " << hi;
      throw numerical_error(msg.str());
    }
    hi *= 2.0;
    f_hi = h(hi);
  }
  // Strict Steiner symmetry: phi decreases away from z = 0, so the root in
  // z >= 0 is unique and the bracket is safe.
  return illinois_root(h, 0.0, hi, h0, f_hi, tol);
}

std::vector<BoundaryPoint> DomainExtractor::boundary_curve(double gamma,
                                                           double inner,
                                                           double outer,
                                                           int n_samples) const {
  const Box box = solver_.vortex().vorticity.support_box();
  const double z_hint = 3.0 * std::max(box.x1, 0.1 * solver_.scale());
  const double mid = 0.5 * (inner + outer), half = 0.5 * (outer - inner);
  std::vector<BoundaryPoint> pts(n_samples);
  parallel_for(n_samples, [&](int j) {
    // Chebyshev nodes cluster near both endpoints, where l -> 0 and the
    // bracket degenerates.
    const double s = mid - half * std::cos(kPi * (j + 0.5) / n_samples);
    pts[j] = {s, bisect_boundary(s, gamma, z_hint)};
  });
  return pts;
}

DomainResult DomainExtractor::extract(int n_boundary) const {
  const TravelingVortex& tv = solver_.vortex();
  const VorticitySpec& spec = tv.vorticity;
  const bool ring = spec.geometry() == GeometryKind::Ring3D;
  DomainResult res;

  // Assumption audit: Steiner symmetry and steadiness. Failures downgrade
  // the report rather than aborting; the classification is still emitted.
  const SteinerReport steiner = check_steiner(spec);
  if (!steiner.is_symmetric) {
    std::ostringstream msg;
    msg << "steiner symmetry violated (max violation " << steiner.max_violation
        << ")";
    res.flags.push_back(msg.str());
    res.assumptions_verified = false;
  }
  const double residual = tv.steadiness_residual
                              ? *tv.steadiness_residual
                              : solver_.steadiness_residual();
  if (!(residual < kSteadinessThreshold)) {
    std::ostringstream msg;
    msg << "steadiness residual " << residual << " above threshold "
        << kSteadinessThreshold;
    res.flags.push_back(msg.str());
    res.assumptions_verified = false;
  }

  std::tie(res.core_r1, res.core_r2) = core_axis_interval();
  res.center_speed = solver_.center_speed();
  std::tie(res.case_tag, res.topology) = classify(res.center_speed);

  res.inner_radius =
      res.case_tag == CaseTag::CaseII ? find_inner_radius(res.core_r1) : 0.0;
  std::tie(res.gamma, res.outer_radius) = find_level_and_outer_radius(
      res.case_tag, res.inner_radius, res.core_r2);
  if (res.case_tag == CaseTag::CaseII && !(res.gamma < 0.0)) {
    res.flags.push_back("case II level gamma is not negative");
    res.assumptions_verified = false;
  }

  res.boundary = boundary_curve(res.gamma, res.inner_radius, res.outer_radius,
                                n_boundary);

  // Axis half-width l(0): Richardson extrapolation from the two innermost
  // samples, cross-checked against the axial stagnation point where the
  // co-moving axial velocity vanishes (v_axial = W in the lab frame).
  if (res.case_tag != CaseTag::CaseII &&
      res.topology != Topology::Lemniscate) {
    const BoundaryPoint& p1 = res.boundary[0];
    const BoundaryPoint& p2 = res.boundary[1];
    res.l0 = std::max(
        0.0, p1.l + (p1.l - p2.l) * p1.s / std::max(p2.s - p1.s, 1e-300));
    if (res.center_speed > solver_.speed()) {
      auto g = [&](double z) {
        return solver_.velocity({z, 0.0}).x - solver_.speed();
      };
      double lo = 0.0, hi = res.outer_radius;
      double g_hi = g(hi);
      int expand = 0;
      while (g_hi > 0.0 && ++expand <= 5) {
        hi *= 2.0;
        g_hi = g(hi);
      }
      if (g_hi <= 0.0) {
        const double tol =
            solver_.tolerances().root * std::max(solver_.scale(), 1.0);
        const double stagnation =
            illinois_root(g, lo, hi, g(lo), g_hi, tol);
        if (std::abs(stagnation - res.l0) > 0.05 * res.outer_radius) {
          std::ostringstream msg;
          msg << "l(0) cross-check mismatch: extrapolated " << res.l0
              << " vs stagnation root " << stagnation;
          res.flags.push_back(msg.str());
        }
      }
    }
  }

  // Measures: trapezoid over the boundary polyline with the exact zero
  // endpoints appended; Case I / dipole curves start from (0, l0).
  std::vector<BoundaryPoint> curve = res.boundary;
  if (res.case_tag == CaseTag::CaseII) {
    curve.insert(curve.begin(), {res.inner_radius, 0.0});
  } else {
    curve.insert(curve.begin(), {0.0, res.l0});
  }
  curve.push_back({res.outer_radius, 0.0});
  double measure = 0.0;
  for (size_t i = 1; i < curve.size(); ++i) {
    const double ds = curve[i].s - curve[i - 1].s;
    if (ring) {
      // Volume of revolution: 2 pi int r * (2 l) dr.
      measure += 2.0 * kPi * ds *
                 (curve[i].s * curve[i].l + curve[i - 1].s * curve[i - 1].l);
    } else {
      // Area: int 2 l dx2 over both signs of x2.
      measure += 2.0 * ds * (curve[i].l + curve[i - 1].l);
    }
  }
  res.domain_measure = measure;
  res.core_measure = spec.core_measure();
  res.atmosphere_measure = res.domain_measure - res.core_measure;
  // An inscribed polyline under-estimates a convex domain by O(1/n^2), so
  // the consistency guard must leave room for that discretization bias.
  const double slack =
      std::max(1e-3, 4.0 / double(curve.size() * curve.size()));
  if (res.atmosphere_measure < -slack * res.core_measure) {
    std::ostringstream msg;
    msg << "internal inconsistency: domain measure " << res.domain_measure
        << " below core measure " << res.core_measure;
    throw numerical_error(msg.str());
  }
  res.atmosphere_measure = std::max(0.0, res.atmosphere_measure);
  res.atmosphere_ratio = res.atmosphere_measure / res.core_measure;

  if (!ring) {
    res.sadovskii = res.core_r1 < 1e-3 * solver_.scale() &&
                    res.atmosphere_ratio < kAtmosphereEmpty;
  }
  return res;
}

nlohmann::ordered_json DomainResult::to_json() const {
  nlohmann::ordered_json j;
  j["topology"] = to_string(topology);
  j["case"] = to_string(case_tag);
  j["center_speed"] = center_speed;
  j["gamma"] = gamma;
  j["inner_radius"] = inner_radius;
  j["outer_radius"] = outer_radius;
  j["core_axis_interval"] = {core_r1, core_r2};
  j["l0"] = l0;
  j["core_measure"] = core_measure;
  j["domain_measure"] = domain_measure;
  j["atmosphere_measure"] = atmosphere_measure;
  j["atmosphere_ratio"] = atmosphere_ratio;
  j["sadovskii"] = sadovskii;
  j["assumptions_verified"] = assumptions_verified;
  j["flags"] = flags;
  nlohmann::ordered_json curve = nlohmann::ordered_json::array();
  for (const auto& p : boundary) curve.push_back({p.s, p.l});
  j["boundary"] = curve;
  return j;
}

void export_boundary_csv(const DomainResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write boundary CSV: " + path);
  out.precision(12);
  out << "s,l\n";
  for (const auto& p : result.boundary) out << p.s << ',' << p.l << '\n';
}

}  // namespace vortexdom
