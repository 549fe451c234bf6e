#include "vortexdom/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "vortexdom/errors.hpp"
#include "vortexdom/parallel.hpp"

namespace vortexdom {

// ---------------------------------------------------------------------------
// CachedField

CachedField::CachedField(const StreamSolver& solver, const Box& box, int nu,
                         int nv)
    : geom_(solver.vortex().vorticity.geometry()),
      speed_(solver.speed()),
      scale_(solver.scale()),
      box_(box),
      nu_(nu),
      nv_(nv) {
  if (nu < 4 || nv < 4)
    throw precondition_error("CachedField: grid must be at least 4 x 4");
  if (box.y0 != 0.0)
    throw precondition_error(
        "CachedField: grid must start at the symmetry axis (y0 = 0)");
  hu_ = box.width() / (nu - 1);
  hv_ = box.height() / (nv - 1);
  grid_.resize(size_t(nu) * nv);
  parallel_for(nu * nv, [&](int idx) {
    const int i = idx % nu, j = idx / nu;
    grid_[idx] = solver.stream({box.x0 + hu_ * i, box.y0 + hv_ * j});
  });
}

double CachedField::at(int i, int j) const {
  // Transverse ghost row below the axis by reflection symmetry.
  if (j < 0) {
    const double v = at(i, -j);
    return geom_ == GeometryKind::Ring3D ? v : -v;
  }
  // One-past-the-edge ghosts by quadratic extrapolation.
  if (j > nv_ - 1)
    return 3.0 * at(i, nv_ - 1) - 3.0 * at(i, nv_ - 2) + at(i, nv_ - 3);
  if (i < 0) return 3.0 * at(0, j) - 3.0 * at(1, j) + at(2, j);
  if (i > nu_ - 1)
    return 3.0 * at(nu_ - 1, j) - 3.0 * at(nu_ - 2, j) + at(nu_ - 3, j);
  return grid_[size_t(j) * nu_ + i];
}

namespace {

// Catmull-Rom value and derivative on [0, 1] through p0..p3 (p1 at 0).
void catmull_rom(const double p[4], double s, double& f, double& df) {
  const double c0 = 2.0 * p[1];
  const double c1 = -p[0] + p[2];
  const double c2 = 2.0 * p[0] - 5.0 * p[1] + 4.0 * p[2] - p[3];
  const double c3 = -p[0] + 3.0 * p[1] - 3.0 * p[2] + p[3];
  f = 0.5 * (c0 + s * (c1 + s * (c2 + s * c3)));
  df = 0.5 * (c1 + s * (2.0 * c2 + s * 3.0 * c3));
}

}  // namespace

void CachedField::eval(const Vec2& p, double& psi, double& du,
                       double& dv) const {
  const double u = (p.x - box_.x0) / hu_;
  const double v = (p.y - box_.y0) / hv_;
  const int ic = std::clamp(int(std::floor(u)), 0, nu_ - 2);
  const int jc = std::clamp(int(std::floor(v)), 0, nv_ - 2);
  const double fu = u - ic, fv = v - jc;
  double rows[4], drows[4];
  for (int j = 0; j < 4; ++j) {
    const double pts[4] = {at(ic - 1, jc - 1 + j), at(ic, jc - 1 + j),
                           at(ic + 1, jc - 1 + j), at(ic + 2, jc - 1 + j)};
    catmull_rom(pts, fu, rows[j], drows[j]);
  }
  double dpsi_dv, tmp;
  catmull_rom(rows, fv, psi, dpsi_dv);
  catmull_rom(drows, fv, du, tmp);
  du /= hu_;
  dv = dpsi_dv / hv_;
}

double CachedField::stream(const Vec2& p) const {
  if (p.y < 0.0) {
    const double v = stream({p.x, -p.y});
    return geom_ == GeometryKind::Ring3D ? v : -v;
  }
  double psi, du, dv;
  eval(p, psi, du, dv);
  return psi;
}

double CachedField::relative_stream(const Vec2& p) const {
  const double s = stream(p);
  return geom_ == GeometryKind::Ring3D ? s - 0.5 * speed_ * p.y * p.y
                                       : s - speed_ * p.y;
}

Vec2 CachedField::velocity(const Vec2& p) const {
  if (p.y < 0.0) {
    // Axial component is even across the axis, transverse is odd.
    const Vec2 v = velocity({p.x, -p.y});
    return {v.x, -v.y};
  }
  if (geom_ == GeometryKind::Dipole2D) {
    double psi, du, dv;
    eval(p, psi, du, dv);
    return {dv, -du};  // u1 = d2 G, u2 = -d1 G
  }
  // Ring: v^z = psi_r / r, v^r = -psi_z / r. The ratio degenerates on the
  // axis itself; evaluate the derivatives a tiny step off instead.
  const double r = std::max(p.y, 1e-6 * scale_);
  double psi, du, dv;
  eval({p.x, r}, psi, du, dv);
  return {dv / r, -du / r};
}

// ---------------------------------------------------------------------------
// Tracer

std::string to_string(TraceVerdict v) {
  switch (v) {
    case TraceVerdict::Bounded:
      return "bounded";
    case TraceVerdict::Escaping:
      return "escaping";
    default:
      return "undecided";
  }
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                 kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0,
                 kB4 = 125.0 / 192.0, kB5 = -2187.0 / 6784.0,
                 kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0,
                 kE4 = 71.0 / 1920.0, kE5 = -17253.0 / 339200.0,
                 kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

// Distance from q to the segment [a, b].
double segment_dist(const Vec2& q, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  if (len2 == 0.0) return dist(q, a);
  const double t =
      std::clamp(((q.x - a.x) * ab.x + (q.y - a.y) * ab.y) / len2, 0.0, 1.0);
  return dist(q, a + ab * t);
}

}  // namespace

StreamlineTrace trace(const FieldProvider& field, const Vec2& seed,
                      TraceOptions opt) {
  const double W = field.speed();
  const double scale = field.scale();
  const Box box = field.valid_box();
  const double horizon = std::abs(opt.horizon);
  const double dir = opt.horizon < 0.0 ? -1.0 : 1.0;
  if (field.geometry() == GeometryKind::Ring3D && seed.y < 0.0)
    throw precondition_error("trace: ring seeds require r >= 0");

  auto rhs = [&](const Vec2& p) -> Vec2 {
    const Vec2 v = field.velocity(p);
    return {dir * (v.x - W), dir * v.y};
  };
  const double phi_norm = std::abs(field.relative_stream(seed)) +
                          std::abs(W) * scale * scale;

  StreamlineTrace tr;
  tr.seed = seed;
  tr.phi_seed = field.relative_stream(seed);
  tr.nodes.push_back({0.0, seed, tr.phi_seed});

  Vec2 p = seed;
  Vec2 k1 = rhs(p);
  const Vec2 w0 = k1;
  double t = 0.0;
  const double speed0 = std::max(k1.norm(), 1e-12 * std::abs(W));
  double h = std::min(1e-3 * scale / speed0, horizon);
  const double h_max_len = 0.05 * scale;  // step-length cap
  const double delta_return = 1e-4 * scale;
  bool armed = false;  // closed-orbit detection armed after leaving the seed
  bool stayed_in = true;
  const double atol = opt.tol * scale;

  while (t < horizon) {
    h = std::min(h, horizon - t);
    // Shrink the step near the seed once armed so the chord resolves the
    // return distance; otherwise a 0.05-scale chord passes delta_return by.
    double max_len = h_max_len;
    if (armed)
      max_len = std::clamp(0.2 * dist(p, seed), delta_return, h_max_len);
    const double len_cap = max_len / std::max(k1.norm(), 1e-300);
    h = std::min(h, len_cap);
    if (!(h > 1e-14 * std::max(scale / std::max(std::abs(W), 1e-300), t))) {
      tr.verdict = TraceVerdict::Undecided;
      tr.diagnostic = "step-size underflow near a stagnation point";
      break;
    }

    const Vec2 k2 = rhs(p + k1 * (h * kA21));
    const Vec2 k3 = rhs(p + k1 * (h * kA31) + k2 * (h * kA32));
    const Vec2 k4 = rhs(p + k1 * (h * kA41) + k2 * (h * kA42) +
                        k3 * (h * kA43));
    const Vec2 k5 = rhs(p + k1 * (h * kA51) + k2 * (h * kA52) +
                        k3 * (h * kA53) + k4 * (h * kA54));
    const Vec2 k6 = rhs(p + k1 * (h * kA61) + k2 * (h * kA62) +
                        k3 * (h * kA63) + k4 * (h * kA64) + k5 * (h * kA65));
    const Vec2 pn = p + (k1 * kB1 + k3 * kB3 + k4 * kB4 + k5 * kB5 +
                         k6 * kB6) * h;
    const Vec2 k7 = rhs(pn);
    const Vec2 err_v = (k1 * kE1 + k3 * kE3 + k4 * kE4 + k5 * kE5 +
                        k6 * kE6 + k7 * kE7) * h;
    const double sx = atol + opt.tol * std::max(std::abs(p.x), std::abs(pn.x));
    const double sy = atol + opt.tol * std::max(std::abs(p.y), std::abs(pn.y));
    const double ex = err_v.x / sx, ey = err_v.y / sy;
    const double err = std::sqrt(0.5 * (ex * ex + ey * ey));

    const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    if (err > 1.0) {
      h *= std::max(0.2, grow);
      continue;  // reject
    }

    t += h;
    const Vec2 p_prev = p;
    p = pn;
    k1 = k7;  // FSAL
    ++tr.steps;
    h *= std::clamp(grow, 0.2, 5.0);

    const double phi = field.relative_stream(p);
    tr.max_phi_drift =
        std::max(tr.max_phi_drift, std::abs(phi - tr.phi_seed) / phi_norm);
    if (opt.record_stride > 0 && tr.steps % opt.record_stride == 0)
      tr.nodes.push_back({dir * t, p, phi});

    if (!box.contains(p)) {
      tr.verdict = TraceVerdict::Undecided;
      tr.diagnostic = "trajectory left the field provider's valid region";
      break;
    }
    const double escape_r = opt.escape_factor * scale;
    if (std::abs(p.x) > escape_r || std::abs(p.y) > escape_r)
      stayed_in = false;
    // Far out, the relative stream is dominated by the frame term, so an
    // escaping trajectory must carry phi < 0 (ring) or phi opposite in sign
    // to x2 (dipole; phi is odd across the axis, zero on it).
    const bool ring = field.geometry() == GeometryKind::Ring3D;
    const bool escape_level =
        ring ? phi < 0.0 : phi * p.y < 0.0 || (p.y == 0.0 && phi == 0.0);
    if (std::abs(p.x) > escape_r && escape_level) {
      tr.verdict = TraceVerdict::Escaping;
      if (ring) {
        if (tr.phi_seed < 0.0)
          tr.escape_asymptote =
              std::sqrt(std::max(0.0, -2.0 * tr.phi_seed / W));
      } else {
        tr.escape_asymptote = -tr.phi_seed / W;
      }
      break;
    }
    // Closed-orbit detection on the step segment: a node rarely lands
    // within delta_return of the seed, but the connecting segment does.
    // Arm only for later steps, so the segment leaving the seed is exempt.
    if (armed && segment_dist(seed, p_prev, p) < delta_return &&
        k1.x * w0.x + k1.y * w0.y > 0.0) {
      tr.verdict = TraceVerdict::Bounded;
      tr.closed_orbit = true;
      break;
    }
    if (!armed && dist(p, seed) > 10.0 * delta_return) armed = true;
    if (tr.steps >= opt.max_steps) {
      tr.verdict = TraceVerdict::Undecided;
      tr.diagnostic = "step limit reached";
      break;
    }
    if (t >= horizon) {
      tr.verdict =
          stayed_in ? TraceVerdict::Bounded : TraceVerdict::Undecided;
      if (!stayed_in) tr.diagnostic = "left the bounding box, no escape level";
      break;
    }
  }
  if (tr.nodes.back().t != dir * t)
    tr.nodes.push_back({dir * t, p, field.relative_stream(p)});
  tr.elapsed = dir * t;
  return tr;
}

nlohmann::ordered_json StreamlineTrace::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = {seed.x, seed.y};
  j["verdict"] = to_string(verdict);
  j["closed_orbit"] = closed_orbit;
  j["phi_seed"] = phi_seed;
  j["max_phi_drift"] = max_phi_drift;
  if (escape_asymptote)
    j["escape_asymptote"] = *escape_asymptote;
  else
    j["escape_asymptote"] = nullptr;
  j["elapsed"] = elapsed;
  j["steps"] = steps;
  if (!diagnostic.empty()) j["diagnostic"] = diagnostic;
  return j;
}

void export_trace_csv(const StreamlineTrace& tr, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write trace CSV: " + path);
  out.precision(12);
  out << "t,axial,transverse,phi\n";
  for (const auto& n : tr.nodes)
    out << n.t << ',' << n.p.x << ',' << n.p.y << ',' << n.phi << '\n';
}

// ---------------------------------------------------------------------------
// Escape lemma check

EscapeReport verify_escape(const FieldProvider& field, const Vec2& seed,
                           TraceOptions opt) {
  if (!(seed.x < 0.0))
    throw precondition_error("verify_escape: seed must lie in the left half");
  if (field.geometry() == GeometryKind::Dipole2D && !(seed.y > 0.0))
    throw precondition_error(
        "verify_escape: dipole seed must lie in the open upper half-plane");

  EscapeReport rep;
  const double W = field.speed();
  rep.level = field.relative_stream(seed);
  if (!(rep.level < 0.0)) {
    rep.diagnostic = "level is not negative";
    return rep;
  }
  rep.predicted = field.geometry() == GeometryKind::Ring3D
                      ? std::sqrt(-2.0 * rep.level / W)
                      : -rep.level / W;
  // Axis condition: the relative stream on the transverse axis must stay
  // above the level up to the predicted asymptote.
  for (int i = 1; i <= 64; ++i) {
    const double s = rep.predicted * i / 64.0;
    if (!(field.relative_stream({0.0, s}) > rep.level)) {
      rep.diagnostic = "axis profile dips to the level inside the interval";
      return rep;
    }
  }
  rep.hypotheses_hold = true;

  const StreamlineTrace tr = trace(field, seed, opt);
  rep.escape_confirmed = tr.verdict == TraceVerdict::Escaping;
  if (!rep.escape_confirmed) {
    rep.diagnostic = "trace verdict: " + to_string(tr.verdict);
    return rep;
  }
  rep.observed = tr.nodes.back().p.y;
  rep.asymptote_matched =
      std::abs(rep.observed - rep.predicted) <= 0.02 * rep.predicted;
  if (!rep.asymptote_matched) rep.diagnostic = "asymptote mismatch above 2%";
  return rep;
}

// ---------------------------------------------------------------------------
// Domain invariance by Monte-Carlo advection

namespace {

// Boundary polyline with the exact endpoints, as used for the measures.
std::vector<BoundaryPoint> closed_curve(const DomainResult& dom) {
  std::vector<BoundaryPoint> curve = dom.boundary;
  if (dom.case_tag == CaseTag::CaseII)
    curve.insert(curve.begin(), {dom.inner_radius, 0.0});
  else
    curve.insert(curve.begin(), {0.0, dom.l0});
  curve.push_back({dom.outer_radius, 0.0});
  return curve;
}

// Half-width of the domain at transverse offset s (0 outside the range).
double half_width(const std::vector<BoundaryPoint>& curve, double s) {
  if (s < curve.front().s || s > curve.back().s) return 0.0;
  for (size_t i = 1; i < curve.size(); ++i) {
    if (s <= curve[i].s) {
      const double ds = curve[i].s - curve[i - 1].s;
      const double f = ds > 0.0 ? (s - curve[i - 1].s) / ds : 0.0;
      return curve[i - 1].l + f * (curve[i].l - curve[i - 1].l);
    }
  }
  return 0.0;
}

}  // namespace

InvarianceReport verify_domain_invariance(const FieldProvider& field,
                                          const DomainResult& domain,
                                          int n_particles, double horizon,
                                          unsigned rng_seed, double ode_tol) {
  const std::vector<BoundaryPoint> curve = closed_curve(domain);
  const double scale = field.scale();
  const double margin = 1e-3 * scale;
  const double s_lo = curve.front().s, s_hi = curve.back().s;
  double l_max = 0.0;
  for (const auto& bp : curve) l_max = std::max(l_max, bp.l);

  const bool ring = field.geometry() == GeometryKind::Ring3D;
  auto inside = [&](const Vec2& p, double m) {
    const double s = ring ? p.y : std::abs(p.y);
    if (s < s_lo + m || s > s_hi - m) return false;
    return std::abs(p.x) < half_width(curve, s) - m;
  };

  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> uz(-2.0 * l_max, 2.0 * l_max);
  std::uniform_real_distribution<double> us(ring ? 0.0 : -2.0 * s_hi,
                                            2.0 * s_hi);

  std::vector<Vec2> interior, exterior;
  const Box valid = field.valid_box();
  while (int(interior.size()) < n_particles ||
         int(exterior.size()) < n_particles) {
    const Vec2 p{uz(rng), us(rng)};
    if (!valid.contains(p)) continue;
    if (inside(p, margin)) {
      if (int(interior.size()) < n_particles) interior.push_back(p);
    } else if (!inside(p, -margin)) {
      if (int(exterior.size()) < n_particles) exterior.push_back(p);
    }
  }

  TraceOptions opt;
  opt.tol = ode_tol;
  opt.horizon = horizon;
  opt.record_stride = 0;  // endpoints only

  std::vector<int> in_stays(n_particles, 0), out_stays(n_particles, 0);
  parallel_for(n_particles, [&](int i) {
    const StreamlineTrace ti = trace(field, interior[i], opt);
    in_stays[i] = inside(ti.nodes.back().p, 0.0) ? 1 : 0;
    const StreamlineTrace te = trace(field, exterior[i], opt);
    out_stays[i] = inside(te.nodes.back().p, 0.0) ? 0 : 1;
  });

  InvarianceReport rep;
  rep.n_interior = rep.n_exterior = n_particles;
  for (int i = 0; i < n_particles; ++i) {
    rep.interior_fraction += in_stays[i];
    rep.exterior_fraction += out_stays[i];
  }
  rep.interior_fraction /= n_particles;
  rep.exterior_fraction /= n_particles;
  return rep;
}

nlohmann::ordered_json InvarianceReport::to_json() const {
  nlohmann::ordered_json j;
  j["n_interior"] = n_interior;
  j["n_exterior"] = n_exterior;
  j["interior_fraction"] = interior_fraction;
  j["exterior_fraction"] = exterior_fraction;
  return j;
}

}  // namespace vortexdom
