#include "vortexdom/stream.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "vortexdom/kernels.hpp"
#include "vortexdom/parallel.hpp"

namespace vortexdom {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

StreamSolver::StreamSolver(const TravelingVortex& tv, ToleranceSet tol)
    : tv_(tv), tol_(tol), cells_(tv.vorticity.cells()) {
  scale_ = tv_.vorticity.support_scale();
  opt_.order = 8;
  opt_.kappa = 1.5;
  double min_cell = 1e300;
  for (const auto& c : cells_) min_cell = std::min(min_cell, c.diam());
  opt_.min_size = std::min(3e-3 * scale_, 0.2 * min_cell);
  // The quadrature tolerance knob moves the refinement floor; the default
  // (1e-8) maps to the baseline floor above.
  const double f = std::sqrt(tol_.quadrature / 1e-8);
  opt_.min_size *= std::clamp(f, 0.1, 10.0);
}

FieldSample StreamSolver::sample_dipole(const Vec2& p) const {
  if (p.y < 0.0) {
    FieldSample s = sample_dipole({p.x, -p.y});
    return {p, -s.stream, {s.velocity.x, -s.velocity.y},
            -s.relative_stream};
  }
  const VorticitySpec& spec = tv_.vorticity;
  Integrand f = [&spec, &p](const Vec2& y, double* out) {
    const double w = spec.evaluate(y);
    if (w == 0.0) {
      out[0] = out[1] = out[2] = 0.0;
      return;
    }
    const double k = kernel2d(p, y);
    const Vec2 g = kernel2d_grad(p, y);
    out[0] = k * w;
    out[1] = g.y * w;   // u1 = d2 G
    out[2] = -g.x * w;  // u2 = -d1 G
  };
  double acc[3];
  integrate_cells(cells_, f, 3, &p, opt_, acc);
  return {p, acc[0], {acc[1], acc[2]}, acc[0] - tv_.speed * p.y};
}

FieldSample StreamSolver::sample_ring(const Vec2& p) const {
  const double z = p.x, r = p.y;
  if (r < 0.0)
    throw std::domain_error("StreamSolver: ring sample requires r >= 0");
  if (r < 1e-9 * scale_) {
    return {p, 0.0, {axis_speed(z), 0.0}, 0.0};
  }
  const VorticitySpec& spec = tv_.vorticity;
  Integrand f = [&spec, z, r](const Vec2& y, double* out) {
    const double xi = spec.evaluate(y);
    if (xi == 0.0) {
      out[0] = out[1] = out[2] = 0.0;
      return;
    }
    double k[3];
    kernel3d_all(r, z, y.y, y.x, k);
    const double w = xi * y.y;  // xi r' dr' dz'
    out[0] = k[0] * w;
    out[1] = k[2] * w;  // dG/dr
    out[2] = k[1] * w;  // dG/dz
  };
  double acc[3];
  integrate_cells(cells_, f, 3, &p, opt_, acc);
  return {p, acc[0], {acc[1] / r, -acc[2] / r},
          acc[0] - 0.5 * tv_.speed * r * r};
}

FieldSample StreamSolver::sample(const Vec2& p) const {
  return tv_.vorticity.geometry() == GeometryKind::Dipole2D ? sample_dipole(p)
                                                            : sample_ring(p);
}

double StreamSolver::stream(const Vec2& p) const { return sample(p).stream; }

Vec2 StreamSolver::velocity(const Vec2& p) const { return sample(p).velocity; }

double StreamSolver::relative_stream(const Vec2& p) const {
  return sample(p).relative_stream;
}

double StreamSolver::axis_speed(double z) const {
  if (tv_.vorticity.geometry() != GeometryKind::Ring3D)
    throw std::domain_error("axis_speed is defined for rings only");
  const VorticitySpec& spec = tv_.vorticity;
  auto f = [&spec, z](const Vec2& y) -> double {
    const double xi = spec.evaluate(y);
    if (xi == 0.0) return 0.0;
    const double rp = y.y, zeta = z - y.x;
    const double d = rp * rp + zeta * zeta;
    return 0.5 * rp * rp * rp * xi / (d * std::sqrt(d));
  };
  const Vec2 p{z, 0.0};
  return integrate_cells(cells_, f, &p, opt_);
}

double StreamSolver::center_speed() const {
  if (tv_.vorticity.geometry() == GeometryKind::Ring3D) return axis_speed(0.0);
  return velocity({0.0, 0.0}).x;
}

AxisProfile StreamSolver::axis_profile(int n, double s_max) const {
  AxisProfile prof;
  prof.samples.resize(n);
  parallel_for(n, [&](int i) {
    const double s = s_max * (i + 1) / n;
    const FieldSample fs = sample({0.0, s});
    prof.samples[i] = {s, fs.relative_stream, fs.velocity.x};
  });
  return prof;
}

std::vector<double> StreamSolver::decay_probe(const std::vector<double>& radii,
                                              int n_samples) const {
  std::vector<double> out(radii.size(), 0.0);
  parallel_for(static_cast<int>(radii.size()), [&](int i) {
    const double R = radii[i];
    double sup = 0.0;
    for (int j = 0; j < n_samples; ++j) {
      // Arc with transverse component >= R / sqrt(2).
      const double a = kPi * (0.25 + 0.5 * (j + 0.5) / n_samples);
      const Vec2 p{R * std::cos(a), R * std::sin(a)};
      const double s = stream(p);
      const double denom = tv_.vorticity.geometry() == GeometryKind::Ring3D
                               ? p.y * p.y
                               : p.y;
      sup = std::max(sup, std::abs(s) / denom);
    }
    out[i] = sup;
  });
  return out;
}

namespace {

struct ResidualData {
  std::vector<double> w;  // quadrature weight
  std::vector<double> a;  // v . grad q (lab frame)
  std::vector<double> b;  // d q / d axial
  double grad_norm2 = 0.0;

  double residual(double speed) const {
    double num = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
      const double r = a[i] - speed * b[i];
      num += w[i] * r * r;
    }
    return std::sqrt(num) / (speed * std::sqrt(std::max(grad_norm2, 1e-300)));
  }
};

ResidualData residual_data(const StreamSolver& solver, int n) {
  const VorticitySpec& spec = solver.vortex().vorticity;
  const Box b = spec.support_box();
  const double peak = spec.peak();
  std::vector<Vec2> pts;
  std::vector<Vec2> grads;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Vec2 p{b.x0 + b.width() * (i + 0.5) / n,
                   b.y0 + b.height() * (j + 0.5) / n};
      if (std::abs(spec.evaluate(p)) < 1e-3 * peak) continue;
      pts.push_back(p);
      grads.push_back(spec.gradient(p));
    }
  ResidualData data;
  const double cell_w = (b.width() / n) * (b.height() / n);
  data.w.assign(pts.size(), cell_w);
  data.a.resize(pts.size());
  data.b.resize(pts.size());
  std::vector<double> g2(pts.size());
  parallel_for(static_cast<int>(pts.size()), [&](int i) {
    const Vec2 v = solver.velocity(pts[i]);
    data.a[i] = v.x * grads[i].x + v.y * grads[i].y;
    data.b[i] = grads[i].x;
    g2[i] = grads[i].x * grads[i].x + grads[i].y * grads[i].y;
  });
  for (size_t i = 0; i < pts.size(); ++i)
    data.grad_norm2 += data.w[i] * g2[i];
  return data;
}

}  // namespace

double StreamSolver::volumetric_residual(int n) const {
  return residual_data(*this, n).residual(tv_.speed);
}

double StreamSolver::boundary_residual(int n) const {
  const std::vector<Vec2> boundary = tv_.vorticity.core_boundary(n);
  if (boundary.empty())
    throw std::logic_error("boundary residual needs a patch-type profile");
  std::vector<double> phi(boundary.size());
  parallel_for(static_cast<int>(boundary.size()), [&](int i) {
    phi[i] = relative_stream(boundary[i]);
  });
  double lo = phi[0], hi = phi[0], mag = 0.0;
  for (double v : phi) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mag = std::max(mag, std::abs(v));
  }
  // Add an interior probe so the normalization never degenerates when the
  // boundary level itself sits near zero.
  const Box b = tv_.vorticity.support_box();
  const Vec2 probe{0.0, 0.5 * (b.y0 + b.y1)};
  mag = std::max(mag, std::abs(relative_stream(probe)));
  return (hi - lo) / std::max(mag, 1e-300);
}

double StreamSolver::steadiness_residual(int n) const {
  if (!tv_.vorticity.core_boundary(4).empty()) return boundary_residual(8 * n);
  return volumetric_residual(n);
}

double calibrate_speed(const VorticitySpec& spec, ToleranceSet tol, int n) {
  if (!spec.smooth_profile())
    throw std::invalid_argument(
        "calibrate_speed requires a smooth vorticity profile");
  // Lab-frame velocities are independent of W; build the residual data once
  // with a placeholder speed.
  StreamSolver solver(TravelingVortex(spec, 1.0), tol);
  const ResidualData data = residual_data(solver, n);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < data.w.size(); ++i) {
    num += data.w[i] * data.a[i] * data.b[i];
    den += data.w[i] * data.b[i] * data.b[i];
  }
  if (!(den > 0.0) || !(num / den > 0.0))
    throw std::runtime_error("calibrate_speed: residual has no positive minimum");
  const double guess = num / den;
  // Golden-section polish around the least-squares guess.
  double lo = guess / 3.0, hi = 3.0 * guess;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = data.residual(x1), f2 = data.residual(x2);
  while (hi - lo > 1e-7 * guess) {
    if (f1 > f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = data.residual(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = data.residual(x1);
    }
  }
  return 0.5 * (lo + hi);
}

void export_field_csv(const StreamSolver& solver, const Box& box, int nu,
                      int nv, const std::string& path) {
  const bool ring =
      solver.vortex().vorticity.geometry() == GeometryKind::Ring3D;
  std::vector<FieldSample> rows(nu * nv);
  parallel_for(nu * nv, [&](int idx) {
    const int i = idx % nu, j = idx / nu;
    const Vec2 p{box.x0 + box.width() * i / std::max(nu - 1, 1),
                 box.y0 + box.height() * j / std::max(nv - 1, 1)};
    rows[idx] = solver.sample(p);
  });
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write field CSV: " + path);
  out.precision(12);
  out << (ring ? "z,r,stream,v_z,v_r,relative_stream\n"
               : "x1,x2,G,u1,u2,relative_stream\n");
  for (const auto& s : rows)
    out << s.point.x << ',' << s.point.y << ',' << s.stream << ','
        << s.velocity.x << ',' << s.velocity.y << ',' << s.relative_stream
        << '\n';
}

}  // namespace vortexdom
