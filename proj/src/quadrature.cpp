#include "vortexdom/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace vortexdom {

namespace {

constexpr double kPi = 3.14159265358979323846;

GLRule compute_gl(int n) {
  GLRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Initial guess for the i-th root of P_n, counted from +1 downwards.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.x[i] = x;
    rule.w[i] = w;
    rule.x[n - 1 - i] = -x;
    rule.w[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GLRule& gl_rule(int n) {
  if (n < 2 || n > 64) throw std::invalid_argument("gl_rule: order out of range");
  static std::map<int, GLRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gl(n)).first;
  return it->second;
}

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (positive abscissae).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                           0.381830050505119, 0.417959183673469};

void gk15(const std::function<double(double)>& f, double a, double b,
          double& kronrod, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double resg = 0.0, resk = 0.0;
  for (int i = 0; i < 8; ++i) {
    double fsum;
    if (i == 7) {
      fsum = f(c);
    } else {
      fsum = f(c - h * kXgk[i]) + f(c + h * kXgk[i]);
    }
    resk += kWgk[i] * fsum;
    // Odd Kronrod indices (and the center, i == 7) are the embedded Gauss-7
    // nodes, with kWg[i / 2] the matching Gauss weight.
    if (i % 2 == 1) resg += kWg[i / 2] * fsum;
  }
  kronrod = resk * h;
  const double gauss = resg * h;
  err = std::abs(kronrod - gauss);
}

double adaptive_quad_rec(const std::function<double(double)>& f, double a,
                         double b, double abs_tol, double rel_tol, int depth,
                         int max_depth) {
  double k, e;
  gk15(f, a, b, k, e);
  if (depth >= max_depth || e <= std::max(abs_tol, rel_tol * std::abs(k))) {
    return k;
  }
  const double c = 0.5 * (a + b);
  return adaptive_quad_rec(f, a, c, 0.5 * abs_tol, rel_tol, depth + 1,
                           max_depth) +
         adaptive_quad_rec(f, c, b, 0.5 * abs_tol, rel_tol, depth + 1,
                           max_depth);
}

}  // namespace

double adaptive_quad(const std::function<double(double)>& f, double a,
                     double b, double abs_tol, double rel_tol, int max_depth) {
  if (!(b > a)) return 0.0;
  return adaptive_quad_rec(f, a, b, abs_tol, rel_tol, 0, max_depth);
}

Vec2 QuadCell::map(double u, double v) const {
  if (kind == Kind::Rect) return {u, v};
  return {center.x + u * std::cos(v), center.y + u * std::sin(v)};
}

double QuadCell::jac(double u, double /*v*/) const {
  return kind == Kind::Rect ? 1.0 : u;
}

Box QuadCell::bbox() const {
  if (kind == Kind::Rect) return {u0, u1, v0, v1};
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto add = [&](const Vec2& p) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  };
  for (double u : {u0, u1})
    for (double v : {v0, v1}) add(map(u, v));
  // Axis-extreme angles inside the angular range extend the box to u1.
  const double half_pi = 0.5 * kPi;
  const long k0 = static_cast<long>(std::ceil(v0 / half_pi));
  const long k1 = static_cast<long>(std::floor(v1 / half_pi));
  for (long k = k0; k <= k1; ++k) add(map(u1, k * half_pi));
  if (u0 == 0.0) add(center);
  return {xmin, xmax, ymin, ymax};
}

double QuadCell::diam() const {
  if (kind == Kind::Rect) return std::hypot(u1 - u0, v1 - v0);
  const double arc = u1 * (v1 - v0);
  return std::hypot(u1 - u0, std::min(arc, 2.0 * u1));
}

bool QuadCell::param_of(const Vec2& p, double& u, double& v) const {
  if (kind == Kind::Rect) {
    u = p.x;
    v = p.y;
    return p.x >= u0 && p.x <= u1 && p.y >= v0 && p.y <= v1;
  }
  const Vec2 d = p - center;
  u = d.norm();
  if (u < u0 || u > u1) return false;
  if (u == 0.0) {
    // The polar center belongs to every angular sector with u0 = 0; report
    // it on the u = 0 edge of the parameter rectangle.
    v = v0;
    return true;
  }
  v = std::atan2(d.y, d.x);
  // Angle ranges may live anywhere on the circle; test v modulo 2*pi.
  for (double cand : {v, v + 2.0 * kPi, v - 2.0 * kPi}) {
    if (cand >= v0 && cand <= v1) {
      v = cand;
      return true;
    }
  }
  return false;
}

std::array<QuadCell, 4> QuadCell::split() const {
  const double um = 0.5 * (u0 + u1), vm = 0.5 * (v0 + v1);
  QuadCell a = *this, b = *this, c = *this, d = *this;
  a.u1 = um; a.v1 = vm;
  b.u0 = um; b.v1 = vm;
  c.u1 = um; c.v0 = vm;
  d.u0 = um; d.v0 = vm;
  return {a, b, c, d};
}

namespace {

void tensor_cell(const QuadCell& c, const Integrand& f, int n_out, int order,
                 std::vector<double>& buf, double* acc) {
  const GLRule& g = gl_rule(order);
  const double su = 0.5 * (c.u1 - c.u0), cu = 0.5 * (c.u0 + c.u1);
  const double sv = 0.5 * (c.v1 - c.v0), cv = 0.5 * (c.v0 + c.v1);
  for (int i = 0; i < order; ++i) {
    const double u = cu + su * g.x[i];
    for (int j = 0; j < order; ++j) {
      const double v = cv + sv * g.x[j];
      const Vec2 p = c.map(u, v);
      const double w = g.w[i] * g.w[j] * su * sv * c.jac(u, v);
      f(p, buf.data());
      for (int k = 0; k < n_out; ++k) acc[k] += w * buf[k];
    }
  }
}

// One triangle of the Duffy-style subdivision, with vertex at the singular
// parameter point and the opposite edge running from offset a to offset b.
// The map has jacobian proportional to the distance from the vertex, which
// cancels 1/rho kernel singularities. Thin triangles (the point very close
// to a cell edge) are first bisected until the edge subtends a small angle
// at the vertex; otherwise the angular variation of the integrand defeats
// the Gauss rule in t.
void duffy_triangle(const QuadCell& c, double up, double vp, double ax,
                    double ay, double bx, double by, const Integrand& f,
                    int n_out, int order, int depth, std::vector<double>& buf,
                    double* acc) {
  const double cross = ax * by - ay * bx;
  if (std::abs(cross) < 1e-300) return;  // degenerate (point on this edge)
  const double la = std::hypot(ax, ay), lb = std::hypot(bx, by);
  const double cosang = (ax * bx + ay * by) / (la * lb);
  if (depth < 14 && cosang < 0.92387953251128674) {  // subtends > pi/8
    const double mx = 0.5 * (ax + bx), my = 0.5 * (ay + by);
    duffy_triangle(c, up, vp, ax, ay, mx, my, f, n_out, order, depth + 1, buf,
                   acc);
    duffy_triangle(c, up, vp, mx, my, bx, by, f, n_out, order, depth + 1, buf,
                   acc);
    return;
  }
  const GLRule& g = gl_rule(order);
  for (int i = 0; i < order; ++i) {
    const double s = 0.5 * (1.0 + g.x[i]);  // [0,1]
    const double ws = 0.5 * g.w[i];
    for (int j = 0; j < order; ++j) {
      const double tt = 0.5 * (1.0 + g.x[j]);
      const double wt = 0.5 * g.w[j];
      const double eu = (1.0 - tt) * ax + tt * bx;
      const double ev = (1.0 - tt) * ay + tt * by;
      const double u = up + s * eu;
      const double v = vp + s * ev;
      const Vec2 p = c.map(u, v);
      const double w = ws * wt * s * std::abs(cross) * c.jac(u, v);
      f(p, buf.data());
      for (int k = 0; k < n_out; ++k) acc[k] += w * buf[k];
    }
  }
}

void duffy_cell(const QuadCell& c, double up, double vp, const Integrand& f,
                int n_out, int order, std::vector<double>& buf, double* acc) {
  const double corners[5][2] = {{c.u0, c.v0}, {c.u1, c.v0}, {c.u1, c.v1},
                                {c.u0, c.v1}, {c.u0, c.v0}};
  for (int t = 0; t < 4; ++t) {
    duffy_triangle(c, up, vp, corners[t][0] - up, corners[t][1] - vp,
                   corners[t + 1][0] - up, corners[t + 1][1] - vp, f, n_out,
                   order, 0, buf, acc);
  }
}

void integrate_rec(const QuadCell& c, const Integrand& f, int n_out,
                   const Vec2* p, const CubatureOptions& opt, int depth,
                   std::vector<double>& buf, double* acc) {
  if (p) {
    double up = 0.0, vp = 0.0;
    const bool contains = c.param_of(*p, up, vp);
    const double diam = c.diam();
    if (contains) {
      if (diam > opt.min_size && depth < opt.max_depth) {
        if (c.kind == QuadCell::Kind::Polar && up == 0.0 && c.u0 == 0.0) {
          // The polar center belongs to every angular child, so a 4-way
          // split would duplicate the refinement chain exponentially; a
          // radial split keeps it single.
          QuadCell inner = c, outer = c;
          inner.u1 = outer.u0 = 0.5 * (c.u0 + c.u1);
          integrate_rec(inner, f, n_out, p, opt, depth + 1, buf, acc);
          integrate_rec(outer, f, n_out, p, opt, depth + 1, buf, acc);
          return;
        }
        for (const auto& s : c.split())
          integrate_rec(s, f, n_out, p, opt, depth + 1, buf, acc);
        return;
      }
      duffy_cell(c, up, vp, f, n_out, std::max(opt.order, 10), buf, acc);
      return;
    }
    const double d = c.bbox().distance(*p);
    // The min_size floor must not interrupt the grading toward the singular
    // point: nearby cells shrink to roughly their distance from it, forming
    // a thin graded collar of logarithmic depth around the Duffy cell.
    const double floor_size =
        std::min(opt.min_size, std::max(d / opt.kappa, 1e-3 * opt.min_size));
    if (d < opt.kappa * diam && diam > floor_size && depth < opt.max_depth) {
      for (const auto& s : c.split())
        integrate_rec(s, f, n_out, p, opt, depth + 1, buf, acc);
      return;
    }
  }
  tensor_cell(c, f, n_out, opt.order, buf, acc);
}

}  // namespace

void integrate_cells(const std::vector<QuadCell>& cells, const Integrand& f,
                     int n_out, const Vec2* singular,
                     const CubatureOptions& opt, double* out) {
  std::fill(out, out + n_out, 0.0);
  std::vector<double> buf(n_out, 0.0);
  for (const auto& c : cells)
    integrate_rec(c, f, n_out, singular, opt, 0, buf, out);
}

double integrate_cells(const std::vector<QuadCell>& cells,
                       const std::function<double(const Vec2&)>& f,
                       const Vec2* singular, const CubatureOptions& opt) {
  double out = 0.0;
  Integrand g = [&f](const Vec2& p, double* o) { o[0] = f(p); };
  integrate_cells(cells, g, 1, singular, opt, &out);
  return out;
}

}  // namespace vortexdom
