#include "toric/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "toric/errors.hpp"

namespace toric {

namespace {

// Gauss-Kronrod 7-15 abscissae and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, err;
  bool operator<(const Piece& o) const { return err < o.err; }
};

Piece gk15(const Fn1& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double resk = 0.0, resg = 0.0;
  double fc = f(c);
  resk += kWgk[7] * fc;
  resg += kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    double x = h * kXgk[j];
    double f1 = f(c - x), f2 = f(c + x);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  Piece p;
  p.a = a;
  p.b = b;
  p.value = resk * h;
  double diff = std::fabs((resk - resg) * h);
  p.err = std::pow(200.0 * diff, 1.5);
  if (!(p.err < diff) || !std::isfinite(p.err)) p.err = diff;
  p.err = std::min(p.err, std::max(diff, 1e-18 * std::fabs(p.value)));
  if (diff == 0) p.err = 0;
  return p;
}

QuadResult adaptive(const Fn1& f, std::vector<Piece> init, double rel_tol,
                    double abs_tol, std::size_t max_intervals) {
  std::priority_queue<Piece> q;
  double total = 0.0, err = 0.0;
  std::size_t evals = 0;
  for (const auto& p : init) {
    q.push(p);
    total += p.value;
    err += p.err;
    evals += 15;
  }
  while (q.size() < max_intervals) {
    double tol = std::max(abs_tol, rel_tol * std::fabs(total));
    if (err <= tol) break;
    Piece worst = q.top();
    if (worst.err <= tol / (8.0 * std::max<std::size_t>(q.size(), 1))) break;
    q.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {  // interval exhausted
      worst.err = 0;
      q.push(worst);
      continue;
    }
    Piece l = gk15(f, worst.a, mid);
    Piece r = gk15(f, mid, worst.b);
    evals += 30;
    total += l.value + r.value - worst.value;
    err += l.err + r.err - worst.err;
    q.push(l);
    q.push(r);
  }
  // Recompute the error sum to avoid cancellation drift.
  double err2 = 0.0, tot2 = 0.0;
  while (!q.empty()) {
    err2 += q.top().err;
    tot2 += q.top().value;
    q.pop();
  }
  QuadResult res;
  res.value = tot2;
  res.abs_error = err2;
  res.evals = evals;
  return res;
}

}  // namespace

QuadResult integrate(const Fn1& f, double a, double b, double rel_tol,
                     double abs_tol, std::size_t max_intervals) {
  if (!(b > a)) {
    QuadResult r;
    if (b < a) throw input_error("integration bounds out of order");
    return r;
  }
  return adaptive(f, {gk15(f, a, b)}, rel_tol, abs_tol, max_intervals);
}

QuadResult integrate_with_breaks(const Fn1& f, double a, double b,
                                 const std::vector<double>& breaks,
                                 double rel_tol, double abs_tol,
                                 std::size_t max_intervals) {
  std::vector<double> pts{a};
  for (double x : breaks)
    if (x > a && x < b) pts.push_back(x);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  std::vector<Piece> init;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if (pts[i + 1] > pts[i]) init.push_back(gk15(f, pts[i], pts[i + 1]));
  return adaptive(f, std::move(init), rel_tol, abs_tol, max_intervals);
}

QuadResult integrate_real_line(const Fn1& f, double center,
                               double initial_halfwidth, double rel_tol) {
  double h = std::max(initial_halfwidth, 1.0);
  QuadResult acc = integrate(f, center - h, center + h, rel_tol * 0.1, 1e-300);
  for (int k = 0; k < 60; ++k) {
    QuadResult left =
        integrate(f, center - 2.0 * h, center - h, rel_tol * 0.1, 1e-300);
    QuadResult right =
        integrate(f, center + h, center + 2.0 * h, rel_tol * 0.1, 1e-300);
    double add = left.value + right.value;
    acc.value += add;
    acc.abs_error += left.abs_error + right.abs_error;
    acc.evals += left.evals + right.evals;
    h *= 2.0;
    if (std::fabs(add) <= rel_tol * std::fabs(acc.value) && k >= 2) break;
  }
  return acc;
}

const std::vector<std::pair<double, double>>& gauss_legendre(int order) {
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  std::vector<std::pair<double, double>> nw(order);
  for (int i = 0; i < order; ++i) {
    // Newton iteration from the Chebyshev-based initial guess.
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = order * (x * p1 - p0) / (x * x - 1.0);
    nw[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
  }
  std::sort(nw.begin(), nw.end());
  auto res = cache.emplace(order, std::move(nw));
  return res.first->second;
}

namespace {

double polygon_pass(const Fn2& f,
                    const std::vector<std::pair<double, double>>& ccw,
                    int order, int refine) {
  double cx = 0.0, cy = 0.0;
  for (const auto& v : ccw) {
    cx += v.first;
    cy += v.second;
  }
  cx /= ccw.size();
  cy /= ccw.size();
  const auto& nw = gauss_legendre(order);
  double total = 0.0;
  const std::size_t k = ccw.size();
  const int levels = 1 << refine;  // split each triangle edge-wise
  for (std::size_t i = 0; i < k; ++i) {
    double ax = ccw[i].first, ay = ccw[i].second;
    double bx = ccw[(i + 1) % k].first, by = ccw[(i + 1) % k].second;
    // Subdivide triangle (c, a, b) into levels^2 congruent triangles via
    // barycentric refinement; integrate each with the tensor Duffy rule.
    for (int r = 0; r < levels; ++r) {
      for (int s = 0; s + r < levels; ++s) {
        auto bary = [&](double l1, double l2) {
          double l0 = 1.0 - l1 - l2;
          return std::pair<double, double>{l0 * cx + l1 * ax + l2 * bx,
                                           l0 * cy + l1 * ay + l2 * by};
        };
        double inv = 1.0 / levels;
        // Upright sub-triangle.
        std::vector<std::pair<double, double>> tri{
            bary(r * inv, s * inv), bary((r + 1) * inv, s * inv),
            bary(r * inv, (s + 1) * inv)};
        std::vector<std::vector<std::pair<double, double>>> tris{tri};
        if (r + s + 2 <= levels) {  // inverted companion
          tris.push_back({bary((r + 1) * inv, s * inv),
                          bary((r + 1) * inv, (s + 1) * inv),
                          bary(r * inv, (s + 1) * inv)});
        }
        for (const auto& t : tris) {
          double ux = t[1].first - t[0].first, uy = t[1].second - t[0].second;
          double vx = t[2].first - t[0].first, vy = t[2].second - t[0].second;
          double jac = std::fabs(ux * vy - uy * vx);  // 2 * area
          double acc = 0.0;
          for (const auto& [xu, wu] : nw) {
            double uu = 0.5 * (xu + 1.0);
            for (const auto& [xv, wv] : nw) {
              double vv = 0.5 * (xv + 1.0);
              // Duffy: (uu, uu*vv) maps the square onto the triangle.
              double l1 = uu * (1.0 - vv), l2 = uu * vv;
              double px = t[0].first + l1 * ux + l2 * vx;
              double py = t[0].second + l1 * uy + l2 * vy;
              acc += wu * wv * uu * f(px, py);
            }
          }
          total += acc * jac * 0.25;
        }
      }
    }
  }
  return total;
}

}  // namespace

QuadResult integrate_polygon(const Fn2& f,
                             const std::vector<std::pair<double, double>>& ccw,
                             int order, int refine) {
  QuadResult r;
  if (ccw.size() < 3) throw input_error("polygon quadrature needs >= 3 corners");
  double coarse = polygon_pass(f, ccw, order, refine);
  double fine = polygon_pass(f, ccw, order, refine + 1);
  r.value = fine;
  r.abs_error = std::fabs(fine - coarse);
  r.evals = static_cast<std::size_t>(ccw.size()) *
            static_cast<std::size_t>(order) * order *
            ((1u << refine) * (1u << refine) + (2u << refine) * (2u << refine));
  return r;
}

}  // namespace toric
