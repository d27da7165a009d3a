#include "toric/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "toric/errors.hpp"

namespace toric {

namespace {

double dotd(const VecD& a, const VecD& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Solve the (at most 2x2) system H dx = r.
VecD small_solve(const MatD& h, const VecD& r) {
  if (r.size() == 1) return {r[0] / h[0][0]};
  double d = h[0][0] * h[1][1] - h[0][1] * h[1][0];
  return {(r[0] * h[1][1] - r[1] * h[0][1]) / d,
          (r[1] * h[0][0] - r[0] * h[1][0]) / d};
}

}  // namespace

void ToricPotential::third_fourth(const VecD&, Tens3*, Tens4*) const {
  throw domain_error("insufficient derivative order");
}

double ToricPotential::log_hess_det(const VecD& x) const {
  MatD h = hess(x);
  double d = h.size() == 1 ? h[0][0]
                           : h[0][0] * h[1][1] - h[0][1] * h[1][0];
  return std::log(d);
}

VecD ToricPotential::x_of_y(const VecD& y) const {
  const int n = dim();
  if (n == 1) {
    // grad is strictly increasing; expand a bracket, then bisect with Newton
    // polishing.
    double lo = -1.0, hi = 1.0;
    for (int k = 0; k < 200 && grad({lo})[0] > y[0]; ++k) lo = lo * 2 - 1;
    for (int k = 0; k < 200 && grad({hi})[0] < y[0]; ++k) hi = hi * 2 + 1;
    if (grad({lo})[0] > y[0] || grad({hi})[0] < y[0])
      throw domain_error("moment coordinate outside the gradient image");
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      double g = grad({x})[0] - y[0];
      if (g > 0)
        hi = x;
      else
        lo = x;
      double h = hess({x})[0][0];
      double xn = x - g / h;
      if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
      if (std::fabs(xn - x) <= 1e-15 * (1.0 + std::fabs(x))) {
        x = xn;
        break;
      }
      x = xn;
    }
    return {x};
  }
  // Damped Newton on grad(x) = y, minimizing u(x) - <y, x>.
  VecD x(n, 0.0);
  auto val = [&](const VecD& z) { return u(z) - dotd(y, z); };
  double fx = val(x);
  for (int it = 0; it < 400; ++it) {
    VecD g = grad(x);
    VecD r(n);
    double gn = 0;
    for (int i = 0; i < n; ++i) {
      r[i] = y[i] - g[i];
      gn = std::max(gn, std::fabs(r[i]));
    }
    if (gn < 1e-13) break;
    VecD dx = small_solve(hess(x), r);
    double step = 1.0;
    for (int ls = 0; ls < 60; ++ls) {
      VecD xn(n);
      for (int i = 0; i < n; ++i) xn[i] = x[i] + step * dx[i];
      double fn = val(xn);
      if (std::isfinite(fn) && fn <= fx + 1e-18 * std::fabs(fx)) {
        x = xn;
        fx = fn;
        break;
      }
      step *= 0.5;
      if (ls == 59) return x;
    }
  }
  return x;
}

double ToricPotential::ustar(const VecD& y) const {
  VecD x = x_of_y(y);
  return dotd(x, y) - u(x);
}

// ---------------- LsePotential ----------------

LsePotential::LsePotential(RatMat exponents, VecD log_weights, long long m)
    : exps_(std::move(exponents)),
      logw_(std::move(log_weights)),
      m_(m),
      p_([&] {
        if (exps_.empty()) throw input_error("empty exponent list");
        std::vector<RatVec> pts;
        for (const auto& e : exps_) {
          RatVec q(e.size());
          for (std::size_t i = 0; i < e.size(); ++i) q[i] = e[i] / Rat(m);
          pts.push_back(q);
        }
        return MomentPolytope(
            Polytope::hull(static_cast<int>(exps_[0].size()), pts));
      }()) {
  if (m_ < 1) throw input_error("scale must be a positive integer");
  if (logw_.size() != exps_.size())
    throw input_error("weight count must match exponent count");
  exps_d_.reserve(exps_.size());
  for (const auto& e : exps_) {
    VecD d(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) d[i] = to_double(e[i]);
    exps_d_.push_back(d);
  }
}

std::shared_ptr<LsePotential> LsePotential::canonical_reference(
    const MomentPolytope& p) {
  if (!p.is_lattice())
    throw input_error(
        "canonical reference requires a lattice moment polytope");
  auto pts = p.lattice_points();
  RatMat exps(pts.begin(), pts.end());
  return std::make_shared<LsePotential>(std::move(exps),
                                        VecD(pts.size(), 0.0), 1);
}

VecD LsePotential::softmax(const VecD& x) const {
  const std::size_t k = exps_d_.size();
  VecD t(k);
  double mx = -1e300;
  for (std::size_t j = 0; j < k; ++j) {
    t[j] = logw_[j] + 2.0 * dotd(exps_d_[j], x);
    mx = std::max(mx, t[j]);
  }
  double z = 0;
  for (std::size_t j = 0; j < k; ++j) {
    t[j] = std::exp(t[j] - mx);
    z += t[j];
  }
  for (std::size_t j = 0; j < k; ++j) t[j] /= z;
  return t;
}

double LsePotential::u(const VecD& x) const {
  const std::size_t k = exps_d_.size();
  double mx = -1e300;
  for (std::size_t j = 0; j < k; ++j)
    mx = std::max(mx, logw_[j] + 2.0 * dotd(exps_d_[j], x));
  double z = 0;
  for (std::size_t j = 0; j < k; ++j)
    z += std::exp(logw_[j] + 2.0 * dotd(exps_d_[j], x) - mx);
  return (mx + std::log(z)) / (2.0 * m_);
}

VecD LsePotential::grad(const VecD& x) const {
  VecD p = softmax(x);
  const int n = dim();
  VecD g(n, 0.0);
  for (std::size_t j = 0; j < p.size(); ++j)
    for (int i = 0; i < n; ++i) g[i] += p[j] * exps_d_[j][i];
  for (int i = 0; i < n; ++i) g[i] /= m_;
  return g;
}

MatD LsePotential::hess(const VecD& x) const {
  VecD p = softmax(x);
  const int n = dim();
  VecD mean(n, 0.0);
  for (std::size_t j = 0; j < p.size(); ++j)
    for (int i = 0; i < n; ++i) mean[i] += p[j] * exps_d_[j][i];
  MatD h(n, VecD(n, 0.0));
  for (std::size_t j = 0; j < p.size(); ++j)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        h[a][b] += p[j] * (exps_d_[j][a] - mean[a]) * (exps_d_[j][b] - mean[b]);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) h[a][b] *= 2.0 / m_;
  return h;
}

double LsePotential::log_hess_det(const VecD& x) const {
  // The hessian is (2/m) Cov_p(e); far from the transition region the tail
  // probabilities underflow, so assemble log det Cov from the all-positive
  // pairwise (Cauchy-Binet) expansion in log space.
  const std::size_t k = exps_d_.size();
  const int n = dim();
  VecD q(k);
  double mx = -1e300;
  for (std::size_t j = 0; j < k; ++j) {
    q[j] = logw_[j] + 2.0 * dotd(exps_d_[j], x);
    mx = std::max(mx, q[j]);
  }
  double z = 0;
  for (std::size_t j = 0; j < k; ++j) z += std::exp(q[j] - mx);
  double logz = mx + std::log(z);
  for (std::size_t j = 0; j < k; ++j) q[j] -= logz;  // log p_j, exact

  VecD mean(n, 0.0);
  for (std::size_t j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) mean[i] += std::exp(q[j]) * exps_d_[j][i];

  // det Cov = sum_{i<j} p_i p_j w_ij^2 with w_ij the separation (1D) or the
  // cross product of the centered exponents (2D).
  double tmax = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      double w;
      if (n == 1) {
        w = exps_d_[i][0] - exps_d_[j][0];
      } else {
        double ax = exps_d_[i][0] - mean[0], ay = exps_d_[i][1] - mean[1];
        double bx = exps_d_[j][0] - mean[0], by = exps_d_[j][1] - mean[1];
        w = ax * by - ay * bx;
      }
      if (w == 0) continue;
      double t = q[i] + q[j] + 2.0 * std::log(std::fabs(w));
      terms.push_back(t);
      tmax = std::max(tmax, t);
    }
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  double s = 0;
  for (double t : terms) s += std::exp(t - tmax);
  return n * std::log(2.0 / m_) + tmax + std::log(s);
}

void LsePotential::third_fourth(const VecD& x, Tens3* t3, Tens4* t4) const {
  VecD p = softmax(x);
  const int n = dim();
  VecD mean(n, 0.0);
  for (std::size_t j = 0; j < p.size(); ++j)
    for (int i = 0; i < n; ++i) mean[i] += p[j] * exps_d_[j][i];
  MatD mu2(n, VecD(n, 0.0));
  std::vector<double> mu3(n * n * n, 0.0), mu4(n * n * n * n, 0.0);
  for (std::size_t j = 0; j < p.size(); ++j) {
    VecD c(n);
    for (int i = 0; i < n; ++i) c[i] = exps_d_[j][i] - mean[i];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        mu2[a][b] += p[j] * c[a] * c[b];
        for (int d = 0; d < n; ++d) {
          mu3[(a * n + b) * n + d] += p[j] * c[a] * c[b] * c[d];
          for (int e = 0; e < n; ++e)
            mu4[((a * n + b) * n + d) * n + e] += p[j] * c[a] * c[b] * c[d] * c[e];
        }
      }
  }
  if (t3) {
    t3->n = n;
    t3->a.assign(n * n * n, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d)
          t3->a[(a * n + b) * n + d] = 4.0 / m_ * mu3[(a * n + b) * n + d];
  }
  if (t4) {
    t4->n = n;
    t4->a.assign(n * n * n * n, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d)
          for (int e = 0; e < n; ++e) {
            double k4 = mu4[((a * n + b) * n + d) * n + e] -
                        mu2[a][b] * mu2[d][e] - mu2[a][d] * mu2[b][e] -
                        mu2[a][e] * mu2[b][d];
            t4->a[((a * n + b) * n + d) * n + e] = 8.0 / m_ * k4;
          }
  }
}

std::string LsePotential::describe() const {
  std::ostringstream os;
  os << "exp-sum potential (" << exps_.size() << " terms, scale " << m_ << ")";
  return os.str();
}

// ---------------- BumpPotential ----------------

namespace {

// value and first..fourth derivative tensors of amp * exp(-|x-c|^2/w^2)
struct BumpEval {
  double v;
  VecD g;
  MatD h;
  Tens3 t3;
  Tens4 t4;
};

BumpEval eval_bump(const BumpPotential::Bump& b, const VecD& x, bool highers) {
  const int n = static_cast<int>(x.size());
  VecD t(n);
  double q = 0;
  for (int i = 0; i < n; ++i) {
    t[i] = (x[i] - b.center[i]) / b.width;
    q += t[i] * t[i];
  }
  double g0 = b.amp * std::exp(-q);
  BumpEval e;
  e.v = g0;
  e.g.assign(n, 0.0);
  e.h.assign(n, VecD(n, 0.0));
  double iw = 1.0 / b.width;
  for (int i = 0; i < n; ++i) e.g[i] = -2.0 * t[i] * iw * g0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double d = (i == j) ? 1.0 : 0.0;
      e.h[i][j] = (4.0 * t[i] * t[j] - 2.0 * d) * iw * iw * g0;
    }
  if (highers) {
    e.t3.n = n;
    e.t3.a.assign(n * n * n, 0.0);
    e.t4.n = n;
    e.t4.a.assign(n * n * n * n, 0.0);
    auto dd = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = -8.0 * t[i] * t[j] * t[k] +
                     4.0 * (dd(i, j) * t[k] + dd(i, k) * t[j] + dd(j, k) * t[i]);
          e.t3.a[(i * n + j) * n + k] = v * iw * iw * iw * g0;
          for (int l = 0; l < n; ++l) {
            double w4 =
                16.0 * t[i] * t[j] * t[k] * t[l] -
                8.0 * (dd(i, j) * t[k] * t[l] + dd(i, k) * t[j] * t[l] +
                       dd(i, l) * t[j] * t[k] + dd(j, k) * t[i] * t[l] +
                       dd(j, l) * t[i] * t[k] + dd(k, l) * t[i] * t[j]) +
                4.0 * (dd(i, j) * dd(k, l) + dd(i, k) * dd(j, l) +
                       dd(i, l) * dd(j, k));
            e.t4.a[((i * n + j) * n + k) * n + l] = w4 * iw * iw * iw * iw * g0;
          }
        }
  }
  return e;
}

}  // namespace

BumpPotential::BumpPotential(PotentialPtr base, std::vector<Bump> bumps)
    : base_(std::move(base)), bumps_(std::move(bumps)) {
  const int n = base_->dim();
  for (const auto& b : bumps_) {
    if (static_cast<int>(b.center.size()) != n)
      throw input_error("bump center dimension mismatch");
    if (!(b.width > 0)) throw input_error("bump width must be positive");
  }
  // Convexity spot check over a grid covering the bump supports and the
  // moderate-gradient region.
  double r = 10.0;
  for (const auto& b : bumps_)
    for (double c : b.center) r = std::max(r, std::fabs(c) + 8.0 * b.width);
  const int steps = (n == 1) ? 4001 : 161;
  for (int i = 0; i < steps; ++i) {
    double x0 = -r + 2.0 * r * i / (steps - 1);
    if (n == 1) {
      MatD h = hess({x0});
      if (!(h[0][0] > 0)) throw domain_error("not convex");
    } else {
      for (int j = 0; j < steps; ++j) {
        double x1 = -r + 2.0 * r * j / (steps - 1);
        MatD h = hess({x0, x1});
        if (!(h[0][0] > 0 && h[0][0] * h[1][1] - h[0][1] * h[1][0] > 0))
          throw domain_error("not convex");
      }
    }
  }
}

double BumpPotential::u(const VecD& x) const {
  double v = base_->u(x);
  for (const auto& b : bumps_) v += eval_bump(b, x, false).v;
  return v;
}

VecD BumpPotential::grad(const VecD& x) const {
  VecD g = base_->grad(x);
  for (const auto& b : bumps_) {
    auto e = eval_bump(b, x, false);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += e.g[i];
  }
  return g;
}

MatD BumpPotential::hess(const VecD& x) const {
  MatD h = base_->hess(x);
  for (const auto& b : bumps_) {
    auto e = eval_bump(b, x, false);
    for (std::size_t i = 0; i < h.size(); ++i)
      for (std::size_t j = 0; j < h.size(); ++j) h[i][j] += e.h[i][j];
  }
  return h;
}

void BumpPotential::third_fourth(const VecD& x, Tens3* t3, Tens4* t4) const {
  base_->third_fourth(x, t3, t4);
  const int n = dim();
  for (const auto& b : bumps_) {
    auto e = eval_bump(b, x, true);
    if (t3)
      for (int i = 0; i < n * n * n; ++i) t3->a[i] += e.t3.a[i];
    if (t4)
      for (int i = 0; i < n * n * n * n; ++i) t4->a[i] += e.t4.a[i];
  }
}

std::string BumpPotential::describe() const {
  std::ostringstream os;
  os << base_->describe() << " + " << bumps_.size() << " bump(s)";
  return os.str();
}

// ---------------- GridPotential ----------------

GridPotential::GridPotential(VecD ys, VecD ustar_vals)
    : ys_(std::move(ys)),
      vals_(std::move(ustar_vals)),
      p_([&] {
        if (ys_.size() < 4) throw input_error("grid potential needs >= 4 knots");
        // Knots must be strictly increasing; the moment polytope is the
        // rational interval spanned by the end knots.
        for (std::size_t i = 0; i + 1 < ys_.size(); ++i)
          if (!(ys_[i] < ys_[i + 1]))
            throw input_error("grid knots must be strictly increasing");
        auto to_rat = [](double v) {
          // Exact binary-rational representation of the double.
          long long den = 1;
          while (v != std::floor(v) && den < (1LL << 40)) {
            v *= 2;
            den *= 2;
          }
          return Rat(Int(static_cast<long long>(v)), Int(den));
        };
        std::vector<RatVec> pts{{to_rat(ys_.front())}, {to_rat(ys_.back())}};
        return MomentPolytope(Polytope::hull(1, pts));
      }()) {
  if (vals_.size() != ys_.size())
    throw input_error("grid value count must match knot count");
  // Natural cubic spline: tridiagonal system for second derivatives.
  const std::size_t k = ys_.size();
  m2_.assign(k, 0.0);
  VecD a(k, 0.0), b(k, 0.0), c(k, 0.0), d(k, 0.0);
  b[0] = 1.0;
  b[k - 1] = 1.0;
  for (std::size_t i = 1; i + 1 < k; ++i) {
    double h0 = ys_[i] - ys_[i - 1], h1 = ys_[i + 1] - ys_[i];
    a[i] = h0 / 6.0;
    b[i] = (h0 + h1) / 3.0;
    c[i] = h1 / 6.0;
    d[i] = (vals_[i + 1] - vals_[i]) / h1 - (vals_[i] - vals_[i - 1]) / h0;
  }
  // Thomas algorithm.
  for (std::size_t i = 1; i < k; ++i) {
    double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  m2_[k - 1] = d[k - 1] / b[k - 1];
  for (std::size_t i = k - 1; i-- > 0;) m2_[i] = (d[i] - c[i] * m2_[i + 1]) / b[i];
  // Convexity check at the knots.
  for (std::size_t i = 0; i < k; ++i)
    if (m2_[i] < -1e-12) throw domain_error("not convex");
  // Strict monotonicity of the derivative across knots.
  for (std::size_t i = 0; i + 1 < k; ++i)
    if (!(spline_d1(ys_[i + 1]) > spline_d1(ys_[i])))
      throw domain_error("not convex");
}

double GridPotential::spline_value(double y) const {
  const auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
  std::size_t i = std::min<std::size_t>(
      std::max<std::ptrdiff_t>(it - ys_.begin() - 1, 0), ys_.size() - 2);
  double h = ys_[i + 1] - ys_[i];
  double A = (ys_[i + 1] - y) / h, B = (y - ys_[i]) / h;
  return A * vals_[i] + B * vals_[i + 1] +
         ((A * A * A - A) * m2_[i] + (B * B * B - B) * m2_[i + 1]) * h * h / 6.0;
}

double GridPotential::spline_d1(double y) const {
  const auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
  std::size_t i = std::min<std::size_t>(
      std::max<std::ptrdiff_t>(it - ys_.begin() - 1, 0), ys_.size() - 2);
  double h = ys_[i + 1] - ys_[i];
  double A = (ys_[i + 1] - y) / h, B = (y - ys_[i]) / h;
  return (vals_[i + 1] - vals_[i]) / h -
         (3.0 * A * A - 1.0) * h * m2_[i] / 6.0 +
         (3.0 * B * B - 1.0) * h * m2_[i + 1] / 6.0;
}

double GridPotential::spline_d2(double y) const {
  const auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
  std::size_t i = std::min<std::size_t>(
      std::max<std::ptrdiff_t>(it - ys_.begin() - 1, 0), ys_.size() - 2);
  double h = ys_[i + 1] - ys_[i];
  double A = (ys_[i + 1] - y) / h, B = (y - ys_[i]) / h;
  return A * m2_[i] + B * m2_[i + 1];
}

double GridPotential::y_of_x(double x) const {
  // Invert the increasing derivative of the spline; clamp outside its range.
  double lo = ys_.front(), hi = ys_.back();
  if (x <= spline_d1(lo)) return lo;
  if (x >= spline_d1(hi)) return hi;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (spline_d1(mid) < x)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-15 * (1.0 + std::fabs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

double GridPotential::u(const VecD& x) const {
  double y = y_of_x(x[0]);
  return x[0] * y - spline_value(y);
}

VecD GridPotential::grad(const VecD& x) const { return {y_of_x(x[0])}; }

MatD GridPotential::hess(const VecD& x) const {
  double y = y_of_x(x[0]);
  double s2 = spline_d2(y);
  if (!(s2 > 0)) throw domain_error("not convex");
  return {{1.0 / s2}};
}

VecD GridPotential::x_of_y(const VecD& y) const { return {spline_d1(y[0])}; }

double GridPotential::ustar(const VecD& y) const { return spline_value(y[0]); }

std::string GridPotential::describe() const {
  std::ostringstream os;
  os << "grid potential (" << ys_.size() << " knots)";
  return os.str();
}

std::string ShiftedPotential::describe() const {
  std::ostringstream os;
  os << base_->describe() << " + constant";
  return os.str();
}

}  // namespace toric
