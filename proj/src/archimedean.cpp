#include "toric/archimedean.hpp"

#include <algorithm>
#include <cmath>

#include "toric/errors.hpp"

namespace toric {

namespace {

double det2(const MatD& a) { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }

double detn(const MatD& a) { return a.size() == 1 ? a[0][0] : det2(a); }

double ddot(const VecD& a, const VecD& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Integral of f over the moment polytope (not normalized by the volume).
double integrate_moment(const MomentPolytope& mp,
                        const std::function<double(const VecD&)>& f,
                        const std::vector<double>& breaks, double* err) {
  const auto& verts = mp.poly().vertices();
  if (mp.n() == 1) {
    double a = to_double(verts.front()[0]);
    double b = to_double(verts.back()[0]);
    if (a > b) std::swap(a, b);
    auto q = integrate_with_breaks([&](double y) { return f(VecD{y}); }, a, b,
                                   breaks);
    if (err) *err += q.abs_error;
    return q.value;
  }
  std::vector<std::pair<double, double>> ccw;
  ccw.reserve(verts.size());
  for (const auto& v : verts)
    ccw.emplace_back(to_double(v[0]), to_double(v[1]));
  auto q = integrate_polygon(
      [&](double y0, double y1) { return f(VecD{y0, y1}); }, ccw);
  if (err) *err += q.abs_error;
  return q.value;
}

// Hessian of (1/2) log det D^2 u at x; needs 3rd/4th derivatives of u.
MatD half_log_det_hessian(const ToricPotential& p, const VecD& x) {
  Tens3 t3;
  Tens4 t4;
  p.third_fourth(x, &t3, &t4);
  MatD h = p.hess(x);
  int n = static_cast<int>(x.size());
  if (n == 1) {
    double u2 = h[0][0], u3 = t3.at(0, 0, 0), u4 = t4.at(0, 0, 0, 0);
    return {{0.5 * (u4 * u2 - u3 * u3) / (u2 * u2)}};
  }
  double d = det2(h);
  MatD hi{{h[1][1] / d, -h[0][1] / d}, {-h[1][0] / d, h[0][0] / d}};
  MatD v(2, VecD(2, 0.0));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double tr1 = 0;  // tr(H^{-1} d_a d_b H)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) tr1 += hi[j][i] * t4.at(i, j, a, b);
      double tr2 = 0;  // tr(H^{-1} d_a H  H^{-1} d_b H)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l)
              tr2 += hi[i][j] * t3.at(j, k, a) * hi[k][l] * t3.at(l, i, b);
      v[a][b] = 0.5 * (tr1 - tr2);
    }
  return v;
}

double bump_sum(const std::vector<BumpPotential::Bump>& bumps, const VecD& x) {
  double s = 0;
  for (const auto& b : bumps) {
    double r2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double d = x[i] - b.center[i];
      r2 += d * d;
    }
    s += b.amp * std::exp(-r2 / (b.width * b.width));
  }
  return s;
}

}  // namespace

double mixed_discriminant(const MatD& a, const MatD& b) {
  if (a.size() != 2 || b.size() != 2)
    throw input_error("mixed discriminant implemented for 2x2 matrices");
  MatD s{{a[0][0] + b[0][0], a[0][1] + b[0][1]},
         {a[1][0] + b[1][0], a[1][1] + b[1][1]}};
  return 0.5 * (det2(s) - det2(a) - det2(b));
}

FunctionalEngine::FunctionalEngine(PotentialPtr u, PotentialPtr ref)
    : u_(std::move(u)), ref_(std::move(ref)) {
  if (!u_ || !ref_) throw input_error("null potential");
  const auto& pu = u_->polytope().poly();
  const auto& pr = ref_->polytope().poly();
  if (pu.ambient_dim() != pr.ambient_dim() || pu.vertices() != pr.vertices())
    throw input_error("potentials live on different moment polytopes");
  n_ = u_->dim();
  if (n_ < 1 || n_ > 2)
    throw input_error("functional engine supports dimensions 1 and 2");
  vol_ = to_double(u_->polytope().vol());
  sbar_ = to_double(u_->polytope().sbar());
}

double FunctionalEngine::integrate_over_P(
    const std::function<double(const VecD&)>& f,
    const std::vector<double>& extra_breaks) const {
  std::vector<double> breaks = extra_breaks;
  if (n_ == 1) {
    for (const ToricPotential* p : {u_.get(), ref_.get()})
      for (double t : p->legendre_breaks()) breaks.push_back(t);
  }
  return integrate_moment(u_->polytope(), f, breaks, &err_);
}

double FunctionalEngine::pairing_at_ref(
    const std::function<double(const VecD&, const VecD&)>& weight) const {
  return integrate_over_P([&](const VecD& y) {
           VecD x = ref_->x_of_y(y);
           return (u_->u(x) - ref_->u(x)) * weight(y, x);
         }) /
         vol_;
}

double FunctionalEngine::energy() const {
  return integrate_over_P([&](const VecD& y) {
           return ref_->ustar(y) - u_->ustar(y);
         }) /
         vol_;
}

double FunctionalEngine::j_norm() const {
  return pairing_at_ref([](const VecD&, const VecD&) { return 1.0; }) -
         energy();
}

double FunctionalEngine::i_norm() const {
  double at_ref = pairing_at_ref([](const VecD&, const VecD&) { return 1.0; });
  double at_u = integrate_over_P([&](const VecD& y) {
                  VecD x = u_->x_of_y(y);
                  return u_->u(x) - ref_->u(x);
                }) /
                vol_;
  return at_ref - at_u;
}

double FunctionalEngine::entropy() const {
  return integrate_over_P([&](const VecD& y) {
           VecD x = u_->x_of_y(y);
           return u_->log_hess_det(x) - ref_->log_hess_det(x);
         }) /
         (2.0 * vol_);
}

double FunctionalEngine::ricci_energy() const {
  double total = 0;
  for (int j = 0; j < n_; ++j) {
    total += pairing_at_ref([&](const VecD&, const VecD& x) {
      MatD v = half_log_det_hessian(*ref_, x);
      if (n_ == 1) return v[0][0] / ref_->hess(x)[0][0];
      MatD a = (j == 0) ? ref_->hess(x) : u_->hess(x);
      return mixed_discriminant(a, v) / det2(ref_->hess(x));
    });
  }
  return total;
}

double FunctionalEngine::mabuchi() const {
  return entropy() + ricci_energy() + sbar_ * energy();
}

double FunctionalEngine::twisted_energy(const ToricPotential& psi) const {
  double total = 0;
  for (int j = 0; j < n_; ++j) {
    total += pairing_at_ref([&](const VecD&, const VecD& x) {
      MatD p = psi.hess(x);
      if (n_ == 1) return p[0][0] / ref_->hess(x)[0][0];
      MatD a = (j == 0) ? ref_->hess(x) : u_->hess(x);
      return mixed_discriminant(a, p) / det2(ref_->hess(x));
    });
  }
  return total / n_;
}

FunctionalReport FunctionalEngine::report() const {
  FunctionalReport r;
  r.volume = vol_;
  r.sbar = sbar_;
  r.energy = energy();
  double at_ref = pairing_at_ref([](const VecD&, const VecD&) { return 1.0; });
  r.j_norm = at_ref - r.energy;
  double at_u = integrate_over_P([&](const VecD& y) {
                  VecD x = u_->x_of_y(y);
                  return u_->u(x) - ref_->u(x);
                }) /
                vol_;
  r.i_norm = at_ref - at_u;
  r.entropy = entropy();
  r.ricci_energy = ricci_energy();
  r.mabuchi = r.entropy + r.ricci_energy + r.sbar * r.energy;
  r.quad_error = err_;
  return r;
}

double FunctionalEngine::scalar_curvature(const ToricPotential& p,
                                          const VecD& x) {
  MatD h = p.hess(x);
  MatD v = half_log_det_hessian(p, x);
  if (x.size() == 1) return -v[0][0] / h[0][0];
  return -2.0 * mixed_discriminant(v, h) / det2(h);
}

DingReport ding_functionals(PotentialPtr u, PotentialPtr ref) {
  FunctionalEngine eng(u, ref);
  auto translate = u->polytope().reflexive_translate();
  if (!translate)
    throw domain_error(
        "not anticanonical: the moment polytope has no reflexive translate");
  VecD t;
  t.reserve(translate->size());
  for (const auto& c : *translate) t.push_back(to_double(c));
  int n = u->dim();

  double err = 0;
  // log of ∫ exp(-2 (w(x) - <t,x>)) dx, stabilized by the shift at the
  // maximizer x_w(t) of <t,x> - w(x).
  auto log_mass = [&](const ToricPotential& w) {
    VecD x0 = w.x_of_y(t);
    double g0 = -2.0 * (w.u(x0) - ddot(t, x0));
    if (n == 1) {
      auto q = integrate_real_line(
          [&](double x) {
            return std::exp(-2.0 * (w.u({x}) - t[0] * x) - g0);
          },
          x0[0]);
      err += q.abs_error * std::exp(g0);
      return g0 + std::log(q.value);
    }
    // Two dimensions: substitute y = grad w, which turns the integral into
    // one over the moment polytope with density 1/det D^2 w.
    double val = integrate_moment(
        w.polytope(),
        [&](const VecD& y) {
          VecD x = w.x_of_y(y);
          double g = -2.0 * (w.u(x) - ddot(t, x)) - g0;
          return std::exp(g) / det2(w.hess(x));
        },
        {}, &err);
    return g0 + std::log(val);
  };

  DingReport r;
  r.l_part = -0.5 * (log_mass(*u) - log_mass(*ref));
  r.energy = eng.energy();
  r.ding = r.l_part - r.energy;
  r.quad_error = eng.quad_error() + err;
  return r;
}

namespace {

PotentialPtr with_scaled_bumps(const PotentialPtr& base,
                               std::vector<BumpPotential::Bump> bumps,
                               double s) {
  for (auto& b : bumps) b.amp *= s;
  return std::make_shared<BumpPotential>(base, std::move(bumps));
}

}  // namespace

VariationalCheck energy_variation_check(
    const PotentialPtr& base, const PotentialPtr& ref,
    const std::vector<BumpPotential::Bump>& w, double t) {
  FunctionalEngine plus(with_scaled_bumps(base, w, t), ref);
  FunctionalEngine minus(with_scaled_bumps(base, w, -t), ref);
  VariationalCheck c;
  c.finite_difference = (plus.energy() - minus.energy()) / (2.0 * t);
  // The derivative pairs the direction against the Monge-Ampère measure of
  // the point of differentiation.
  double err = 0;
  double vol = to_double(base->polytope().vol());
  c.pairing = integrate_moment(
                  base->polytope(),
                  [&](const VecD& y) { return bump_sum(w, base->x_of_y(y)); },
                  {}, &err) /
              vol;
  return c;
}

VariationalCheck mabuchi_variation_check(
    const PotentialPtr& base, const PotentialPtr& ref,
    const std::vector<BumpPotential::Bump>& w, double t) {
  FunctionalEngine plus(with_scaled_bumps(base, w, t), ref);
  FunctionalEngine minus(with_scaled_bumps(base, w, -t), ref);
  VariationalCheck c;
  c.finite_difference = (plus.mabuchi() - minus.mabuchi()) / (2.0 * t);
  double sbar = to_double(base->polytope().sbar());
  double vol = to_double(base->polytope().vol());
  double err = 0;
  c.pairing = integrate_moment(
                  base->polytope(),
                  [&](const VecD& y) {
                    VecD x = base->x_of_y(y);
                    double s = FunctionalEngine::scalar_curvature(*base, x);
                    return (sbar - s) * bump_sum(w, x);
                  },
                  {}, &err) /
              vol;
  return c;
}

double sup_difference(const ToricPotential& a, const ToricPotential& b,
                      double radius, int points_per_dim) {
  int n = a.dim();
  double best = 0;
  if (n == 1) {
    for (int i = 0; i < points_per_dim; ++i) {
      double x = -radius + 2.0 * radius * i / (points_per_dim - 1);
      best = std::max(best, std::fabs(a.u({x}) - b.u({x})));
    }
    return best;
  }
  for (int i = 0; i < points_per_dim; ++i)
    for (int j = 0; j < points_per_dim; ++j) {
      double x = -radius + 2.0 * radius * i / (points_per_dim - 1);
      double y = -radius + 2.0 * radius * j / (points_per_dim - 1);
      best = std::max(best, std::fabs(a.u({x, y}) - b.u({x, y})));
    }
  return best;
}

ShiftInequalityReport shift_inequality_check(const PotentialPtr& u,
                                             const PotentialPtr& v,
                                             double radius, int points_per_dim,
                                             double tol) {
  if (u == nullptr || v == nullptr) throw input_error("null potential");
  if (u->polytope().poly().vertices() != v->polytope().poly().vertices())
    throw input_error("potentials live on different moment polytopes");
  const int n = u->dim();
  const PotentialPtr ref = LsePotential::canonical_reference(u->polytope());
  FunctionalEngine eng_u(u, ref), eng_v(v, ref);

  ShiftInequalityReport rep;
  rep.sup_diff = sup_difference(*u, *v, radius, points_per_dim);
  rep.j_diff = std::fabs(eng_u.j_norm() - eng_v.j_norm());
  rep.j_bound = 2.0 * rep.sup_diff;

  // Upper bound for the Ricci form of v against its own metric: the largest
  // generalized eigenvalue of Ric(v) = -(1/2) D^2 log det D^2 v versus
  // D^2 v over the grid, skipping points below the curvature noise floor.
  // With higher derivatives available the Ricci matrix is exact,
  //   R_ij = -(1/2) (H^kl T4_ijkl - H^kl H^pq T3_ikp T3_jlq);
  // otherwise it is a central finite difference of log det D^2 v.
  auto ricci_matrix = [&](const VecD& x, const MatD& g) -> MatD {
    MatD r(n, VecD(n, 0.0));
    if (v->has_higher_derivatives()) {
      MatD inv(n, VecD(n, 0.0));
      if (n == 1) {
        inv[0][0] = 1.0 / g[0][0];
      } else {
        const double d = det2(g);
        inv[0][0] = g[1][1] / d;
        inv[1][1] = g[0][0] / d;
        inv[0][1] = inv[1][0] = -g[0][1] / d;
      }
      Tens3 t3;
      Tens4 t4;
      v->third_fourth(x, &t3, &t4);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double acc = 0;
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              acc += inv[k][l] * t4.at(i, j, k, l);
              for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q)
                  acc -= inv[k][l] * inv[p][q] * t3.at(i, k, p) *
                         t3.at(j, l, q);
            }
          r[i][j] = -0.5 * acc;
        }
      return r;
    }
    const double h = 1e-2;
    auto log_det = [&](const VecD& y) { return v->log_hess_det(y); };
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        VecD xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[i] += h, xpp[j] += h;
        xpm[i] += h, xpm[j] -= h;
        xmp[i] -= h, xmp[j] += h;
        xmm[i] -= h, xmm[j] -= h;
        const double d2 =
            (log_det(xpp) - log_det(xpm) - log_det(xmp) + log_det(xmm)) /
            (4.0 * h * h);
        r[i][j] = r[j][i] = -0.5 * d2;
      }
    return r;
  };
  auto ric_max = [&](const VecD& x) -> double {
    const MatD g = v->hess(x);
    if (!(detn(g) > 1e-6)) return -1e300;
    const MatD a = ricci_matrix(x, g);
    if (n == 1) return a[0][0] / g[0][0];
    // Largest root of det(A - lambda g) = 0.
    const double detg = det2(g);
    const double tr = (a[0][0] * g[1][1] - 2.0 * a[0][1] * g[0][1] +
                       a[1][1] * g[0][0]) /
                      detg;
    const double deta = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / detg;
    const double disc = std::max(0.0, tr * tr / 4.0 - deta);
    return tr / 2.0 + std::sqrt(disc);
  };
  double c = -1e300;
  if (n == 1) {
    for (int i = 0; i < points_per_dim; ++i)
      c = std::max(c, ric_max({-radius + 2.0 * radius * i /
                                             (points_per_dim - 1)}));
  } else {
    for (int i = 0; i < points_per_dim; ++i)
      for (int j = 0; j < points_per_dim; ++j)
        c = std::max(
            c, ric_max({-radius + 2.0 * radius * i / (points_per_dim - 1),
                        -radius + 2.0 * radius * j / (points_per_dim - 1)}));
  }
  if (c <= -1e300)
    throw domain_error("curvature grid entirely below the resolvability floor");
  rep.ricci_constant = c;
  rep.m_drop = eng_u.mabuchi() - eng_v.mabuchi();
  rep.m_bound = -2.0 * n * std::max(c, 0.0) * rep.sup_diff;
  rep.ok = rep.j_diff <= rep.j_bound + tol && rep.m_drop >= rep.m_bound - tol;
  return rep;
}

double ricci_bound_violation(const ToricPotential& u, int m, double radius,
                             int points_per_dim) {
  if (m < 1) throw input_error("scale must be a positive integer");
  double bound =
      static_cast<double>(m) *
      static_cast<double>(u.polytope().dilate(m).lattice_points().size());
  double worst = -1e300;
  int n = u.dim();
  auto consider = [&](const VecD& x) {
    if (!(detn(u.hess(x)) > 1e-6)) return;  // curvature noise floor
    worst = std::max(worst, FunctionalEngine::scalar_curvature(u, x) - bound);
  };
  if (n == 1) {
    for (int i = 0; i < points_per_dim; ++i)
      consider({-radius + 2.0 * radius * i / (points_per_dim - 1)});
  } else {
    for (int i = 0; i < points_per_dim; ++i)
      for (int j = 0; j < points_per_dim; ++j)
        consider({-radius + 2.0 * radius * i / (points_per_dim - 1),
                  -radius + 2.0 * radius * j / (points_per_dim - 1)});
  }
  return std::max(0.0, worst);
}

}  // namespace toric
