#include "toric/rays.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "toric/archimedean.hpp"
#include "toric/errors.hpp"

namespace toric {

namespace {

// Piecewise data of a one-dimensional PL convex function: ascending nodes
// y_0 < ... < y_K (including the domain endpoints) and one affine
// d_k y + c_k per piece [y_k, y_{k+1}].
struct PieceData {
  std::vector<Rat> nodes_q, vals_q, slopes_q, offsets_q;
  VecD nodes, vals, slopes, offsets;
  std::size_t pieces() const { return slopes.size(); }
  double value_at(double y) const {
    std::size_t k = piece_of(y);
    return slopes[k] * y + offsets[k];
  }
  std::size_t piece_of(double y) const {
    std::size_t k =
        std::upper_bound(nodes.begin() + 1, nodes.end() - 1, y) -
        (nodes.begin() + 1);
    return std::min(k, pieces() - 1);
  }
};

PieceData piece_data(const PLConvexFunction& g) {
  std::vector<const PLCell*> order;
  for (const auto& c : g.cells()) order.push_back(&c);
  auto cell_lo = [](const PLCell* c) {
    Rat lo = c->region.vertices()[0][0];
    for (const auto& v : c->region.vertices()) lo = std::min(lo, v[0]);
    return lo;
  };
  auto cell_hi = [](const PLCell* c) {
    Rat hi = c->region.vertices()[0][0];
    for (const auto& v : c->region.vertices()) hi = std::max(hi, v[0]);
    return hi;
  };
  std::sort(order.begin(), order.end(),
            [&](const PLCell* a, const PLCell* b) {
              return cell_lo(a) < cell_lo(b);
            });
  PieceData d;
  for (std::size_t k = 0; k < order.size(); ++k) {
    Rat lo = cell_lo(order[k]);
    if (k > 0 && lo != d.nodes_q.back())
      throw consistency_error("ray direction cells are not contiguous");
    if (k > 0) d.nodes_q.pop_back();
    d.nodes_q.push_back(lo);
    d.nodes_q.push_back(cell_hi(order[k]));
    d.slopes_q.push_back(order[k]->slope[0]);
    d.offsets_q.push_back(order[k]->offset);
  }
  for (const auto& y : d.nodes_q) {
    d.nodes.push_back(to_double(y));
    d.vals_q.push_back(g.value({y}));
    d.vals.push_back(to_double(d.vals_q.back()));
  }
  for (std::size_t k = 0; k < d.slopes_q.size(); ++k) {
    d.slopes.push_back(to_double(d.slopes_q[k]));
    d.offsets.push_back(to_double(d.offsets_q[k]));
  }
  return d;
}

bool same_vertices(const Polytope& a, const Polytope& b) {
  return a.vertices() == b.vertices();
}

void validate_spec(RaySpec& spec) {
  if (!spec.base) throw input_error("ray base potential is required");
  if (spec.kind != "legendre" && spec.kind != "bergman")
    throw input_error("unknown ray kind: " + spec.kind);
  if (!(spec.smoothing >= 0) || !std::isfinite(spec.smoothing))
    throw input_error("ray smoothing must be a nonnegative number");
  if (!same_vertices(spec.f.domain(), spec.base->polytope().poly()))
    throw input_error(
        "ray direction domain does not match the base moment polytope");
  if (spec.s_grid.empty()) spec.s_grid = geometric_grid(10.0, 200.0, 16);
  double prev = 0;
  for (double s : spec.s_grid) {
    if (!(s > prev) || !std::isfinite(s))
      throw input_error("ray grid must be positive and strictly increasing");
    prev = s;
  }
}

// The ray potential: u_s with Legendre transform u_0^* + s * dir on the
// moment interval.  With smoothing 0 the direction kinks are kept exact
// (the primal graph is u_0 translated piece by piece, with affine stretches
// over the kinks); with smoothing > 0 the direction is replaced by its
// soft-max at scale eps and everything is smooth and strictly convex.
class LegendreRayPotential final : public ToricPotential {
 public:
  LegendreRayPotential(PotentialPtr base, PieceData dir, double s, double eps)
      : base_(std::move(base)), d_(std::move(dir)), s_(s), eps_(eps) {
    for (std::size_t j = 1; j + 1 < d_.nodes.size(); ++j)
      ustar_nodes_.push_back(base_->ustar({d_.nodes[j]}));
  }

  const MomentPolytope& polytope() const override {
    return base_->polytope();
  }

  double u(const VecD& x) const override { return eval(x[0]).u; }
  VecD grad(const VecD& x) const override { return {eval(x[0]).y}; }
  MatD hess(const VecD& x) const override { return {{eval(x[0]).h}}; }

  double log_hess_det(const VecD& x) const override {
    Eval e = eval(x[0]);
    if (!e.smooth_branch)
      return -std::numeric_limits<double>::infinity();
    if (eps_ > 0) return std::log(e.h);
    // On the translated piece the curvature is the base curvature at the
    // shifted primal point, whose log-space form stays finite.
    return base_->log_hess_det({e.z});
  }

  VecD x_of_y(const VecD& y) const override {
    return {base_->x_of_y(y)[0] + s_ * dir_d1(y[0])};
  }
  double ustar(const VecD& y) const override {
    return base_->ustar(y) + s_ * dir_val(y[0]);
  }

  std::vector<double> legendre_breaks() const override {
    std::vector<double> b = base_->legendre_breaks();
    for (std::size_t j = 1; j + 1 < d_.nodes.size(); ++j)
      b.push_back(d_.nodes[j]);
    std::sort(b.begin(), b.end());
    return b;
  }

  std::string describe() const override { return "legendre ray"; }

 private:
  struct Eval {
    double u, y, h;
    double z = 0;              // base-side primal point of the winning piece
    bool smooth_branch = true;
  };

  double dir_val(double y) const {
    if (eps_ == 0) return d_.value_at(y);
    double m = -1e300;
    for (std::size_t k = 0; k < d_.pieces(); ++k)
      m = std::max(m, d_.slopes[k] * y + d_.offsets[k]);
    double sum = 0;
    for (std::size_t k = 0; k < d_.pieces(); ++k)
      sum += std::exp((d_.slopes[k] * y + d_.offsets[k] - m) / eps_);
    return m + eps_ * std::log(sum);
  }

  // First and second derivatives of the (smoothed) direction.
  double dir_d1(double y) const {
    if (eps_ == 0) return d_.slopes[d_.piece_of(y)];
    double d1, d2;
    dir_smooth(y, &d1, &d2);
    return d1;
  }
  void dir_smooth(double y, double* d1, double* d2) const {
    double m = -1e300;
    for (std::size_t k = 0; k < d_.pieces(); ++k)
      m = std::max(m, d_.slopes[k] * y + d_.offsets[k]);
    double sum = 0, s1 = 0, s2 = 0;
    for (std::size_t k = 0; k < d_.pieces(); ++k) {
      double w = std::exp((d_.slopes[k] * y + d_.offsets[k] - m) / eps_);
      sum += w;
      s1 += w * d_.slopes[k];
      s2 += w * d_.slopes[k] * d_.slopes[k];
    }
    *d1 = s1 / sum;
    *d2 = std::max(0.0, s2 / sum - (*d1) * (*d1)) / eps_;
  }

  Eval eval(double x) const {
    if (eps_ > 0) return eval_smooth(x);
    const double inf = std::numeric_limits<double>::infinity();
    double best_p = -inf, best_p_y = 0, best_p_h = 0, best_p_z = 0;
    for (std::size_t k = 0; k < d_.pieces(); ++k) {
      double z = x - s_ * d_.slopes[k];
      double y = base_->grad({z})[0];
      if (y < d_.nodes[k] || y > d_.nodes[k + 1]) continue;
      double v = base_->u({z}) - s_ * d_.offsets[k];
      if (v > best_p) {
        best_p = v;
        best_p_y = y;
        best_p_h = base_->hess({z})[0][0];
        best_p_z = z;
      }
    }
    double best_n = -inf, best_n_y = 0;
    for (std::size_t j = 1; j + 1 < d_.nodes.size(); ++j) {
      double v = x * d_.nodes[j] - ustar_nodes_[j - 1] - s_ * d_.vals[j];
      if (v > best_n) {
        best_n = v;
        best_n_y = d_.nodes[j];
      }
    }
    if (best_p == -inf && best_n == -inf)
      throw consistency_error("ray evaluation failed");
    // Prefer the smooth branch on ties so the hessian stays positive on the
    // full-measure set the quadrature actually samples.
    if (best_p >= best_n - 1e-12 * (1.0 + std::fabs(best_n)))
      return {std::max(best_p, best_n), best_p_y, best_p_h, best_p_z, true};
    return {best_n, best_n_y, 0.0, 0.0, false};
  }

  // Solve G(z) = z + s * dir'(grad_0(z)) = x for z = x_0(y); every iteration
  // needs only one base gradient, never a base Legendre inversion.
  Eval eval_smooth(double x) const {
    auto G = [&](double z) {
      return z + s_ * dir_d1(base_->grad({z})[0]) - x;
    };
    double a = -1.0, b = 1.0;
    for (int k = 0; k < 200 && G(a) > 0; ++k) a = a * 2 - 1;
    for (int k = 0; k < 200 && G(b) < 0; ++k) b = b * 2 + 1;
    double z = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
      double g = G(z);
      if (g > 0)
        b = z;
      else
        a = z;
      double y = base_->grad({z})[0];
      double d1, d2;
      dir_smooth(y, &d1, &d2);
      double dg = 1.0 + s_ * d2 * base_->hess({z})[0][0];
      double zn = z - g / dg;
      if (!(zn > a && zn < b)) zn = 0.5 * (a + b);
      if (std::fabs(zn - z) <= 1e-15 * (1.0 + std::fabs(z))) {
        z = zn;
        break;
      }
      z = zn;
    }
    double y = base_->grad({z})[0];
    double d1, d2;
    dir_smooth(y, &d1, &d2);
    double h0 = base_->hess({z})[0][0];
    // ustar(y) = z y - u_0(z) + s dir(y), so u = x y - ustar(y) collapses to
    // the expression below.
    return {(x - z) * y + base_->u({z}) - s_ * dir_val(y), y,
            1.0 / (1.0 / h0 + s_ * d2), z, true};
  }

  PotentialPtr base_;
  PieceData d_;
  double s_, eps_;
  VecD ustar_nodes_;  // base Legendre values at the interior nodes
};

Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }

PotentialPtr build_ray(const RaySpec& spec, const RayDirection& d,
                       const BergmanData* bd, double s) {
  if (!(s >= 0) || !std::isfinite(s))
    throw input_error("ray parameter must be a nonnegative number");
  if (spec.kind == "bergman") {
    VecD logw(bd->log_counts);
    for (std::size_t k = 0; k < logw.size(); ++k)
      logw[k] -= 2.0 * s * to_double(bd->w[k]);
    return std::make_shared<LsePotential>(bd->exponents, logw, bd->m);
  }
  if (s == 0) return spec.base;
  return std::make_shared<LegendreRayPotential>(spec.base, piece_data(d.dir),
                                                s, spec.smoothing);
}

double fit_slope(const std::vector<SlopeSample>& samples, std::size_t count) {
  std::size_t n = samples.size();
  count = std::min(count, n);
  double sm = 0, vm = 0;
  for (std::size_t i = n - count; i < n; ++i) {
    sm += samples[i].s;
    vm += samples[i].value;
  }
  sm /= count;
  vm /= count;
  double num = 0, den = 0;
  for (std::size_t i = n - count; i < n; ++i) {
    num += (samples[i].s - sm) * (samples[i].value - vm);
    den += (samples[i].s - sm) * (samples[i].s - sm);
  }
  return num / den;
}

}  // namespace

RayDirection calibrate_direction(const MomentPolytope& P,
                                 const PLConvexFunction& f) {
  if (P.n() != 1)
    throw domain_error(
        "calibration failed: rays require a one-dimensional moment polytope");
  PieceData pd = piece_data(f);
  Rat ybar = P.poly().centroid()[0];
  Rat avg = f.average();
  Rat target = 2 * avg - f.max_value();

  // Phi(t) = min_y (f(y) - t y) + t ybar, a concave PL function of t whose
  // minimum over y sits at a node of f.
  auto phi = [&](const Rat& t) {
    Rat m = pd.vals_q[0] + t * (ybar - pd.nodes_q[0]);
    for (std::size_t j = 1; j < pd.nodes_q.size(); ++j)
      m = rat_min(m, pd.vals_q[j] + t * (ybar - pd.nodes_q[j]));
    return m;
  };

  std::vector<Rat> candidates{Rat(0)};
  for (std::size_t j = 0; j < pd.nodes_q.size(); ++j)
    if (pd.nodes_q[j] != ybar)
      candidates.push_back((target - pd.vals_q[j]) / (ybar - pd.nodes_q[j]));

  bool found = false;
  Rat t_star = 0;
  for (const Rat& t : candidates) {
    if (phi(t) != target) continue;
    if (!found || rat_abs(t) < rat_abs(t_star) ||
        (rat_abs(t) == rat_abs(t_star) && t < t_star)) {
      t_star = t;
      found = true;
    }
  }
  if (!found)
    throw consistency_error("calibration failed: no affine normalizer found");

  Rat c = 2 * avg - t_star * ybar;
  std::vector<PLCell> cells;
  for (const auto& cell : f.cells())
    cells.push_back({cell.region, {cell.slope[0] - t_star}, cell.offset - c});
  return {PLConvexFunction(f.domain(), std::move(cells)), t_star, c};
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (!(lo > 0) || !(hi > lo) || points < 2)
    throw input_error("geometric grid needs 0 < lo < hi and at least 2 points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = lo * std::pow(hi / lo, double(i) / (points - 1));
  g.back() = hi;
  return g;
}

RaySpec make_ray_spec(PotentialPtr base, PLConvexFunction f, std::string kind,
                      double smoothing, std::vector<double> s_grid) {
  RaySpec spec{std::move(base), std::move(f), std::move(kind), smoothing,
               std::move(s_grid)};
  validate_spec(spec);
  return spec;
}

BergmanData bergman_data(const MomentPolytope& P, const RayDirection& d,
                         long long requested_m) {
  if (P.n() != 1)
    throw domain_error(
        "bergman data requires a one-dimensional lattice moment polytope");
  if (!P.is_lattice())
    throw domain_error("integrality: bergman rays need a lattice polytope");

  // Minimal degree clearing the direction kinks, i.e. the lcm of the
  // breakpoint denominators.
  Int m_min = 1;
  for (const Rat& bp : d.dir.breakpoints())
    m_min = lcm(m_min, lattice_denominator(RatVec{bp}));
  Int m = requested_m > 0 ? Int(requested_m) : m_min;
  for (const Rat& bp : d.dir.breakpoints())
    if (!is_integer(bp * m))
      throw domain_error(
          "integrality: the degree does not clear the direction breakpoints");

  BergmanData bd;
  bd.m = to_int64_checked(m, "bergman degree");

  const auto& verts = P.poly().vertices();
  Rat lo = std::min(verts[0][0], verts[1][0]);
  Rat hi = std::max(verts[0][0], verts[1][0]);
  long long width = to_int64_checked(Int(num(hi - lo)), "interval width");
  // m-fold sumset multiplicities of the lattice interval, by repeated
  // convolution of the all-ones vector.
  std::vector<Int> counts(width + 1, Int(1));
  for (long long r = 1; r < bd.m; ++r) {
    std::vector<Int> next(counts.size() + width, Int(0));
    for (std::size_t i = 0; i < counts.size(); ++i)
      for (long long a = 0; a <= width; ++a) next[i + a] += counts[i];
    counts = std::move(next);
  }

  RatVec scaled_vals;
  Rat mlo = lo * m;
  for (std::size_t t = 0; t < counts.size(); ++t) {
    Rat e = mlo + Rat(Int(t));
    bd.exponents.push_back({e});
    bd.log_counts.push_back(std::log(to_double(Rat(counts[t]))));
    scaled_vals.push_back(m * d.dir.value({e / Rat(m)}));
  }
  Int k0 = lattice_denominator(scaled_vals);
  bd.k0 = to_int64_checked(k0, "bergman weight scale");
  for (const Rat& v : scaled_vals) {
    Rat w = v * k0;
    if (!is_integer(w))
      throw consistency_error("bergman weights are not integral");
    bd.w.push_back(w);
  }
  return bd;
}

PotentialPtr ray_at(const RaySpec& spec, double s) {
  RaySpec sp = spec;
  validate_spec(sp);
  RayDirection d = calibrate_direction(sp.base->polytope(), sp.f);
  if (sp.kind == "bergman") {
    BergmanData bd = bergman_data(sp.base->polytope(), d);
    return build_ray(sp, d, &bd, s);
  }
  return build_ray(sp, d, nullptr, s);
}

SlopeReport measure_slope(const RaySpec& spec, const std::string& functional) {
  RaySpec sp = spec;
  validate_spec(sp);
  const MomentPolytope& moment = sp.base->polytope();
  ToricTestConfig cfg = make_config(moment, sp.f);

  SlopeReport rep;
  rep.functional = functional;
  rep.kind = sp.kind;
  if (functional == "E")
    rep.target = na_energy(cfg);
  else if (functional == "I")
    rep.target = na_i(cfg);
  else if (functional == "J")
    rep.target = na_j(cfg);
  else if (functional == "R")
    rep.target = na_ricci(cfg);
  else if (functional == "M")
    rep.target = na_mabuchi(cfg);
  else if (functional == "D")
    rep.target = na_ding(cfg).ding;
  else
    throw input_error("unknown functional: " + functional);

  RayDirection d = calibrate_direction(moment, sp.f);
  BergmanData bd;
  double speed = 1.0;
  if (sp.kind == "bergman") {
    bd = bergman_data(moment, d);
    speed = double(bd.k0);
  }

  for (double s : sp.s_grid) {
    double v = 0;
    try {
      PotentialPtr us =
          build_ray(sp, d, sp.kind == "bergman" ? &bd : nullptr, s);
      if (functional == "D") {
        v = ding_functionals(us, sp.base).ding;
      } else {
        FunctionalEngine eng(us, sp.base);
        if (functional == "E")
          v = eng.energy();
        else if (functional == "I")
          v = eng.i_norm();
        else if (functional == "J")
          v = eng.j_norm();
        else if (functional == "R")
          v = eng.ricci_energy();
        else
          v = eng.mabuchi();
      }
    } catch (const toric_error&) {
      break;
    }
    rep.samples.push_back({s, v / speed, v / (speed * s)});
  }
  rep.complete = rep.samples.size() == sp.s_grid.size();
  if (rep.samples.size() >= 2) {
    std::size_t half = std::max<std::size_t>(2, rep.samples.size() / 2);
    std::size_t quarter = std::max<std::size_t>(2, rep.samples.size() / 4);
    rep.slope = fit_slope(rep.samples, half);
    rep.extrapolation_error =
        std::fabs(rep.slope - fit_slope(rep.samples, quarter));
    double t = to_double(rep.target);
    rep.pass = rep.complete &&
               std::fabs(rep.slope - t) <= std::max(0.02 * std::fabs(t), 5e-3);
  }
  return rep;
}

LogCorrectionReport entropy_log_correction(const RaySpec& spec) {
  RaySpec sp = spec;
  validate_spec(sp);
  const MomentPolytope& moment = sp.base->polytope();
  double m_target = to_double(na_mabuchi(make_config(moment, sp.f)));
  RayDirection d = calibrate_direction(moment, sp.f);
  BergmanData bd;
  double speed = 1.0;
  if (sp.kind == "bergman") {
    bd = bergman_data(moment, d);
    speed = double(bd.k0);
  }

  std::vector<SlopeSample> residuals;
  LogCorrectionReport rep;
  std::size_t start = sp.s_grid.size() / 2;
  for (std::size_t i = start; i < sp.s_grid.size(); ++i) {
    double s = sp.s_grid[i];
    PotentialPtr us =
        build_ray(sp, d, sp.kind == "bergman" ? &bd : nullptr, s);
    FunctionalEngine eng(us, sp.base);
    double r = std::fabs(eng.mabuchi() / speed - s * m_target);
    rep.sup_ratio = std::max(rep.sup_ratio, r / std::log(s));
    residuals.push_back({std::log(s), r, 0});
  }
  if (residuals.size() >= 2)
    rep.residual_slope = fit_slope(residuals, residuals.size());
  return rep;
}

bool uniqueness_probe(const MomentPolytope& P, const PLConvexFunction& f,
                      const PLConvexFunction& g) {
  if (!same_vertices(f.domain(), P.poly()) ||
      !same_vertices(g.domain(), P.poly()))
    throw input_error(
        "ray direction domain does not match the base moment polytope");
  PLConvexFunction df = calibrate_direction(P, f).dir;
  PLConvexFunction dg = calibrate_direction(P, g).dir;
  std::set<Rat> nodes;
  for (const auto& q : piece_data(df).nodes_q) nodes.insert(q);
  for (const auto& q : piece_data(dg).nodes_q) nodes.insert(q);
  for (const Rat& y : nodes)
    if (df.value({y}) != dg.value({y})) return true;
  return false;
}

}  // namespace toric
