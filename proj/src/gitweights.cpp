#include "toric/gitweights.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "toric/archimedean.hpp"
#include "toric/lp.hpp"
#include "toric/quadrature.hpp"

namespace toric {

namespace {

constexpr int kMaxComponents = 20000;  // tensor-power size guard
constexpr long long kMaxTensorPower = 64;

Int int_dot(const IntVec& a, const IntVec& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RatVec to_rat_vec(const IntVec& m) {
  RatVec p(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) p[i] = Rat(m[i]);
  return p;
}

std::shared_ptr<const Polytope> hull_of(const std::vector<IntVec>& weights) {
  std::vector<RatVec> pts;
  pts.reserve(weights.size());
  for (const IntVec& m : weights) pts.push_back(to_rat_vec(m));
  return std::make_shared<Polytope>(
      Polytope::hull(static_cast<int>(weights[0].size()), std::move(pts)));
}

}  // namespace

WeightedVector::WeightedVector(std::vector<IntVec> weights, VecD norms)
    : weights_(std::move(weights)), norms_(std::move(norms)) {
  if (weights_.empty()) throw input_error("empty weight list");
  if (weights_.size() != norms_.size())
    throw input_error("weights and norms must align");
  const std::size_t r = weights_[0].size();
  if (r == 0) throw input_error("weight entries must have positive rank");
  for (const IntVec& m : weights_)
    if (m.size() != r) throw input_error("weight entries have mismatched rank");
  for (double c : norms_)
    if (!(c > 0) || !std::isfinite(c))
      throw input_error("component norms must be positive");
  hull_ = hull_of(weights_);
}

Rat WeightedVector::min_pairing(const RatVec& lam) const {
  if (static_cast<int>(lam.size()) != rank())
    throw input_error("cocharacter rank does not match the weight data");
  Rat best;
  bool first = true;
  for (const IntVec& m : weights_) {
    Rat s = 0;
    for (std::size_t i = 0; i < lam.size(); ++i) s += Rat(m[i]) * lam[i];
    if (first || s < best) best = s, first = false;
  }
  return best;
}

WeightedVector WeightedVector::tensor(const WeightedVector& other) const {
  if (rank() != other.rank())
    throw input_error("weight entries have mismatched rank");
  if (static_cast<long long>(weights_.size()) * other.weights_.size() >
      4LL * kMaxComponents)
    throw input_error("clear denominators: tensor power too large");
  std::map<IntVec, double> sq;  // character -> sum of squared norms
  for (std::size_t i = 0; i < weights_.size(); ++i)
    for (std::size_t j = 0; j < other.weights_.size(); ++j) {
      IntVec m(weights_[i].size());
      for (std::size_t d = 0; d < m.size(); ++d)
        m[d] = weights_[i][d] + other.weights_[j][d];
      double c = norms_[i] * other.norms_[j];
      sq[std::move(m)] += c * c;
    }
  if (static_cast<int>(sq.size()) > kMaxComponents)
    throw input_error("clear denominators: tensor power too large");
  std::vector<IntVec> w;
  VecD n;
  w.reserve(sq.size());
  n.reserve(sq.size());
  for (auto& [m, s] : sq) {
    w.push_back(m);
    n.push_back(std::sqrt(s));
  }
  return WeightedVector(std::move(w), std::move(n));
}

WeightedVector WeightedVector::power(long long n) const {
  if (n < 0) throw input_error("tensor power must be nonnegative");
  if (n > kMaxTensorPower)
    throw input_error("clear denominators: tensor power too large");
  WeightedVector acc(std::vector<IntVec>{IntVec(rank(), Int(0))}, VecD{1.0});
  for (long long i = 0; i < n; ++i) acc = acc.tensor(*this);
  return acc;
}

Rat support_function(const WeightedVector& v, const RatVec& lam) {
  if (static_cast<int>(lam.size()) != v.rank())
    throw input_error("cocharacter rank does not match the weight data");
  Rat best;
  bool first = true;
  for (const IntVec& m : v.weights()) {
    Rat s = 0;
    for (std::size_t i = 0; i < lam.size(); ++i) s += Rat(m[i]) * lam[i];
    if (first || s > best) best = s, first = false;
  }
  return best;
}

int LogNormFunction::rank() const {
  if (terms.empty()) return 0;
  int r = terms[0].vec.rank();
  for (const LogNormTerm& t : terms)
    if (t.vec.rank() != r)
      throw input_error("log-norm terms have mismatched rank");
  return r;
}

OneParamSubgroup cochar(std::initializer_list<long long> entries) {
  OneParamSubgroup lam;
  lam.reserve(entries.size());
  for (long long e : entries) lam.emplace_back(e);
  return lam;
}

Rat fNA(const LogNormFunction& f, const OneParamSubgroup& lam) {
  if (f.terms.empty()) return Rat(0);
  if (static_cast<int>(lam.size()) != f.rank())
    throw input_error("cocharacter rank does not match the weight data");
  Rat s = 0;
  for (const LogNormTerm& t : f.terms)
    s -= t.coeff * t.vec.min_pairing(to_rat_vec(lam));
  return s;
}

double log_norm_value(const LogNormFunction& f, const OneParamSubgroup& lam,
                      double s) {
  if (f.terms.empty()) return 0.0;
  if (static_cast<int>(lam.size()) != f.rank())
    throw input_error("cocharacter rank does not match the weight data");
  double total = 0.0;
  for (const LogNormTerm& t : f.terms) {
    // log ||lam(e^{-s}) . v||^2 = LSE_m(-2 s <m,lam> + 2 log ||v_m||)
    double top = -std::numeric_limits<double>::infinity();
    VecD expo(t.vec.components());
    for (int i = 0; i < t.vec.components(); ++i) {
      double pairing = static_cast<double>(int_dot(t.vec.weights()[i], lam));
      expo[i] = -2.0 * s * pairing + 2.0 * std::log(t.vec.norms()[i]);
      top = std::max(top, expo[i]);
    }
    double acc = 0.0;
    for (double e : expo) acc += std::exp(e - top);
    total += to_double(t.coeff) * 0.5 * (top + std::log(acc));
  }
  return total;
}

SlopeAgreement slope_vs_fNA(const LogNormFunction& f,
                            const OneParamSubgroup& lam, double tol) {
  SlopeAgreement out;
  out.exact = fNA(f, lam);
  const int lo = 5, hi = 40;
  const int npts = hi - lo + 1;
  double sbar = 0, vbar = 0;
  VecD vals(npts);
  for (int i = 0; i < npts; ++i) {
    vals[i] = log_norm_value(f, lam, lo + i);
    sbar += lo + i;
    vbar += vals[i];
  }
  sbar /= npts;
  vbar /= npts;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < npts; ++i) {
    double ds = lo + i - sbar;
    sxx += ds * ds;
    sxy += ds * (vals[i] - vbar);
  }
  out.slope = sxy / sxx;
  out.diff = std::abs(out.slope - to_double(out.exact));
  out.pass = out.diff <= tol;
  return out;
}

ClearedPair clear_denominators(const LogNormFunction& f) {
  const int r = std::max(f.rank(), 1);
  WeightedVector trivial(std::vector<IntVec>{IntVec(r, Int(0))}, VecD{1.0});
  ClearedPair out{trivial, trivial, Int(1)};
  Int q = 1;
  for (const LogNormTerm& t : f.terms)
    if (t.coeff != 0) q = boost::multiprecision::lcm(q, den(t.coeff));
  out.power = q;
  for (const LogNormTerm& t : f.terms) {
    if (t.coeff == 0) continue;
    Int n = num(t.coeff) * (q / den(t.coeff));
    long long steps =
        to_int64_checked(boost::multiprecision::abs(n), "tensor power");
    WeightedVector piece = t.vec.power(steps);
    if (n > 0)
      out.positive = out.positive.tensor(piece);
    else
      out.negative = out.negative.tensor(piece);
  }
  return out;
}

namespace {

// Primitive integer vector parallel to d; empty when d = 0.
IntVec primitive_of(const RatVec& d) {
  Int b = lattice_denominator(d);
  IntVec v(d.size());
  Int g = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    v[i] = num(d[i]) * (b / den(d[i]));
    g = boost::multiprecision::gcd(g, v[i]);
  }
  if (g == 0) return {};
  for (Int& c : v) c /= g;
  return v;
}

// Directions where a PL min over characters can change slope: the normal
// directions of every vertex pair of both weight polytopes (this contains
// all rays of the two normal fans), both signs, plus the coordinate axes.
std::vector<IntVec> scan_directions(const Polytope& a, const Polytope& b,
                                    int r) {
  std::map<IntVec, bool> seen;
  auto add = [&](IntVec v) {
    if (v.empty()) return;
    IntVec neg(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
    seen[std::move(v)] = true;
    seen[std::move(neg)] = true;
  };
  for (int i = 0; i < r; ++i) {
    IntVec e(r, Int(0));
    e[i] = 1;
    add(std::move(e));
  }
  if (r == 2) {
    for (const Polytope* p : {&a, &b}) {
      const auto& vs = p->vertices();
      for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
          RatVec d = vsub(vs[j], vs[i]);
          add(primitive_of(RatVec{-d[1], d[0]}));
        }
    }
  }
  std::vector<IntVec> out;
  out.reserve(seen.size());
  for (auto& [v, _] : seen) out.push_back(v);
  return out;
}

// Every vertex of `inner` expressible as a convex combination of `points`?
bool vertices_in_convex_hull(const Polytope& inner,
                             const std::vector<IntVec>& points, int r) {
  for (const RatVec& p : inner.vertices()) {
    std::vector<LPConstraint> rows;
    for (int d = 0; d < r; ++d) {
      RatVec row(points.size());
      for (std::size_t j = 0; j < points.size(); ++j)
        row[j] = Rat(points[j][d]);
      rows.push_back({std::move(row), Rel::EQ, p[d]});
    }
    rows.push_back({RatVec(points.size(), Rat(1)), Rel::EQ, Rat(1)});
    if (!lp_feasible(points.size(), rows, /*nonneg=*/true)) return false;
  }
  return true;
}

}  // namespace

BoundednessReport bounded_below_torus(const LogNormFunction& f) {
  BoundednessReport rep;
  rep.scan_min = Rat(0);
  rep.witness_value = Rat(0);
  if (f.terms.empty()) {
    rep.bounded = rep.inclusion = rep.fan_scan = rep.feasibility = true;
    return rep;
  }
  const int r = f.rank();
  if (r > 2)
    throw domain_error("rank above two is not supported by the boundedness decision");
  ClearedPair pair = clear_denominators(f);
  const Polytope& pv = pair.positive.weight_polytope();
  const Polytope& pw = pair.negative.weight_polytope();

  rep.inclusion = polytope_contains(pv, pw);

  bool first = true;
  OneParamSubgroup argmin;
  for (const IntVec& lam : scan_directions(pv, pw, r)) {
    Rat val = fNA(f, lam);
    if (first || val < rep.scan_min) {
      rep.scan_min = val;
      argmin = lam;
      first = false;
    }
  }
  rep.fan_scan = rep.scan_min >= 0;

  rep.feasibility = vertices_in_convex_hull(pw, pair.positive.weights(), r);

  if (rep.inclusion != rep.fan_scan || rep.inclusion != rep.feasibility)
    throw consistency_error("boundedness routes disagree");
  rep.bounded = rep.inclusion;
  if (!rep.bounded) {
    rep.witness = argmin;
    rep.witness_value = rep.scan_min;
  }
  return rep;
}

namespace {

double gaussian(std::mt19937_64& rng) {
  // Box-Muller from explicit 53-bit uniforms, reproducible across library
  // implementations.
  double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
  double u2 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

Eigen::MatrixXcd haar_unitary(int n, std::mt19937_64& rng) {
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = std::complex<double>(gaussian(rng), gaussian(rng)) *
                std::sqrt(0.5);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd rmat = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    std::complex<double> d = rmat(j, j);
    if (std::abs(d) > 0) q.col(j) *= std::conj(d) / std::abs(d);
  }
  return q;
}

WeightedVector rotate_vector(const WeightedVector& v,
                             const Eigen::MatrixXcd& q) {
  const int n = v.components();
  Eigen::VectorXcd c(n);
  for (int i = 0; i < n; ++i) c(i) = v.norms()[i];
  Eigen::VectorXcd rc = q * c;
  double top = 0;
  for (int i = 0; i < n; ++i) top = std::max(top, std::abs(rc(i)));
  std::vector<IntVec> w;
  VecD nrm;
  for (int i = 0; i < n; ++i) {
    double a = std::abs(rc(i));
    if (a > 1e-13 * top) {
      w.push_back(v.weights()[i]);
      nrm.push_back(a);
    }
  }
  return WeightedVector(std::move(w), std::move(nrm));
}

}  // namespace

ConjugationReport conjugated_probe(const LogNormFunction& f, int trials,
                                   unsigned long long seed) {
  if (trials < 0) throw input_error("trial count must be nonnegative");
  ConjugationReport rep;
  rep.trials = trials;
  // Terms with identical weight data share one rotation, so equal vectors
  // stay equal after the rotation.
  std::vector<int> group(f.terms.size());
  for (std::size_t i = 0; i < f.terms.size(); ++i) {
    group[i] = static_cast<int>(i);
    for (std::size_t j = 0; j < i; ++j)
      if (f.terms[j].vec.weights() == f.terms[i].vec.weights() &&
          f.terms[j].vec.norms() == f.terms[i].vec.norms()) {
        group[i] = group[j];
        break;
      }
  }
  for (int t = 0; t <= trials; ++t) {
    LogNormFunction ft;
    if (t == 0) {
      ft = f;  // identity rotation
    } else {
      std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL *
                                     static_cast<unsigned long long>(t));
      std::map<int, WeightedVector> rotated;
      for (std::size_t i = 0; i < f.terms.size(); ++i) {
        if (!rotated.count(group[i])) {
          Eigen::MatrixXcd q =
              haar_unitary(f.terms[i].vec.components(), rng);
          rotated.emplace(group[i], rotate_vector(f.terms[i].vec, q));
        }
        ft.terms.push_back({f.terms[i].coeff, rotated.at(group[i])});
      }
    }
    BoundednessReport b = bounded_below_torus(ft);
    double m = to_double(b.scan_min);
    if (t == 0) {
      rep.bounded = b.bounded;
      rep.stable = true;
      rep.min_fna = m;
    } else {
      rep.stable = rep.stable && (b.bounded == rep.bounded);
      rep.min_fna = std::min(rep.min_fna, m);
    }
    if (b.bounded) ++rep.bounded_count;
  }
  return rep;
}

PotentialPtr bergman_map(const PotentialPtr& u, long long m) {
  if (!u) throw input_error("null potential");
  if (m < 1) throw input_error("bergman scale must be a positive integer");
  const MomentPolytope& P = u->polytope();
  if (P.n() != 1)
    throw input_error(
        "bergman projection supports one-dimensional moment polytopes");
  if (!P.is_lattice())
    throw input_error("bergman projection requires a lattice moment polytope");
  std::vector<RatVec> exps = P.dilate(m).lattice_points();
  const double vol = to_double(P.vol());
  const auto& verts = P.poly().vertices();
  double mid = 0.5 * (to_double(verts.front()[0]) + to_double(verts.back()[0]));
  double center = u->x_of_y({mid})[0];

  VecD gram(exps.size());
  for (std::size_t k = 0; k < exps.size(); ++k) {
    double kk = to_double(exps[k][0]);
    auto integrand = [&](double x) {
      double h = u->hess({x})[0][0];
      if (!(h > 0)) return 0.0;
      return std::exp(2.0 * kk * x - 2.0 * m * u->u({x})) * h;
    };
    QuadResult res = integrate_real_line(integrand, center);
    gram[k] = res.value / vol;
    if (!(gram[k] > 0) || !std::isfinite(gram[k]))
      throw consistency_error("gram matrix integration failed");
  }
  double lo = gram[0], hi = gram[0];
  for (double g : gram) lo = std::min(lo, g), hi = std::max(hi, g);
  double cond = hi / lo;
  if (cond > 1e12) {
    std::ostringstream os;
    os << "ill-conditioned gram matrix: condition number " << std::scientific
       << std::setprecision(2) << cond;
    throw domain_error(os.str());
  }
  VecD logw(gram.size());
  for (std::size_t k = 0; k < gram.size(); ++k) logw[k] = -std::log(gram[k]);
  RatMat exp_rows(exps.begin(), exps.end());
  return std::make_shared<LsePotential>(std::move(exp_rows), std::move(logw),
                                        m);
}

RicciBoundReport ricci_bound_check(const PotentialPtr& u, int m, double radius,
                                   int points_per_dim) {
  if (!u) throw input_error("null potential");
  if (m < 1) throw input_error("scale must be a positive integer");
  RicciBoundReport rep;
  rep.bound =
      static_cast<double>(m) *
      static_cast<double>(u->polytope().dilate(m).lattice_points().size());
  rep.max_scalar = -1e300;
  const int n = u->dim();
  auto consider = [&](const VecD& x) {
    MatD h = u->hess(x);
    double d = h.size() == 1 ? h[0][0]
                             : h[0][0] * h[1][1] - h[0][1] * h[1][0];
    if (!(d > 1e-6)) {  // same noise floor as ricci_bound_violation
      ++rep.skipped;
      return;
    }
    double s = FunctionalEngine::scalar_curvature(*u, x);
    if (s > rep.max_scalar) {
      rep.max_scalar = s;
      rep.argmax = x;
    }
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
  if (rep.argmax.empty())
    throw domain_error("curvature grid entirely below the resolvability floor");
  rep.violation = std::max(0.0, rep.max_scalar - rep.bound);
  rep.ok = rep.violation <= 1e-8;
  return rep;
}

}  // namespace toric
