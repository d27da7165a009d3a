#pragma once
// Functions with logarithmic norm singularities on a torus: vectors recorded
// by the integer characters of their nonzero components, support functions of
// weight polytopes, exact slopes along one-parameter subgroups, boundedness
// decisions by three independent routes, randomized compact-group probes, and
// the Bergman projection of a toric potential onto an exponential sum.

#include <memory>
#include <vector>

#include "toric/linalg.hpp"
#include "toric/polytope.hpp"
#include "toric/potential.hpp"
#include "toric/rational.hpp"

namespace toric {

// Vector in a torus representation, stored as the characters m of its
// nonzero components together with the component norms. The weight polytope
// conv(M_v) is computed once at construction and shared across copies.
class WeightedVector {
 public:
  WeightedVector(std::vector<IntVec> weights, VecD norms);

  int rank() const { return static_cast<int>(weights_[0].size()); }
  int components() const { return static_cast<int>(weights_.size()); }
  const std::vector<IntVec>& weights() const { return weights_; }
  const VecD& norms() const { return norms_; }
  const Polytope& weight_polytope() const { return *hull_; }

  // min_m <m, lam> over the weight list (exact).
  Rat min_pairing(const RatVec& lam) const;

  // Tensor product: weights add componentwise, norms multiply; components
  // landing on the same character are merged with the Euclidean norm.
  WeightedVector tensor(const WeightedVector& other) const;
  // n-th tensor power; n = 0 gives the trivial line (weight 0, norm 1).
  WeightedVector power(long long n) const;

 private:
  std::vector<IntVec> weights_;
  VecD norms_;
  std::shared_ptr<const Polytope> hull_;
};

// h_v(lam) = max_m <m, lam>, the support function of the weight polytope.
Rat support_function(const WeightedVector& v, const RatVec& lam);

// f(g) = sum_i coeff_i * log ||g . v_i||, up to bounded terms.
struct LogNormTerm {
  Rat coeff;
  WeightedVector vec;
};
struct LogNormFunction {
  std::vector<LogNormTerm> terms;
  // Common character-lattice rank of the terms (0 when there are none).
  int rank() const;
};

// Cocharacter of the torus. A rotated direction (k, lam) with k in the
// compact group is handled by conjugated_probe, which recomputes the weight
// data of the rotated vectors rather than carrying k alongside lam.
using OneParamSubgroup = IntVec;
OneParamSubgroup cochar(std::initializer_list<long long> entries);

// Exact slope of s -> f(lam(e^{-s})): -sum_i coeff_i * min_{m} <m, lam>.
Rat fNA(const LogNormFunction& f, const OneParamSubgroup& lam);

// f(lam(e^{-s})) evaluated through a max-shifted log-sum-exp, stable for
// large s where the component magnitudes under- or overflow.
double log_norm_value(const LogNormFunction& f, const OneParamSubgroup& lam,
                      double s);

// Least-squares slope of f(lam(e^{-s})) on an integer grid s = 5..40,
// compared against the exact slope.
struct SlopeAgreement {
  double slope = 0;    // fitted numeric slope
  Rat exact;           // fNA(f, lam)
  double diff = 0;     // |slope - exact|
  bool pass = false;   // diff <= tol
};
SlopeAgreement slope_vs_fNA(const LogNormFunction& f,
                            const OneParamSubgroup& lam, double tol = 1e-3);

// Integer reduction of f: clearing the coefficient denominators by tensor
// powers writes f = (1/power) * (log||g.positive|| - log||g.negative||).
// A side with no terms is the trivial line. Throws input_error mentioning
// "clear denominators" if the tensor powers would grow past the size guard.
struct ClearedPair {
  WeightedVector positive, negative;
  Int power;
};
ClearedPair clear_denominators(const LogNormFunction& f);

// Whether inf over the torus of f is finite, decided three independent ways:
//   inclusion   — weight-polytope containment of the cleared pair,
//   fan_scan    — min of fNA over the normal-fan directions of both
//                 polytopes (the locus where fNA can kink) is >= 0,
//   feasibility — every vertex of the negative-side polytope is a convex
//                 combination of positive-side weights (exact simplex).
// The routes must agree (consistency_error otherwise). When unbounded, the
// report carries a direction with fNA < 0. Character rank at most two.
struct BoundednessReport {
  bool bounded = false;
  bool inclusion = false, fan_scan = false, feasibility = false;
  Rat scan_min;               // min of fNA over the scanned directions
  OneParamSubgroup witness;   // nonempty iff !bounded
  Rat witness_value;          // fNA at the witness (negative iff !bounded)
};
BoundednessReport bounded_below_torus(const LogNormFunction& f);

// Rotates the vectors by Haar-random unitaries (one per group of terms with
// identical weight data, so equal vectors stay equal), recomputes the weight
// data of the rotated vectors, and re-runs the boundedness decision. Trial 0
// is always the identity rotation; `trials` further samples follow. This is
// a randomized stand-in for scanning the whole compact group.
struct ConjugationReport {
  int trials = 0;        // random samples taken (identity not counted)
  bool stable = false;   // every sample returned the same verdict
  bool bounded = false;  // verdict at the identity (= torus verdict)
  int bounded_count = 0; // samples (incl. identity) judged bounded
  double min_fna = 0;    // most negative sampled fNA over scan directions
};
ConjugationReport conjugated_probe(const LogNormFunction& f, int trials = 64,
                                   unsigned long long seed = 1);

// L^2(m*u, MA(u)) projection onto exponential sums: the monomial basis on a
// one-dimensional lattice moment polytope is orthogonal by torus invariance,
// so the Gram matrix is diagonal with
//   G_kk = (1/vol P) * Integral e^{2 k x - 2 m u(x)} u''(x) dx,
// and the projected potential is (1/2m) log sum_k G_kk^{-1} e^{2 k x}.
// Throws domain_error with the condition number when max G / min G > 1e12.
PotentialPtr bergman_map(const PotentialPtr& u, long long m);

// Grid check of the curvature bound S <= m * N_m satisfied by exponential
// sums with N_m terms at scale m (the same scan as ricci_bound_violation,
// reporting the location and size of the worst value). Points where
// det D^2 u < 1e-6 are skipped and counted: the curvature formula amplifies
// rounding noise past the certification threshold there.
struct RicciBoundReport {
  double bound = 0;       // m * N_m
  double max_scalar = 0;  // largest scalar curvature seen on the grid
  VecD argmax;            // where it was attained
  double violation = 0;   // max(0, max_scalar - bound)
  int skipped = 0;        // grid points below the resolvability floor
  bool ok = false;        // violation <= 1e-8
};
RicciBoundReport ricci_bound_check(const PotentialPtr& u, int m,
                                   double radius = 8.0,
                                   int points_per_dim = 400);

}  // namespace toric
