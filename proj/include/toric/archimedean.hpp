#pragma once

// Energy functionals of torus-invariant Kähler metrics, computed through the
// convex potential u on R^n and its gradient/Legendre data on the moment
// polytope P.  All bulk integrals are parametrized over P (1D adaptive
// Gauss–Kronrod, 2D triangulated Gauss product rules); results carry a
// quadrature error estimate.

#include <vector>

#include "toric/potential.hpp"
#include "toric/quadrature.hpp"

namespace toric {

// Mixed discriminant normalized so that md(A,...,A) = det A.
// Sizes 1 and 2 (the ambient dimensions the engine integrates over).
double mixed_discriminant(const MatD& a, const MatD& b);

struct FunctionalReport {
  double energy = 0;      // E
  double j_norm = 0;      // J
  double i_norm = 0;      // I
  double entropy = 0;     // H
  double ricci_energy = 0;  // R
  double mabuchi = 0;     // M = H + R + sbar*E
  double sbar = 0;
  double volume = 0;
  double quad_error = 0;  // accumulated absolute quadrature error estimate
};

class FunctionalEngine {
 public:
  // Both potentials must share the same moment polytope (exact vertex match).
  FunctionalEngine(PotentialPtr u, PotentialPtr ref);

  const MomentPolytope& moment() const { return u_->polytope(); }
  int dim() const { return n_; }
  double volume() const { return vol_; }
  double mean_scalar_curvature() const { return sbar_; }

  double energy() const;        // E
  double j_norm() const;        // J
  double i_norm() const;        // I
  double entropy() const;       // H (needs hessians only)
  double ricci_energy() const;  // R (needs 3rd/4th derivatives of ref)
  double mabuchi() const;       // H + R + sbar*E

  // Energy of u against the (1,1)-form with local potential psi.
  double twisted_energy(const ToricPotential& psi) const;

  FunctionalReport report() const;

  double quad_error() const { return err_; }

  // Pointwise scalar curvature of a potential at x (needs 3rd/4th derivs).
  static double scalar_curvature(const ToricPotential& u, const VecD& x);

 private:
  double integrate_over_P(const std::function<double(const VecD&)>& f,
                          const std::vector<double>& extra_breaks = {}) const;
  double pairing_at_ref(const std::function<double(const VecD&, const VecD&)>&
                            weight) const;  // ∫ (u-ref)(x_ref(y)) * w(y,x) dy / vol

  PotentialPtr u_, ref_;
  int n_;
  double vol_, sbar_;
  mutable double err_ = 0;
};

// Ding functionals on a polytope admitting a reflexive translate t
// (<nu_F, t> = rhs_F + 1 for every facet); throws domain_error
// "not anticanonical" otherwise.  ding_l(ref) = 0 by construction.
struct DingReport {
  double l_part = 0;   // L
  double energy = 0;   // E
  double ding = 0;     // D = L - E
  double quad_error = 0;
};
DingReport ding_functionals(PotentialPtr u, PotentialPtr ref);

// Central finite difference of a functional along a bump direction against
// its predicted variational pairing.
struct VariationalCheck {
  double finite_difference = 0;
  double pairing = 0;
};
// dE/dt at t=0 along u + t*w  vs  (1/vol) ∫ w(x_u(y)) dy.
VariationalCheck energy_variation_check(
    const PotentialPtr& base, const PotentialPtr& ref,
    const std::vector<BumpPotential::Bump>& w, double t);
// dM/dt at t=0 along u + t*w  vs  (1/vol) ∫ (sbar - S(x_u(y))) w(x_u(y)) dy.
VariationalCheck mabuchi_variation_check(
    const PotentialPtr& base, const PotentialPtr& ref,
    const std::vector<BumpPotential::Bump>& w, double t);

// Grid sup of |a - b| over [-radius, radius]^n.
double sup_difference(const ToricPotential& a, const ToricPotential& b,
                      double radius, int points_per_dim);

// Stability of J and M under a uniform change of potential, with J and M
// measured against the canonical reference of the shared polytope:
//   |J(u) - J(v)| <= 2 sup|u - v|,
//   M(u) >= M(v) - 2 n C sup|u - v|,
// where C is a grid upper bound for the Ricci form of v against its metric
// (the effective constant follows from splitting Ric(v) <= C dd^c v into a
// difference of positive measures inside the Ricci-energy pairing).
struct ShiftInequalityReport {
  double sup_diff = 0;        // sup|u - v| over the grid
  double j_diff = 0;          // |J(u) - J(v)|
  double j_bound = 0;         // 2 sup|u - v|
  double ricci_constant = 0;  // C: grid max eigenvalue of (D^2 v)^{-1} Ric(v)
  double m_drop = 0;          // M(u) - M(v)
  double m_bound = 0;         // -2 n C sup|u - v|
  bool ok = false;            // both inequalities hold up to tol
};
ShiftInequalityReport shift_inequality_check(const PotentialPtr& u,
                                             const PotentialPtr& v,
                                             double radius = 8.0,
                                             int points_per_dim = 200,
                                             double tol = 1e-6);

// Largest violation max(0, max_grid S_u - m * #(mP ∩ Z^n)) of the pointwise
// curvature bound for potentials built from degree-m lattice data. Grid
// points where det D^2 u < 1e-6 are skipped: there the curvature formula
// amplifies rounding noise past the 1e-8 certification threshold.
double ricci_bound_violation(const ToricPotential& u, int m, double radius,
                             int points_per_dim);

}  // namespace toric
