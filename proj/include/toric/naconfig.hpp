#pragma once

// Exact functional invariants of the toric degeneration attached to a convex
// rational PL function f on a moment polytope P. The total space is encoded
// by the roof polytope Q = {(y, t) : y in P, 0 <= t <= height - f(y)}; the
// components of the central fiber correspond to the cells of f, carrying
// integral multiplicities, monomial weights, log discrepancies, and masses of
// the limit measure. Every quantity is an exact rational; independent
// computations of the same invariant are cross-checked and a mismatch raises
// consistency_error.

#include <vector>

#include "toric/moment.hpp"
#include "toric/pl.hpp"

namespace toric {

struct NAComponent {
  RatVec slope;     // a_i of the cell's affine <a_i, y> + c_i
  Rat offset;       // c_i
  Int multiplicity; // b_i: smallest positive integer with b_i a_i integral
  RatVec weight;    // v_i = -a_i, the component's monomial weight
  Rat log_disc;     // log discrepancy of the weight v_i
  Rat cell_volume;  // Lebesgue volume of the cell
  Rat mass;         // cell_volume / vol(P); the limit measure of the component
  Rat pairing;      // 2 avg_{cell} f - max f (metric evaluation on the weight)
};

struct ToricTestConfig {
  MomentPolytope moment;
  PLConvexFunction f;
  Rat height;       // roof height; default ceil(max f) + 1
  Polytope roof;    // Q in ambient dimension n + 1
  std::vector<NAComponent> components;
};

// Builds the configuration and verifies the structural cross-checks: masses
// sum to one, b_i times the lattice area of the i-th roof facet equals the
// cell volume, and the product-family log discrepancy of the i-th component
// equals b_i (1 + log_disc_i). The height must exceed max f.
ToricTestConfig make_config(const MomentPolytope& P, const PLConvexFunction& f);
ToricTestConfig make_config(const MomentPolytope& P, const PLConvexFunction& f,
                            const Rat& height);

// Exact integral of f over the boundary of P with respect to the lattice
// measure on the facets.
Rat boundary_lattice_integral(const MomentPolytope& P,
                              const PLConvexFunction& f);

// Monge-Ampere energy: the mean of f over P; cross-checked against the
// (n+1)-volume of the roof polytope, which must equal
// (height - energy) vol(P) exactly.
Rat na_energy(const ToricTestConfig& cfg);

Rat na_max(const ToricTestConfig& cfg);  // max of f over P
Rat na_j(const ToricTestConfig& cfg);    // max f - energy
Rat na_i(const ToricTestConfig& cfg);    // max f - sum of mass * pairing

// Entropy: sum of mass_i * log_disc_i, cross-checked against the boundary
// route through the roof polytope (facet lattice areas weighted by the
// fan support values); a mismatch raises consistency_error.
Rat na_entropy(const ToricTestConfig& cfg);

// Mabuchi slope: (1/vol P) \int_{dP} f dsigma - sbar * energy.
Rat na_mabuchi(const ToricTestConfig& cfg);

// Ricci part: mabuchi - entropy - sbar * energy.
Rat na_ricci(const ToricTestConfig& cfg);

// Donaldson-Futaki invariant: mabuchi + sum (1 - 1/b_i) mass_i. Equals the
// Mabuchi slope exactly when every multiplicity is 1.
Rat donaldson_futaki(const ToricTestConfig& cfg);

struct NADing {
  Rat l_part;  // min(max f, mabuchi + energy)
  Rat ding;    // l_part - energy = min(j_norm, mabuchi)
};
// Requires an anticanonical polarization (a reflexive lattice translate);
// otherwise throws domain_error("not anticanonical: ...").
NADing na_ding(const ToricTestConfig& cfg);

struct NAFunctionalReport {
  Rat volume;   // vol(P)
  Rat sbar;
  Rat max_f;
  Rat energy, j_norm, i_norm, entropy, ricci, mabuchi, df;
  bool has_ding = false;
  Rat l_part{0}, ding{0};
};
NAFunctionalReport na_report(const ToricTestConfig& cfg);

struct ThresholdResult {
  Rat delta;              // minimal Donaldson-Futaki value at j_norm = 1
  std::vector<Rat> nodes;   // nodes of the minimizing subdivision
  std::vector<Rat> values;  // witness nodal values (mean 0, max 1)
};

// Minimal Donaldson-Futaki value over convex PL functions supported on the
// given interior-breakpoint sets, normalized to j_norm = 1 (one-dimensional
// moment polytopes). Throws domain_error("infeasible") when the family is
// empty or no member attains the normalization.
ThresholdResult stability_threshold(
    const MomentPolytope& P, const std::vector<std::vector<Rat>>& family);

}  // namespace toric
