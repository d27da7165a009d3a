#pragma once

// Rays of smooth toric potentials attached to a convex PL direction, and the
// measurement of functional slopes at infinity against their exact polytope
// targets. Two constructions are provided: a Legendre-side ray (the base
// Legendre transform plus s times a calibrated direction) and a Bergman-type
// ray (exponential sums with one-parameter-subgroup weights). One-dimensional
// moment polytopes only.

#include <memory>
#include <string>
#include <vector>

#include "toric/naconfig.hpp"
#include "toric/pl.hpp"
#include "toric/potential.hpp"

namespace toric {

// The PL direction actually used by the rays: f minus the affine function
// t* y + c with t* and c chosen so that the direction's mean equals -mean(f)
// and its minimum equals -max(f). This affine normalization pins the energy
// and J slopes to their polytope targets; it is computed exactly.
struct RayDirection {
  PLConvexFunction dir;
  Rat t_star;
  Rat c_shift;
};
RayDirection calibrate_direction(const MomentPolytope& P,
                                 const PLConvexFunction& f);

struct RaySpec {
  PotentialPtr base;    // u_0; its moment polytope is the domain of f
  PLConvexFunction f;   // PL direction data (before calibration)
  std::string kind = "legendre";  // "legendre" or "bergman"
  double smoothing = 0.0;         // soft-max parameter for the PL kinks
  std::vector<double> s_grid;     // increasing; default geometric in [10,200]
};

RaySpec make_ray_spec(PotentialPtr base, PLConvexFunction f,
                      std::string kind = "legendre", double smoothing = 0.0,
                      std::vector<double> s_grid = {});

// Geometric grid with `points` samples spanning [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, int points);

// Weights of the Bergman-type ray: the minimal integer m putting every kink
// of the direction on the (1/m)-lattice, exponents m P cap Z, multiplicities
// from the m-fold sumset of P cap Z, and integral weights
// W_k = m k0 dir(k/m) with k0 minimal. A requested m that does not clear the
// kinks raises domain_error("integrality ...").
struct BergmanData {
  long long m = 1;
  long long k0 = 1;
  RatMat exponents;               // points of m P cap Z^n
  std::vector<double> log_counts; // log multiplicity per exponent
  std::vector<Rat> w;             // W_k, integral
};
BergmanData bergman_data(const MomentPolytope& P, const RayDirection& d,
                         long long requested_m = 0);

// The potential at parameter s >= 0. Legendre kind with s = 0 returns the
// base potential exactly.
PotentialPtr ray_at(const RaySpec& spec, double s);

struct SlopeSample {
  double s = 0;
  double value = 0;  // F(u_s), normalized by the ray speed for bergman kind
  double ratio = 0;  // value / s
};

struct SlopeReport {
  std::string functional;
  std::string kind;
  std::vector<SlopeSample> samples;  // successfully evaluated samples
  double slope = 0;                // least squares on the top half of s_grid
  double extrapolation_error = 0;  // top-half slope vs top-quarter slope
  Rat target;                      // exact polytope value of the functional
  bool complete = false;           // every grid point evaluated
  bool pass = false;  // |slope - target| <= max(2% |target|, 5e-3)
};

// functional is one of "E", "I", "J", "R", "M", "D" ("D" requires an
// anticanonical moment polytope).
SlopeReport measure_slope(const RaySpec& spec, const std::string& functional);

// Residual diagnostics for the Mabuchi slope: sup over the top half of the
// grid of |M(u_s) - s M_target| / log s, and the regression slope of the
// residual against log s.
struct LogCorrectionReport {
  double sup_ratio = 0;
  double residual_slope = 0;
};
LogCorrectionReport entropy_log_correction(const RaySpec& spec);

// True iff the Legendre rays induced by f and g differ at some s, i.e. the
// calibrated directions differ as PL functions (exact comparison).
bool uniqueness_probe(const MomentPolytope& P, const PLConvexFunction& f,
                      const PLConvexFunction& g);

}  // namespace toric
