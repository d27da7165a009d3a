#pragma once
// Volume asymptotics of a local normal-crossing degeneration
// z_0^{b_0} ... z_p^{b_p} = eps * tau inside the unit polydisc: the fiber
// mass grows like (log 1/tau)^p, with the multiplicities entering the
// constant only. The fiber is parametrized by a p-simplex of log-radii, a
// p-torus of free angles, the b_0 branches of the determined coordinate,
// and n-p unit-disc factors.

#include <complex>
#include <functional>
#include <vector>

namespace toric {

// Smooth positive weight evaluated at the reconstructed fiber coordinates
// (z_0, ..., z_n); an empty function means the flat weight 1.
using SncTwist =
    std::function<double(const std::vector<std::complex<double>>&)>;

struct SncModel {
  int n = 1;                 // fiber dimension, >= 1
  int p = 0;                 // dual-complex dimension, 0 <= p <= n
  std::vector<long long> b;  // multiplicities b_0..b_p, positive
  double eps = 0.1;          // model scale, in (0, 1)
  SncTwist twist;            // default: flat weight
};

// Mass of the fiber piece inside the polydisc at parameter tau, integrated
// in the simplex x torus x polydisc parametrization: tensor Gauss rules with
// 32 points per axis for n <= 2, seeded Monte-Carlo (1e6 samples) for n = 3.
// Requires 0 < tau < eps and eps * tau <= 1/2 (domain_error otherwise: the
// log-radius simplex collapses when the right-hand side approaches 1).
double fiber_volume(const SncModel& m, double tau,
                    unsigned long long seed = 1);

// Least-squares slope of log(volume) against log log(1/tau) over a
// geometric tau grid spanning at least six decades; the slope estimates the
// dual-complex dimension p. `warn` is set when the largest fit residual
// exceeds 0.05.
struct ExponentFit {
  double dhat = 0;      // fitted exponent
  double residual = 0;  // largest absolute fit residual
  bool warn = false;
  std::vector<double> log_l;    // abscissae log log(1/tau)
  std::vector<double> log_vol;  // ordinates log volume
};
ExponentFit exponent_fit(const SncModel& m, const std::vector<double>& taus,
                         unsigned long long seed = 1);

// max / min of volume / (log 1/tau)^p across the grid: the two-sided
// comparison constant of the asymptotics.
double sandwich_ratio(const SncModel& m, const std::vector<double>& taus,
                      unsigned long long seed = 1);

}  // namespace toric
