#include "toric/snc.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "toric/errors.hpp"
#include "toric/quadrature.hpp"

namespace toric {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void validate_model(const SncModel& m) {
  if (m.n < 1) throw input_error("fiber dimension must be at least one");
  if (m.n > 3)
    throw input_error("fiber dimension above three is not supported");
  if (m.p < 0 || m.p > m.n)
    throw input_error("dual-complex dimension must lie between 0 and n");
  if (static_cast<int>(m.b.size()) != m.p + 1)
    throw input_error("the model needs exactly p+1 multiplicities");
  for (long long bj : m.b)
    if (bj < 1) throw input_error("multiplicities must be positive integers");
  if (!(m.eps > 0) || !(m.eps < 1))
    throw input_error("model scale must lie in (0, 1)");
}

double log_scale(const SncModel& m, double tau) {
  if (!(tau > 0)) throw input_error("tau must be positive");
  if (!(tau < m.eps) || m.eps * tau > 0.5)
    throw domain_error("degenerate fiber: tau too close to the model scale");
  return std::log(1.0 / (m.eps * tau));
}

// Evaluate the twist summed over the b_0 branches of the determined
// coordinate, each carrying the parametrization weight 1/b_0^2. `s` holds
// the log-radii s_1..s_p, `theta` the free angles, `disc` the polydisc
// coordinates.
double branch_sum(const SncModel& m, double big_l, const double* s,
                  const double* theta,
                  const std::complex<double>* disc) {
  const long long b0 = m.b[0];
  if (!m.twist) return 1.0 / static_cast<double>(b0);
  double sum_bs = 0, sum_btheta = 0;
  for (int i = 1; i <= m.p; ++i) {
    sum_bs += static_cast<double>(m.b[i]) * s[i - 1];
    sum_btheta += static_cast<double>(m.b[i]) * theta[i - 1];
  }
  double t0 = (big_l - sum_bs) / static_cast<double>(b0);
  double rho0 = std::exp(-std::max(t0, 0.0));
  std::vector<std::complex<double>> z(m.n + 1);
  for (int i = 1; i <= m.p; ++i)
    z[i] = std::exp(-s[i - 1]) *
           std::complex<double>(std::cos(theta[i - 1]), std::sin(theta[i - 1]));
  for (int j = 0; j < m.n - m.p; ++j) z[m.p + 1 + j] = disc[j];
  double acc = 0;
  for (long long r = 0; r < b0; ++r) {
    double th0 = (kTwoPi * static_cast<double>(r) - sum_btheta) /
                 static_cast<double>(b0);
    z[0] = rho0 * std::complex<double>(std::cos(th0), std::sin(th0));
    acc += m.twist(z);
  }
  return acc / static_cast<double>(b0 * b0);
}

// One quadrature axis in a unit variable, with node values and weights
// already mapped to the target coordinate.
struct Axis {
  std::vector<double> node, weight;
};

Axis gauss_axis_01() {
  Axis a;
  for (const auto& [x, w] : gauss_legendre(32)) {
    a.node.push_back(0.5 * (x + 1.0));
    a.weight.push_back(0.5 * w);
  }
  return a;
}

Axis uniform_angle_axis() {
  Axis a;
  const int k = 32;
  for (int i = 0; i < k; ++i) {
    a.node.push_back(kTwoPi * (i + 0.5) / k);
    a.weight.push_back(kTwoPi / k);
  }
  return a;
}

}  // namespace

double fiber_volume(const SncModel& m, double tau, unsigned long long seed) {
  validate_model(m);
  const double big_l = log_scale(m, tau);
  const int p = m.p, discs = m.n - m.p;

  if (m.n <= 2) {
    // Tensor product over unit variables: p simplex coordinates (cascaded,
    // with the running Jacobian), p angles, and (r, phi) per disc factor.
    const Axis g01 = gauss_axis_01(), ang = uniform_angle_axis();
    std::vector<double> s(p), theta(p);
    std::vector<std::complex<double>> disc(discs);
    double total = 0;

    // Recursive tensor loop: axes ordered s_1..s_p, theta_1..theta_p,
    // (r_1, phi_1), ..., (r_discs, phi_discs).
    const int naxes = 2 * p + 2 * discs;
    std::function<void(int, double, double)> walk = [&](int axis, double w,
                                                        double budget) {
      if (axis == naxes) {
        total += w * branch_sum(m, big_l, s.data(), theta.data(), disc.data());
        return;
      }
      if (axis < p) {  // simplex coordinate s_{axis+1}
        double span = budget / static_cast<double>(m.b[axis + 1]);
        for (std::size_t i = 0; i < g01.node.size(); ++i) {
          s[axis] = span * g01.node[i];
          walk(axis + 1, w * span * g01.weight[i],
               budget - static_cast<double>(m.b[axis + 1]) * s[axis]);
        }
      } else if (axis < 2 * p) {  // free angle
        for (std::size_t i = 0; i < ang.node.size(); ++i) {
          theta[axis - p] = ang.node[i];
          walk(axis + 1, w * ang.weight[i], budget);
        }
      } else if ((axis - 2 * p) % 2 == 0) {  // disc radius, density r dr
        int d = (axis - 2 * p) / 2;
        for (std::size_t i = 0; i < g01.node.size(); ++i) {
          disc[d] = g01.node[i];
          walk(axis + 1, w * g01.node[i] * g01.weight[i], budget);
        }
      } else {  // disc angle
        int d = (axis - 2 * p) / 2;
        double r = disc[d].real();
        for (std::size_t i = 0; i < ang.node.size(); ++i) {
          disc[d] = r * std::complex<double>(std::cos(ang.node[i]),
                                             std::sin(ang.node[i]));
          walk(axis + 1, w * ang.weight[i], budget);
        }
      }
    };
    walk(0, 1.0, big_l);
    return total;
  }

  // n = 3: Monte-Carlo with explicit 53-bit uniforms, deterministic per seed.
  std::mt19937_64 rng(seed);
  auto uni = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53; };
  const std::size_t samples = 1000000;
  // Domain measure: simplex volume L^p/(p! prod_{i>=1} b_i), angle torus
  // (2 pi)^p, each disc pi.
  double measure = 1.0;
  for (int i = 1; i <= p; ++i)
    measure *= big_l / (static_cast<double>(m.b[i]) * i);
  for (int i = 0; i < p; ++i) measure *= kTwoPi;
  for (int j = 0; j < discs; ++j) measure *= kTwoPi / 2.0;
  std::vector<double> s(p), theta(p), e(p + 1);
  std::vector<std::complex<double>> disc(discs);
  double acc = 0;
  for (std::size_t it = 0; it < samples; ++it) {
    double esum = 0;
    for (double& ei : e) {
      ei = -std::log(uni());
      esum += ei;
    }
    for (int i = 0; i < p; ++i)
      s[i] = big_l * e[i] / (esum * static_cast<double>(m.b[i + 1]));
    for (int i = 0; i < p; ++i) theta[i] = kTwoPi * uni();
    for (int j = 0; j < discs; ++j) {
      double r = std::sqrt(uni()), phi = kTwoPi * uni();
      disc[j] = r * std::complex<double>(std::cos(phi), std::sin(phi));
    }
    acc += branch_sum(m, big_l, s.data(), theta.data(), disc.data());
  }
  return measure * acc / static_cast<double>(samples);
}

ExponentFit exponent_fit(const SncModel& m, const std::vector<double>& taus,
                         unsigned long long seed) {
  validate_model(m);
  if (taus.size() < 4) throw input_error("exponent fit needs at least four tau values");
  double lo = taus[0], hi = taus[0];
  for (double t : taus) {
    if (!(t > 0)) throw input_error("tau must be positive");
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  if (std::log10(hi / lo) < 6.0 - 1e-9)
    throw input_error("exponent fit needs a tau grid spanning at least six decades");
  ExponentFit out;
  for (double t : taus) {
    out.log_l.push_back(std::log(std::log(1.0 / (m.eps * t))));
    out.log_vol.push_back(std::log(fiber_volume(m, t, seed)));
  }
  const std::size_t k = taus.size();
  double xbar = 0, ybar = 0;
  for (std::size_t i = 0; i < k; ++i) xbar += out.log_l[i], ybar += out.log_vol[i];
  xbar /= k;
  ybar /= k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (out.log_l[i] - xbar) * (out.log_l[i] - xbar);
    sxy += (out.log_l[i] - xbar) * (out.log_vol[i] - ybar);
  }
  // The decade guard forces distinct log L values, so sxx > 0.
  out.dhat = sxy / sxx;
  double intercept = ybar - out.dhat * xbar;
  for (std::size_t i = 0; i < k; ++i)
    out.residual = std::max(
        out.residual,
        std::abs(out.log_vol[i] - (intercept + out.dhat * out.log_l[i])));
  out.warn = out.residual > 0.05;
  return out;
}

double sandwich_ratio(const SncModel& m, const std::vector<double>& taus,
                      unsigned long long seed) {
  validate_model(m);
  if (taus.empty()) throw input_error("the sandwich check needs tau values");
  double lo = 1e300, hi = -1e300;
  for (double t : taus) {
    double big_l = std::log(1.0 / (m.eps * t));
    double ratio = fiber_volume(m, t, seed) / std::pow(big_l, m.p);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return hi / lo;
}

}  // namespace toric
