#include "toric/lp.hpp"

#include <algorithm>
#include <cstddef>

#include "toric/errors.hpp"

namespace toric {

namespace {

// Dense simplex tableau over exact rationals.
//   rows 0..m-1 : [ A | b ] with the identity embedded at the basis columns
//   cost row    : reduced costs | -objective
struct Tableau {
  std::size_t m = 0, n = 0;         // constraints, structural columns
  std::size_t n_enterable = 0;      // columns eligible to enter the basis
  std::vector<RatVec> a;            // m x (n+1)
  RatVec z;                         // n+1 reduced-cost row
  std::vector<std::size_t> basis;   // m basic column indices

  void pivot(std::size_t pr, std::size_t pc) {
    Rat inv = Rat(1) / a[pr][pc];
    for (std::size_t j = 0; j <= n; ++j) a[pr][j] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == pr || a[i][pc] == 0) continue;
      Rat f = a[i][pc];
      for (std::size_t j = 0; j <= n; ++j) a[i][j] -= f * a[pr][j];
    }
    if (z[pc] != 0) {
      Rat f = z[pc];
      for (std::size_t j = 0; j <= n; ++j) z[j] -= f * a[pr][j];
    }
    basis[pr] = pc;
  }

  // Bland's rule; returns true if optimal, false if unbounded.
  bool iterate(bool* unbounded) {
    *unbounded = false;
    for (;;) {
      std::size_t pc = n;
      for (std::size_t j = 0; j < n_enterable; ++j)
        if (z[j] < 0) { pc = j; break; }
      if (pc == n) return true;  // optimal
      std::size_t pr = m;
      for (std::size_t i = 0; i < m; ++i) {
        if (a[i][pc] <= 0) continue;
        if (pr == m) { pr = i; continue; }
        Rat cur = a[i][n] / a[i][pc];
        Rat best = a[pr][n] / a[pr][pc];
        if (cur < best || (cur == best && basis[i] < basis[pr])) pr = i;
      }
      if (pr == m) { *unbounded = true; return false; }
      pivot(pr, pc);
    }
  }
};

}  // namespace

LPSolution solve_lp(const LPProblem& p) {
  const std::size_t nv = p.nvars;
  if (p.c.size() != nv) throw input_error("objective size mismatch");
  for (const auto& r : p.rows)
    if (r.a.size() != nv) throw input_error("constraint size mismatch");

  // Standard form: split free variables into positive and negative parts,
  // append one slack per inequality.
  const std::size_t nstruct = p.nonneg ? nv : 2 * nv;
  std::size_t nslack = 0;
  for (const auto& r : p.rows)
    if (r.rel != Rel::EQ) ++nslack;

  const std::size_t m = p.rows.size();
  const std::size_t ncols = nstruct + nslack;

  Tableau t;
  t.m = m;
  t.n = ncols + m;  // + artificials
  t.a.assign(m, RatVec(t.n + 1, Rat(0)));
  t.basis.assign(m, 0);

  auto put_struct = [&](std::size_t row, std::size_t var, const Rat& coef) {
    if (p.nonneg) {
      t.a[row][var] += coef;
    } else {
      t.a[row][2 * var] += coef;
      t.a[row][2 * var + 1] -= coef;
    }
  };

  std::size_t slack_at = nstruct;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& r = p.rows[i];
    for (std::size_t v = 0; v < nv; ++v)
      if (r.a[v] != 0) put_struct(i, v, r.a[v]);
    Rat rhs = r.b;
    if (r.rel == Rel::LE) t.a[i][slack_at++] = 1;
    if (r.rel == Rel::GE) t.a[i][slack_at++] = -1;
    t.a[i][t.n] = rhs;
    if (t.a[i][t.n] < 0)
      for (std::size_t j = 0; j <= t.n; ++j) t.a[i][j] = -t.a[i][j];
    // artificial basis
    t.a[i][ncols + i] = 1;
    t.basis[i] = ncols + i;
  }

  // Phase 1: minimize the sum of artificials.
  t.n_enterable = t.n;
  t.z.assign(t.n + 1, Rat(0));
  for (std::size_t j = ncols; j < t.n; ++j) t.z[j] = 1;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= t.n; ++j) t.z[j] -= t.a[i][j];

  bool unbounded = false;
  t.iterate(&unbounded);  // phase 1 is always bounded below by 0

  LPSolution sol;
  if (-t.z[t.n] > 0) {
    sol.status = LPStatus::Infeasible;
    return sol;
  }

  // Drive any remaining artificials out of the basis (they sit at level 0).
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis[i] < ncols) continue;
    std::size_t pc = ncols;
    for (std::size_t j = 0; j < ncols; ++j)
      if (t.a[i][j] != 0) { pc = j; break; }
    if (pc < ncols) t.pivot(i, pc);
    // else: redundant row; harmless to keep with its zero-level artificial.
  }

  // Phase 2 objective; artificial columns may no longer enter the basis.
  t.n_enterable = ncols;
  t.z.assign(t.n + 1, Rat(0));
  for (std::size_t v = 0; v < nv; ++v) {
    if (p.c[v] == 0) continue;
    if (p.nonneg) {
      t.z[v] = p.c[v];
    } else {
      t.z[2 * v] = p.c[v];
      t.z[2 * v + 1] = -p.c[v];
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t bj = t.basis[i];
    if (t.z[bj] == 0) continue;
    Rat f = t.z[bj];
    for (std::size_t j = 0; j <= t.n; ++j) t.z[j] -= f * t.a[i][j];
  }

  t.iterate(&unbounded);
  if (unbounded) {
    sol.status = LPStatus::Unbounded;
    return sol;
  }

  RatVec xs(ncols, Rat(0));
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis[i] < ncols) xs[t.basis[i]] = t.a[i][t.n];

  sol.status = LPStatus::Optimal;
  sol.x.assign(nv, Rat(0));
  for (std::size_t v = 0; v < nv; ++v)
    sol.x[v] = p.nonneg ? xs[v] : xs[2 * v] - xs[2 * v + 1];
  sol.value = 0;
  for (std::size_t v = 0; v < nv; ++v) sol.value += p.c[v] * sol.x[v];
  return sol;
}

bool lp_feasible(std::size_t nvars, const std::vector<LPConstraint>& rows,
                 bool nonneg) {
  LPProblem p;
  p.nvars = nvars;
  p.c.assign(nvars, Rat(0));
  p.rows = rows;
  p.nonneg = nonneg;
  return solve_lp(p).status == LPStatus::Optimal;
}

}  // namespace toric
