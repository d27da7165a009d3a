#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "toric/rational.hpp"

namespace toric {

inline Rat dot(const RatVec& a, const RatVec& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RatVec vsub(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline RatVec vadd(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline RatVec vscale(const Rat& c, const RatVec& a) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

inline RatMat mat_identity(std::size_t n) {
  RatMat m(n, RatVec(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline RatVec mat_apply(const RatMat& m, const RatVec& x) {
  RatVec r(m.size(), Rat(0));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) r[i] += m[i][j] * x[j];
  return r;
}

// Reduced row echelon form in place; returns pivot column indices.
inline std::vector<std::size_t> rref(RatMat& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  std::size_t rows = m.size(), cols = m[0].size(), r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rat inv = Rat(1) / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(RatMat m) { return rref(m).size(); }

inline Rat det(RatMat m) {
  std::size_t n = m.size();
  Rat d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return Rat(0);
    if (p != c) {
      std::swap(m[p], m[c]);
      d = -d;
    }
    d *= m[c][c];
    Rat inv = Rat(1) / m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Rat f = m[i][c] * inv;
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return d;
}

// Solves the square system A x = b exactly; nullopt if A is singular.
inline std::optional<RatVec> solve_square(RatMat a, RatVec b) {
  std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
  auto pivots = rref(a);
  // All n pivots must land in coefficient columns; a pivot in the augmented
  // column means the system is singular and inconsistent.
  if (pivots.size() != n || pivots.back() >= n) return std::nullopt;
  RatVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n];
  return x;
}

// Any solution of A x = b (possibly underdetermined); nullopt if inconsistent.
inline std::optional<RatVec> solve_general(RatMat a, const RatVec& b) {
  if (a.empty()) return RatVec{};
  std::size_t rows = a.size(), cols = a[0].size();
  for (std::size_t i = 0; i < rows; ++i) a[i].push_back(b[i]);
  auto pivots = rref(a);
  for (std::size_t i = 0; i < rows; ++i) {
    bool zero = true;
    for (std::size_t j = 0; j < cols; ++j)
      if (a[i][j] != 0) { zero = false; break; }
    if (zero && a[i][cols] != 0) return std::nullopt;
  }
  RatVec x(cols, Rat(0));
  for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = a[k][cols];
  return x;
}

inline std::optional<RatMat> mat_inverse(const RatMat& a) {
  std::size_t n = a.size();
  RatMat aug(n, RatVec(2 * n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  auto pivots = rref(aug);
  if (pivots.size() != n || pivots.back() != n - 1) return std::nullopt;
  RatMat inv(n, RatVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

// Basis of the direction (linear) space spanned by points[i] - points[0].
inline RatMat affine_direction_basis(const std::vector<RatVec>& points) {
  RatMat dirs;
  if (points.size() < 2) return dirs;
  for (std::size_t i = 1; i < points.size(); ++i)
    dirs.push_back(vsub(points[i], points[0]));
  RatMat m = dirs;
  auto pivots = rref(m);
  RatMat basis;
  for (std::size_t k = 0; k < pivots.size(); ++k) basis.push_back(m[k]);
  return basis;
}

// ---- integer lattice helpers ----

using IntVec = std::vector<Int>;

inline Int ivec_gcd(const IntVec& v) {
  Int g = 0;
  for (const Int& x : v) g = boost::multiprecision::gcd(g, x);
  return g;
}

// v / gcd(v); the zero vector is returned unchanged.
inline IntVec primitive(IntVec v) {
  Int g = ivec_gcd(v);
  if (g > 1)
    for (Int& x : v) x /= g;
  return v;
}

// Clears denominators of a rational vector to a primitive integer vector.
inline IntVec primitive_direction(const RatVec& v) {
  Int b = lattice_denominator(v);
  IntVec w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = num(v[i] * b);
  return primitive(w);
}

// Columns form a Z-basis of the lattice { xi in Z^n : <w, xi> = 0 } for an
// integer vector w. Built from a unimodular column reduction of w.
inline std::vector<IntVec> integer_kernel_basis(IntVec w) {
  std::size_t n = w.size();
  // Maintain U unimodular with w_orig * U = w_current.
  std::vector<IntVec> ucols(n, IntVec(n, Int(0)));
  for (std::size_t i = 0; i < n; ++i) ucols[i][i] = 1;
  // Gcd-sweep all entries into position 0.
  for (std::size_t j = 1; j < n; ++j) {
    while (w[j] != 0) {
      Int q = w[0] / w[j];  // truncated division is fine for the euclid loop
      // col0 -= q * colj
      w[0] -= q * w[j];
      for (std::size_t i = 0; i < n; ++i) ucols[0][i] -= q * ucols[j][i];
      std::swap(w[0], w[j]);
      std::swap(ucols[0], ucols[j]);
    }
  }
  if (w[0] < 0) {
    w[0] = -w[0];
    for (std::size_t i = 0; i < n; ++i) ucols[0][i] = -ucols[0][i];
  }
  std::vector<IntVec> basis;
  for (std::size_t j = 1; j < n; ++j) basis.push_back(ucols[j]);
  return basis;
}

// Z-basis of { xi in Z^n : <a, xi> in Z } for a rational covector a.
// Index of this sublattice in Z^n equals the lattice denominator of a.
inline std::vector<IntVec> rational_form_kernel_basis(const RatVec& a) {
  std::size_t n = a.size();
  Int b = lattice_denominator(a);
  if (b == 1) {
    std::vector<IntVec> basis(n, IntVec(n, Int(0)));
    for (std::size_t i = 0; i < n; ++i) basis[i][i] = 1;
    return basis;
  }
  // xi in Lambda  <=>  <b*a, xi> = 0 (mod b). Extend to dimension n+1 with
  // the congruence variable: kernel of (b*a | b) in Z^{n+1}, projected.
  IntVec w(n + 1);
  for (std::size_t i = 0; i < n; ++i) w[i] = num(a[i] * b);
  w[n] = b;
  auto big = integer_kernel_basis(w);
  // The projections to the first n coordinates of a kernel basis of (b*a | b)
  // generate exactly { xi : <b a, xi> in b Z }; extract n independent ones.
  RatMat m;
  for (const auto& col : big) {
    RatVec row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = Rat(col[i]);
    m.push_back(row);
  }
  // Row-reduce over Z to pick an independent generating set: use the fact
  // that the n projections of the n kernel vectors already generate; select a
  // maximal independent subset greedily (it has full rank n).
  std::vector<IntVec> basis;
  RatMat acc;
  for (const auto& col : big) {
    RatVec row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = Rat(col[i]);
    RatMat test = acc;
    test.push_back(row);
    if (rank(test) > acc.size()) {
      acc.push_back(row);
      IntVec proj(col.begin(), col.begin() + n);
      basis.push_back(proj);
      if (basis.size() == n) break;
    }
  }
  return basis;
}

}  // namespace toric
