#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "toric/errors.hpp"

namespace toric {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

inline Rat rat(long long n, long long d = 1) {
  if (d == 0) throw input_error("rational with zero denominator");
  return Rat(Int(n), Int(d));
}

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Largest integer <= r.
inline Int rat_floor(const Rat& r) {
  Int q = num(r) / den(r);
  if (r < 0 && q * den(r) != num(r)) --q;
  return q;
}

inline Int rat_ceil(const Rat& r) { return -rat_floor(-r); }

inline bool is_integer(const Rat& r) { return den(r) == 1; }

// Smallest b >= 1 with b*r integral.
inline Int denominator_of(const Rat& r) { return den(r); }

// Smallest b >= 1 such that b*v is an integer vector.
inline Int lattice_denominator(const RatVec& v) {
  Int b = 1;
  for (const Rat& c : v) b = boost::multiprecision::lcm(b, den(c));
  return b;
}

inline long long to_int64_checked(const Int& z, const char* what) {
  if (z > std::numeric_limits<long long>::max() ||
      z < std::numeric_limits<long long>::min())
    throw input_error(std::string("integer overflow serializing ") + what);
  return z.convert_to<long long>();
}

inline std::string rat_to_string(const Rat& r) {
  if (is_integer(r)) return num(r).str();
  return num(r).str() + "/" + den(r).str();
}

inline RatVec rat_vec(std::initializer_list<long long> xs) {
  RatVec v;
  v.reserve(xs.size());
  for (long long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace toric
