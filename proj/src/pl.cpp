#include "toric/pl.hpp"

#include <algorithm>
#include <limits>
#include <utility>

#include "toric/errors.hpp"

namespace toric {
namespace {

Rat affine_value(const RatVec& a, const Rat& c, const RatVec& y) {
  Rat v = c;
  for (std::size_t i = 0; i < a.size(); ++i) v += a[i] * y[i];
  return v;
}

// Lebesgue volume of the intersection of two full-dimensional cells.
Rat intersection_volume(const Polytope& a, const Polytope& b) {
  const int n = a.ambient_dim();
  if (n == 1) {
    Rat lo_a = a.vertices().front()[0], hi_a = lo_a;
    for (const RatVec& v : a.vertices()) {
      lo_a = std::min(lo_a, v[0]);
      hi_a = std::max(hi_a, v[0]);
    }
    Rat lo_b = b.vertices().front()[0], hi_b = lo_b;
    for (const RatVec& v : b.vertices()) {
      lo_b = std::min(lo_b, v[0]);
      hi_b = std::max(hi_b, v[0]);
    }
    Rat lo = std::max(lo_a, lo_b), hi = std::min(hi_a, hi_b);
    return hi > lo ? Rat(hi - lo) : Rat(0);
  }
  std::vector<RatVec> poly = a.vertices();
  for (const Facet& f : b.facets()) {
    RatVec nu(f.normal.size());
    for (std::size_t i = 0; i < nu.size(); ++i) nu[i] = Rat(f.normal[i]);
    poly = clip_polygon(poly, nu, f.rhs);
    if (poly.size() < 3) return Rat(0);
  }
  Polytope cut = Polytope::hull(2, poly);
  return cut.dim() == 2 ? cut.volume() : Rat(0);
}

unsigned long long draw_u64(std::mt19937_64& rng) { return rng(); }

long long draw_int(std::mt19937_64& rng, long long lo, long long hi) {
  unsigned long long span = static_cast<unsigned long long>(hi - lo) + 1ull;
  return lo + static_cast<long long>(draw_u64(rng) % span);
}

}  // namespace

PLConvexFunction::PLConvexFunction(Polytope domain, std::vector<PLCell> cells)
    : domain_(std::move(domain)), cells_(std::move(cells)) {
  const int n = domain_.ambient_dim();
  if (n < 1 || n > 2)
    throw input_error("PL functions support ambient dimension 1 or 2");
  if (domain_.dim() != n)
    throw input_error("PL domain must be full-dimensional");
  if (cells_.empty()) throw domain_error("not semipositive: empty cell list");

  Rat total(0);
  for (const PLCell& cell : cells_) {
    if (cell.region.ambient_dim() != n ||
        static_cast<int>(cell.slope.size()) != n)
      throw input_error("PL cell dimension mismatch");
    if (cell.region.dim() != n)
      throw domain_error("not semipositive: lower-dimensional cell");
    if (!polytope_contains(domain_, cell.region))
      throw domain_error("not semipositive: cell leaves the domain");
    total += cell.region.volume();
  }
  if (total != domain_.volume())
    throw domain_error("not semipositive: cells do not tile the domain");
  for (std::size_t i = 0; i < cells_.size(); ++i)
    for (std::size_t j = i + 1; j < cells_.size(); ++j)
      if (intersection_volume(cells_[i].region, cells_[j].region) != 0)
        throw domain_error("not semipositive: overlapping cells");

  // Convexity certificate: a convex piecewise-affine function dominates each
  // of its own affine pieces globally, so every cell's affine must beat every
  // other affine at the cell's vertices. This is exact and also rules out
  // discontinuous gluings.
  for (const PLCell& cell : cells_) {
    for (const RatVec& v : cell.region.vertices()) {
      const Rat own = affine_value(cell.slope, cell.offset, v);
      for (const PLCell& other : cells_)
        if (affine_value(other.slope, other.offset, v) > own)
          throw domain_error("not semipositive: cell data is not convex");
    }
  }
}

PLConvexFunction PLConvexFunction::from_affines(
    const Polytope& domain, std::vector<std::pair<RatVec, Rat>> affines) {
  const int n = domain.ambient_dim();
  if (affines.empty()) throw input_error("no affine functions given");
  for (const auto& af : affines)
    if (static_cast<int>(af.first.size()) != n)
      throw input_error("affine function dimension mismatch");
  std::sort(affines.begin(), affines.end());
  affines.erase(std::unique(affines.begin(), affines.end()), affines.end());

  std::vector<PLCell> cells;
  if (n == 1) {
    Rat lo_p = domain.vertices().front()[0], hi_p = lo_p;
    for (const RatVec& v : domain.vertices()) {
      lo_p = std::min(lo_p, v[0]);
      hi_p = std::max(hi_p, v[0]);
    }
    for (std::size_t k = 0; k < affines.size(); ++k) {
      Rat lo = lo_p, hi = hi_p;
      bool empty = false;
      for (std::size_t j = 0; j < affines.size() && !empty; ++j) {
        if (j == k) continue;
        const Rat d = affines[k].first[0] - affines[j].first[0];
        const Rat e = affines[j].second - affines[k].second;
        if (d > 0)
          lo = std::max(lo, Rat(e / d));
        else if (d < 0)
          hi = std::min(hi, Rat(e / d));
        else if (affines[k].second < affines[j].second)
          empty = true;
      }
      if (empty || lo >= hi) continue;
      cells.push_back({Polytope::hull(1, {{lo}, {hi}}), affines[k].first,
                       affines[k].second});
    }
  } else if (n == 2) {
    for (std::size_t k = 0; k < affines.size(); ++k) {
      std::vector<RatVec> poly = domain.vertices();
      for (std::size_t j = 0; j < affines.size() && poly.size() >= 3; ++j) {
        if (j == k) continue;
        RatVec nu = {affines[k].first[0] - affines[j].first[0],
                     affines[k].first[1] - affines[j].first[1]};
        poly = clip_polygon(poly, nu, affines[j].second - affines[k].second);
      }
      if (poly.size() < 3) continue;
      Polytope region = Polytope::hull(2, poly);
      if (region.dim() != 2) continue;
      cells.push_back({std::move(region), affines[k].first, affines[k].second});
    }
  } else {
    throw input_error("PL functions support ambient dimension 1 or 2");
  }
  return PLConvexFunction(domain, std::move(cells));
}

PLConvexFunction PLConvexFunction::constant(const Polytope& domain,
                                            const Rat& c) {
  return from_affines(domain,
                      {{RatVec(domain.ambient_dim(), Rat(0)), c}});
}

Rat PLConvexFunction::value(const RatVec& y) const {
  Rat best = affine_value(cells_[0].slope, cells_[0].offset, y);
  for (std::size_t i = 1; i < cells_.size(); ++i)
    best = std::max(best, affine_value(cells_[i].slope, cells_[i].offset, y));
  return best;
}

double PLConvexFunction::value_d(const std::vector<double>& y) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const PLCell& cell : cells_) {
    double v = to_double(cell.offset);
    for (std::size_t i = 0; i < cell.slope.size(); ++i)
      v += to_double(cell.slope[i]) * y[i];
    best = std::max(best, v);
  }
  return best;
}

Rat PLConvexFunction::max_value() const {
  bool first = true;
  Rat best(0);
  for (const PLCell& cell : cells_)
    for (const RatVec& v : cell.region.vertices()) {
      Rat val = affine_value(cell.slope, cell.offset, v);
      if (first || val > best) best = val;
      first = false;
    }
  return best;
}

Rat PLConvexFunction::min_value() const {
  bool first = true;
  Rat best(0);
  for (const PLCell& cell : cells_)
    for (const RatVec& v : cell.region.vertices()) {
      Rat val = affine_value(cell.slope, cell.offset, v);
      if (first || val < best) best = val;
      first = false;
    }
  return best;
}

Rat PLConvexFunction::average() const {
  Rat sum(0);
  for (const PLCell& cell : cells_)
    sum += affine_value(cell.slope, cell.offset, cell.region.centroid()) *
           cell.region.volume();
  return sum / domain_.volume();
}

PLConvexFunction PLConvexFunction::scaled(const Rat& d) const {
  if (d <= 0) throw input_error("PL scaling requires a positive factor");
  std::vector<PLCell> cells = cells_;
  for (PLCell& cell : cells) {
    for (Rat& a : cell.slope) a *= d;
    cell.offset *= d;
  }
  return PLConvexFunction(domain_, std::move(cells));
}

PLConvexFunction PLConvexFunction::translated(const Rat& c) const {
  std::vector<PLCell> cells = cells_;
  for (PLCell& cell : cells) cell.offset += c;
  return PLConvexFunction(domain_, std::move(cells));
}

std::vector<Rat> PLConvexFunction::breakpoints() const {
  if (n() != 1) throw input_error("breakpoints require a one-dimensional domain");
  Rat lo = domain_.vertices().front()[0], hi = lo;
  for (const RatVec& v : domain_.vertices()) {
    lo = std::min(lo, v[0]);
    hi = std::max(hi, v[0]);
  }
  std::vector<Rat> bps;
  for (const PLCell& cell : cells_)
    for (const RatVec& v : cell.region.vertices())
      if (v[0] > lo && v[0] < hi) bps.push_back(v[0]);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  return bps;
}

PLConvexFunction random_convex_pl(const Polytope& domain, std::mt19937_64& rng,
                                  int affine_count, long long range,
                                  long long max_den) {
  if (affine_count < 1) throw input_error("need at least one affine function");
  const int n = domain.ambient_dim();
  std::vector<std::pair<RatVec, Rat>> affines;
  for (int k = 0; k < affine_count; ++k) {
    RatVec a(n);
    for (int i = 0; i < n; ++i)
      a[i] = Rat(Int(draw_int(rng, -range, range)),
                 Int(draw_int(rng, 1, max_den)));
    Rat c(Int(draw_int(rng, -range, range)), Int(draw_int(rng, 1, max_den)));
    affines.emplace_back(std::move(a), std::move(c));
  }
  return PLConvexFunction::from_affines(domain, std::move(affines));
}

}  // namespace toric
