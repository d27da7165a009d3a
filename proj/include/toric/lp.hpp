#pragma once

#include <cstddef>
#include <vector>

#include "toric/rational.hpp"

namespace toric {

enum class Rel { LE, GE, EQ };

struct LPConstraint {
  RatVec a;
  Rel rel;
  Rat b;
};

// Minimize c.x subject to the listed constraints. Variables are free unless
// nonneg is set, in which case all variables are constrained to x >= 0.
struct LPProblem {
  std::size_t nvars = 0;
  RatVec c;
  std::vector<LPConstraint> rows;
  bool nonneg = false;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  RatVec x;      // optimal point when status == Optimal
  Rat value{0};  // optimal objective value when status == Optimal
};

// Exact two-phase primal simplex with Bland's anticycling rule.
LPSolution solve_lp(const LPProblem& p);

// Convenience: feasibility of the constraint system (objective 0).
bool lp_feasible(std::size_t nvars, const std::vector<LPConstraint>& rows,
                 bool nonneg);

}  // namespace toric
