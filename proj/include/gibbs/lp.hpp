#pragma once

#include "gibbs/rational.hpp"

#include <vector>

namespace gibbs {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> x;
};

// maximize c.x subject to A x = b, x >= 0, in exact arithmetic.
// Two-phase dense simplex with Bland's rule; meant for the small programs
// arising from Newton polytopes (tens of variables).
LpResult solve_lp(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                  const std::vector<Rational>& c);

}  // namespace gibbs
