#pragma once

#include <string>
#include <vector>

namespace blame {

/// a . x <= bound
struct LpConstraint {
  std::vector<double> coeffs;
  double bound = 0.0;
};

/// maximize objective . x  subject to the constraints and x >= 0.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<LpConstraint> constraints;
};

enum class LpStatus { optimal, infeasible, unbounded };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> point;
  double objective_value = 0.0;
};

/// Two-phase dense tableau simplex with Bland's rule.
LpSolution solve(const LinearProgram& lp);

/// Among optimizers of the primary objective, maximizes x[tiebreak].
LpSolution solve_lexicographic(const LinearProgram& lp, int tiebreak);

}  // namespace blame
