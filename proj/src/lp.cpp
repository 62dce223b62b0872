#include "blame/lp.hpp"

#include <cmath>
#include <stdexcept>

namespace blame {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kFeasibilityTol = 1e-9;
constexpr double kClipTol = 1e-12;
constexpr double kPinSlack = 1e-9;
constexpr long kMaxPivots = 1'000'000;

class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp) : n_(static_cast<int>(lp.objective.size())) {
    m_ = static_cast<int>(lp.constraints.size());
    int artificials = 0;
    for (const auto& c : lp.constraints) {
      if (static_cast<int>(c.coeffs.size()) != n_) {
        throw std::invalid_argument("LinearProgram: constraint dimension mismatch");
      }
      if (!std::isfinite(c.bound)) throw std::invalid_argument("LinearProgram: bound not finite");
      if (c.bound < 0.0) ++artificials;
    }
    cols_ = n_ + m_ + artificials;
    rows_.assign(m_, std::vector<double>(cols_ + 1, 0.0));
    basis_.assign(m_, 0);
    artificial_start_ = n_ + m_;
    int next_art = artificial_start_;
    for (int r = 0; r < m_; ++r) {
      const auto& c = lp.constraints[r];
      auto& row = rows_[r];
      double sign = c.bound < 0.0 ? -1.0 : 1.0;
      for (int j = 0; j < n_; ++j) row[j] = sign * c.coeffs[j];
      row[n_ + r] = sign;
      row[cols_] = sign * c.bound;
      if (c.bound < 0.0) {
        row[next_art] = 1.0;
        basis_[r] = next_art++;
      } else {
        basis_[r] = n_ + r;
      }
    }
  }

  /// Phase I: drive artificials to zero. Returns false if infeasible.
  bool phase_one() {
    if (cols_ == artificial_start_) return true;
    std::vector<double> cost(cols_, 0.0);
    for (int j = artificial_start_; j < cols_; ++j) cost[j] = -1.0;
    set_objective(cost);
    if (!optimize(cols_)) throw std::logic_error("simplex: phase one cannot be unbounded");
    if (-objective_[cols_] < -kFeasibilityTol) return false;
    // Pivot remaining zero-level artificials out of the basis.
    for (int r = 0; r < static_cast<int>(rows_.size()); ++r) {
      if (basis_[r] < artificial_start_) continue;
      int col = -1;
      for (int j = 0; j < artificial_start_; ++j) {
        if (std::abs(rows_[r][j]) > kPivotTol) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(r, col);
      } else {
        rows_.erase(rows_.begin() + r);
        basis_.erase(basis_.begin() + r);
        --r;
      }
    }
    return true;
  }

  /// Phase II. Returns false if unbounded.
  bool phase_two(const std::vector<double>& objective) {
    std::vector<double> cost(cols_, 0.0);
    for (int j = 0; j < n_; ++j) cost[j] = objective[j];
    set_objective(cost);
    return optimize(artificial_start_);
  }

  std::vector<double> point() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (basis_[r] < n_) x[basis_[r]] = rows_[r][cols_];
    }
    for (double& v : x) {
      if (v < kClipTol) v = 0.0;
    }
    return x;
  }

 private:
  void set_objective(const std::vector<double>& cost) {
    objective_.assign(cols_ + 1, 0.0);
    for (int j = 0; j < cols_; ++j) objective_[j] = cost[j];
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= cols_; ++j) objective_[j] -= cb * rows_[r][j];
    }
  }

  void pivot(int r, int col) {
    auto& prow = rows_[r];
    const double p = prow[col];
    for (double& v : prow) v /= p;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (static_cast<int>(i) == r) continue;
      double f = rows_[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j <= cols_; ++j) rows_[i][j] -= f * prow[j];
      rows_[i][col] = 0.0;
    }
    double f = objective_[col];
    if (f != 0.0) {
      for (int j = 0; j <= cols_; ++j) objective_[j] -= f * prow[j];
      objective_[col] = 0.0;
    }
    basis_[r] = col;
  }

  /// Bland's rule over columns [0, allowed). Returns false if unbounded.
  bool optimize(int allowed) {
    for (long it = 0; it < kMaxPivots; ++it) {
      int enter = -1;
      for (int j = 0; j < allowed; ++j) {
        if (objective_[j] > kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        double a = rows_[r][enter];
        if (a <= kPivotTol) continue;
        double ratio = rows_[r][cols_] / a;
        if (leave < 0 || ratio < best - kClipTol) {
          best = ratio;
          leave = static_cast<int>(r);
        } else if (ratio <= best + kClipTol && basis_[r] < basis_[leave]) {
          leave = static_cast<int>(r);
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex: pivot limit exceeded");
  }

  int n_ = 0;
  int m_ = 0;
  int cols_ = 0;
  int artificial_start_ = 0;
  std::vector<std::vector<double>> rows_;
  std::vector<int> basis_;
  std::vector<double> objective_;
};

}  // namespace

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

LpSolution solve(const LinearProgram& lp) {
  Tableau t(lp);
  LpSolution out;
  if (!t.phase_one()) {
    out.status = LpStatus::infeasible;
    return out;
  }
  if (!t.phase_two(lp.objective)) {
    out.status = LpStatus::unbounded;
    return out;
  }
  out.status = LpStatus::optimal;
  out.point = t.point();
  for (std::size_t j = 0; j < lp.objective.size(); ++j) {
    out.objective_value += lp.objective[j] * out.point[j];
  }
  return out;
}

LpSolution solve_lexicographic(const LinearProgram& lp, int tiebreak) {
  if (tiebreak < 0 || tiebreak >= static_cast<int>(lp.objective.size())) {
    throw std::out_of_range("solve_lexicographic: tiebreak variable out of range");
  }
  LpSolution primary = solve(lp);
  if (primary.status != LpStatus::optimal) return primary;
  LinearProgram pinned = lp;
  std::vector<double> negated(lp.objective.size());
  for (std::size_t j = 0; j < negated.size(); ++j) negated[j] = -lp.objective[j];
  pinned.constraints.push_back({lp.objective, primary.objective_value + kPinSlack});
  pinned.constraints.push_back({negated, -(primary.objective_value - kPinSlack)});
  pinned.objective.assign(lp.objective.size(), 0.0);
  pinned.objective[tiebreak] = 1.0;
  LpSolution secondary = solve(pinned);
  if (secondary.status != LpStatus::optimal) return primary;
  secondary.objective_value = 0.0;
  for (std::size_t j = 0; j < lp.objective.size(); ++j) {
    secondary.objective_value += lp.objective[j] * secondary.point[j];
  }
  return secondary;
}

}  // namespace blame
