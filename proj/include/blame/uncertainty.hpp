#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "blame/attribution.hpp"
#include "blame/mmdp.hpp"
#include "blame/planning.hpp"

namespace blame {

/// Behavior policies within half-L1 distance radii[i] of the center, per
/// agent and state.
struct UncertaintySet {
  JointPolicy center;
  std::vector<double> radii;
  std::optional<JointPolicy> truth;

  double eps_max() const;
  bool contains(const JointPolicy& pi, double tol = 1e-12) const;
};

UncertaintySet make_uncertainty_set(JointPolicy center, double eps_max);
UncertaintySet make_uncertainty_set(JointPolicy center, std::vector<double> radii);

/// Draws a center uniformly from the ball slice around each truth row.
UncertaintySet sample_center(const JointPolicy& truth, double eps_max, std::uint64_t seed);
UncertaintySet sample_center(const JointPolicy& truth, std::vector<double> radii,
                             std::uint64_t seed);

/// One uniform draw from {q in simplex : |q - row|_1 / 2 <= radius}.
std::vector<double> sample_ball_row(const std::vector<double>& row, double radius,
                                    std::mt19937_64& rng);

/// Per-state joint-action bounds of the relaxed (non-factorized) set.
struct RelaxedBox {
  int num_joint = 0;
  std::vector<double> lower;  // state * num_joint + joint
  std::vector<double> upper;
};
RelaxedBox relaxed_box(const Mmdp& m, const UncertaintySet& set);

enum class RobustMode {
  exact,    // most exact path available for the model
  relaxed,  // always use the relaxed box
};

struct RobustOptions {
  RobustMode mode = RobustMode::exact;
  double tolerance = 1e-10;
  long max_iterations = 50000;
};

struct RobustResult {
  double value = 0.0;
  std::vector<double> state_values;
  /// Behavior chosen by the set's player in every state.
  JointDistribution chosen;
  /// Same choice as per-agent rows, when the path keeps it factorized.
  std::optional<JointPolicy> chosen_factored;
};

/// Lower bound on min over the set of the coalition's best-response value.
RobustResult robust_min(const Mmdp& m, const UncertaintySet& set, Coalition coalition,
                        const RobustOptions& opts = {});
/// Upper bound on max over the set of the coalition's best-response value.
RobustResult robust_max(const Mmdp& m, const UncertaintySet& set, Coalition coalition,
                        const RobustOptions& opts = {});
double robust_min_value(const Mmdp& m, const UncertaintySet& set, Coalition coalition,
                        const RobustOptions& opts = {});
double robust_max_value(const Mmdp& m, const UncertaintySet& set, Coalition coalition,
                        const RobustOptions& opts = {});

/// Robust bounds for every coalition, computed once and read concurrently.
struct RobustBounds {
  int num_agents = 0;
  std::vector<double> lower;  // robust_min_value per coalition
  std::vector<double> upper;  // robust_max_value per coalition
  RobustResult max_empty;     // maximizer for the empty coalition
};
RobustBounds compute_robust_bounds(const Mmdp& m, const UncertaintySet& set,
                                   const RobustOptions& opts = {});

BlameAssignment sv_valid(const Mmdp& m, const UncertaintySet& set, const RobustOptions& opts = {});
BlameAssignment sv_valid(const Mmdp& m, const RobustBounds& bounds);

BlameAssignment sv_blackstone(const RobustBounds& bounds);
BlameAssignment bi_blackstone(const RobustBounds& bounds);
BlameAssignment mc_blackstone(const RobustBounds& bounds);
BlameAssignment mer_blackstone(const RobustBounds& bounds, std::optional<int> tiebreak = std::nullopt);
BlameAssignment ap_blackstone(const RobustBounds& bounds);

BlameAssignment sv_blackstone(const Mmdp& m, const UncertaintySet& set,
                              const RobustOptions& opts = {});
BlameAssignment bi_blackstone(const Mmdp& m, const UncertaintySet& set,
                              const RobustOptions& opts = {});
BlameAssignment mc_blackstone(const Mmdp& m, const UncertaintySet& set,
                              const RobustOptions& opts = {});
BlameAssignment mer_blackstone(const Mmdp& m, const UncertaintySet& set,
                               std::optional<int> tiebreak = std::nullopt,
                               const RobustOptions& opts = {});
BlameAssignment ap_blackstone(const Mmdp& m, const UncertaintySet& set,
                              const RobustOptions& opts = {});

/// Lower-bound game used by the robust MER and AP variants.
CharacteristicGame robust_lower_game(const RobustBounds& bounds);

double l1_distance(const BlameAssignment& a, const BlameAssignment& b);
double total_difference(const BlameAssignment& a, const BlameAssignment& b);

}  // namespace blame
