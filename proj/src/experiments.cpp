#include "blame/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "blame/io.hpp"
#include "blame/parallel.hpp"

namespace blame {

namespace {

constexpr double kConsistencyTol = 1e-9;

struct Pairing {
  const char* tag;
  Method truth;
};

// Robust method tag and the full-information method it estimates.
constexpr Pairing kPairings[] = {
    {"SV", Method::SV},    {"SV_V", Method::SV},     {"SV_BC", Method::SV}, {"BI_BC", Method::BI},
    {"MC_BC", Method::MC}, {"MER_BC", Method::MER}, {"AP_BC", Method::AP},
};

std::vector<double> attributed(const CharacteristicGame& g, std::vector<BlameAssignment>& out,
                               std::optional<int> tiebreak) {
  std::vector<double> totals;
  for (Method method : kAllMethods) {
    out.push_back(attribute(g, method, method == Method::MER ? tiebreak : std::nullopt));
    totals.push_back(out.back().total);
  }
  return totals;
}

}  // namespace

std::vector<double> alpha_prime_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(k / 10.0);
  return grid;
}

std::vector<PermRow> run_perm_experiment(const GridworldSpec& base,
                                         const std::vector<double>& alpha_primes) {
  std::vector<PermRow> rows(alpha_primes.size());
  parallel_for(alpha_primes.size(), [&](std::size_t k) {
    GridworldSpec spec = base;
    spec.alpha_prime = alpha_primes[k];
    Gridworld world = build_gridworld(spec);
    auto g = characteristic_game(world.model, world.behavior);
    rows[k].alpha_prime = alpha_primes[k];
    attributed(g, rows[k].blames, 1);
  });
  return rows;
}

void write_perm_csv(std::ostream& out, const std::vector<PermRow>& rows) {
  out << "alpha_prime," << blame_csv_header(2) << "\n";
  for (const auto& row : rows) {
    for (const auto& b : row.blames) out << format_number(row.alpha_prime) << "," << blame_csv_row(b) << "\n";
  }
}

std::vector<CoordinationRow> run_coordination_experiment(const GraphSpec& base) {
  std::vector<CoordinationRow> rows(kGraphAgents);
  parallel_for(rows.size(), [&](std::size_t k) {
    GraphSpec spec = base;
    spec.variant = GraphVariant::coordination;
    spec.m = static_cast<int>(k) + 1;
    auto [model, behavior] = build_graph(spec);
    auto g = characteristic_game(model, behavior);
    rows[k].m = spec.m;
    rows[k].delta = g.total();
    attributed(g, rows[k].blames, std::nullopt);
  });
  return rows;
}

void write_coordination_csv(std::ostream& out, const std::vector<CoordinationRow>& rows) {
  out << "m,delta,method,total\n";
  for (const auto& row : rows) {
    for (const auto& b : row.blames) {
      out << row.m << "," << format_number(row.delta) << "," << b.method << ","
          << format_number(b.total) << "\n";
    }
  }
}

std::vector<double> gridworld_eps_grid() { return {0.01, 0.05, 0.1, 0.15, 0.2}; }
std::vector<double> graph_eps_grid() { return {0.01, 0.05, 0.1}; }

const std::vector<std::string>& robust_method_tags() {
  static const std::vector<std::string> tags = [] {
    std::vector<std::string> t;
    for (const auto& p : kPairings) t.emplace_back(p.tag);
    return t;
  }();
  return tags;
}

RobustInstance gridworld_robust_instance() {
  GridworldSpec spec;
  spec.alpha = 0.2;
  spec.alpha_prime = 0.5;
  Gridworld world = build_gridworld(spec);
  // Only A_1's personal policy is uncertain.
  return {std::move(world.model), std::move(world.behavior), {1.0, 0.0}, 1};
}

RobustInstance graph_robust_instance() {
  GraphSpec spec;
  spec.variant = GraphVariant::robustness;
  auto [model, behavior] = build_graph(spec);
  return {std::move(model), std::move(behavior), std::vector<double>(kGraphAgents, 1.0),
          std::nullopt};
}

RobustnessResult run_robustness_experiment(const RobustInstance& inst,
                                           const RobustnessConfig& config) {
  const Mmdp& m = inst.model;
  RobustnessResult result;
  result.num_agents = m.num_agents();
  const auto truth_game = characteristic_game(m, inst.truth);
  result.delta = truth_game.total();
  attributed(truth_game, result.truth, inst.mer_tiebreak);

  const std::size_t levels = config.eps_levels.size();
  const std::size_t seeds = static_cast<std::size_t>(std::max(config.seeds, 0));
  const std::size_t width = std::size(kPairings);
  result.rows.resize(levels * seeds * width);
  RobustOptions opts;
  opts.mode = config.mode;

  parallel_for(levels * seeds, [&](std::size_t task) {
    const double eps = config.eps_levels[task / seeds];
    const int seed_index = static_cast<int>(task % seeds);
    std::vector<double> radii;
    for (double scale : inst.radius_scale) radii.push_back(scale * eps);
    const auto set = sample_center(inst.truth, radii, config.seed + task);
    const auto bounds = compute_robust_bounds(m, set, opts);

    auto point = shapley(characteristic_game(m, set.center));
    std::vector<BlameAssignment> estimates = {
        point,
        sv_valid(m, bounds),
        sv_blackstone(bounds),
        bi_blackstone(bounds),
        mc_blackstone(bounds),
        mer_blackstone(bounds, inst.mer_tiebreak),
        ap_blackstone(bounds),
    };
    for (std::size_t k = 0; k < width; ++k) {
      auto& row = result.rows[task * width + k];
      row.eps_max = eps;
      row.seed = seed_index;
      row.blame = std::move(estimates[k]);
      row.blame.method = kPairings[k].tag;
      const auto& truth = result.truth[static_cast<int>(kPairings[k].truth)];
      const bool totals_only = kPairings[k].truth == Method::MER && !inst.mer_tiebreak;
      if (kPairings[k].truth == Method::MER) {
        row.l1_to_truth = total_difference(row.blame, truth);
      } else {
        row.l1_to_truth = l1_distance(row.blame, truth);
      }
      if (totals_only) {
        row.consistent = row.blame.total <= truth.total + kConsistencyTol;
      } else {
        row.consistent = true;
        for (int i = 0; i < result.num_agents; ++i) {
          row.consistent = row.consistent && row.blame.blames[i] <= truth.blames[i] + kConsistencyTol;
        }
      }
    }
  });
  return result;
}

void write_robustness_csv(std::ostream& out, const RobustnessResult& result) {
  out << "method,eps_max,seed";
  for (int i = 1; i <= result.num_agents; ++i) out << ",beta_" << i;
  out << ",total,l1_to_truth,consistent\n";
  for (const auto& row : result.rows) {
    out << row.blame.method << "," << format_number(row.eps_max) << "," << row.seed;
    for (double b : row.blame.blames) out << "," << format_number(b);
    out << "," << format_number(row.blame.total) << "," << format_number(row.l1_to_truth) << ","
        << (row.consistent ? "true" : "false") << "\n";
  }
}

SummaryStat summarize(const std::vector<double>& xs) {
  SummaryStat st;
  if (xs.empty()) return st;
  for (double x : xs) st.mean += x;
  st.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - st.mean) * (x - st.mean);
    st.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return st;
}

namespace {

std::vector<const RobustnessRow*> select(const RobustnessResult& result, const std::string& method,
                                         double eps_max) {
  std::vector<const RobustnessRow*> out;
  for (const auto& row : result.rows) {
    if (row.blame.method == method && row.eps_max == eps_max) out.push_back(&row);
  }
  return out;
}

}  // namespace

double mean_total(const RobustnessResult& result, const std::string& method, double eps_max) {
  std::vector<double> xs;
  for (const auto* row : select(result, method, eps_max)) xs.push_back(row->blame.total);
  return summarize(xs).mean;
}

double mean_l1(const RobustnessResult& result, const std::string& method, double eps_max) {
  std::vector<double> xs;
  for (const auto* row : select(result, method, eps_max)) xs.push_back(row->l1_to_truth);
  return summarize(xs).mean;
}

std::vector<double> mean_blames(const RobustnessResult& result, const std::string& method,
                                double eps_max) {
  std::vector<double> out(result.num_agents, 0.0);
  for (int i = 0; i < result.num_agents; ++i) {
    std::vector<double> xs;
    for (const auto* row : select(result, method, eps_max)) xs.push_back(row->blame.blames[i]);
    out[i] = summarize(xs).mean;
  }
  return out;
}

void write_robustness_summary(std::ostream& out, const RobustnessResult& result) {
  out << "method,eps_max,seeds";
  for (int i = 1; i <= result.num_agents; ++i) out << ",beta_" << i << "_mean,beta_" << i << "_std";
  out << ",total_mean,total_std,l1_to_truth_mean,l1_to_truth_std,consistent_rate\n";
  std::vector<double> levels;
  for (const auto& row : result.rows) {
    if (std::find(levels.begin(), levels.end(), row.eps_max) == levels.end()) levels.push_back(row.eps_max);
  }
  for (const auto& tag : robust_method_tags()) {
    for (double eps : levels) {
      auto rows = select(result, tag, eps);
      if (rows.empty()) continue;
      out << tag << "," << format_number(eps) << "," << rows.size();
      for (int i = 0; i < result.num_agents; ++i) {
        std::vector<double> xs;
        for (const auto* r : rows) xs.push_back(r->blame.blames[i]);
        auto st = summarize(xs);
        out << "," << format_number(st.mean) << "," << format_number(st.stddev);
      }
      std::vector<double> totals, l1s;
      double consistent = 0.0;
      for (const auto* r : rows) {
        totals.push_back(r->blame.total);
        l1s.push_back(r->l1_to_truth);
        consistent += r->consistent;
      }
      auto t = summarize(totals);
      auto l = summarize(l1s);
      out << "," << format_number(t.mean) << "," << format_number(t.stddev) << ","
          << format_number(l.mean) << "," << format_number(l.stddev) << ","
          << format_number(consistent / static_cast<double>(rows.size())) << "\n";
    }
  }
}

}  // namespace blame
