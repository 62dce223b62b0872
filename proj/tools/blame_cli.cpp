// Command-line front end: attribution on model files, experiment reruns and
// property checks.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "blame/attribution.hpp"
#include "blame/envs.hpp"
#include "blame/experiments.hpp"
#include "blame/io.hpp"
#include "blame/properties.hpp"

namespace {

using namespace blame;

constexpr int kExitParse = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitIo = 4;

struct ExitError {
  int code;
  std::string message;
};

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& name : names) {
    if (name == "all") {
      out.assign(std::begin(kAllMethods), std::end(kAllMethods));
      continue;
    }
    auto m = parse_method(name);
    if (!m) throw ExitError{kExitParse, "unknown method '" + name + "'"};
    out.push_back(*m);
  }
  return out;
}

std::pair<Mmdp, JointPolicy> load_inputs(const std::string& model_path,
                                         const std::string& behavior_path) {
  Mmdp m;
  JointPolicy pi;
  try {
    m = load_model(model_path);
    pi = load_behavior(behavior_path);
  } catch (const ParseError& e) {
    throw ExitError{kExitParse, e.what()};
  } catch (const std::invalid_argument& e) {
    throw ExitError{kExitParse, std::string(model_path) + ": " + e.what()};
  }
  auto report = validate_mmdp(m);
  auto policy_report = validate_policy(m, pi);
  report.insert(report.end(), policy_report.begin(), policy_report.end());
  if (!report.empty()) {
    std::string msg = "invalid input:";
    for (const auto& r : report) msg += "\n  " + r;
    throw ExitError{kExitInvariant, msg};
  }
  return {std::move(m), std::move(pi)};
}

std::optional<int> tiebreak_index(int flag, int num_agents) {
  if (flag == 0) return std::nullopt;
  if (flag < 1 || flag > num_agents) throw ExitError{kExitParse, "tiebreak agent out of range"};
  return flag - 1;
}

int cmd_attribute(const std::string& model_path, const std::string& behavior_path,
                  const std::vector<std::string>& method_names, int tiebreak) {
  auto methods = parse_methods(method_names);
  auto [m, pi] = load_inputs(model_path, behavior_path);
  auto tb = tiebreak_index(tiebreak, m.num_agents());
  try {
    GameCache cache;
    std::ostringstream out;
    out << blame_csv_header(m.num_agents()) << "\n";
    for (Method method : methods) out << blame_csv_row(attribute(m, pi, method, tb, &cache)) << "\n";
    std::cout << out.str();
  } catch (const std::logic_error& e) {
    throw ExitError{kExitInvariant, e.what()};
  }
  return 0;
}

int cmd_check(const std::string& model_path, const std::string& behavior_path,
              const std::string& method_name, double eps, std::uint64_t seed) {
  auto method = parse_methods({method_name}).front();
  auto [m, pi] = load_inputs(model_path, behavior_path);
  CharacteristicGame g;
  BlameAssignment b;
  try {
    g = characteristic_game(m, pi);
    b = attribute(g, method);
  } catch (const std::logic_error& e) {
    throw ExitError{kExitInvariant, e.what()};
  }
  if (eps > 0.0) b = perturb(b, eps, seed);

  const auto hold = expected_hold(method);
  std::vector<PropertyVerdict> verdicts = {
      check_validity(g, b, eps),     check_efficiency(g, b, eps), check_rationality(g, b, eps),
      check_avg_efficiency(g, b, eps), check_symmetry(g, b, eps), check_invariance(g, b, eps),
  };
  bool ok = true;
  std::cout << kVerdictCsvHeader << ",expected\n";
  for (const auto& v : verdicts) {
    bool expected = std::find(hold.begin(), hold.end(), v.property) != hold.end();
    if (expected && !v.holds) ok = false;
    std::cout << to_csv(v) << "," << (expected ? "hold" : "-") << "\n";
  }
  return ok ? 0 : 1;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ExitError{kExitIo, "cannot write " + path.string()};
  out << content;
  if (!out) throw ExitError{kExitIo, "write failed for " + path.string()};
}

int cmd_experiment(const std::string& name, int seeds, std::uint64_t seed, std::vector<double> eps,
                   const std::string& out_dir, bool relaxed) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ExitError{kExitIo, "cannot create " + out_dir + ": " + ec.message()};
  const std::filesystem::path dir(out_dir);
  std::ostringstream csv;
  if (name == "perm") {
    write_perm_csv(csv, run_perm_experiment(GridworldSpec{}, alpha_prime_grid()));
    write_file(dir / "perm.csv", csv.str());
  } else if (name == "coordination") {
    write_coordination_csv(csv, run_coordination_experiment());
    write_file(dir / "coordination.csv", csv.str());
  } else {
    const bool grid = name == "robustness-grid";
    RobustnessConfig config;
    config.eps_levels = eps.empty() ? (grid ? gridworld_eps_grid() : graph_eps_grid()) : eps;
    config.seeds = seeds;
    config.seed = seed;
    config.mode = relaxed ? RobustMode::relaxed : RobustMode::exact;
    auto instance = grid ? gridworld_robust_instance() : graph_robust_instance();
    auto result = run_robustness_experiment(instance, config);
    const std::string stem = grid ? "robustness_grid" : "robustness_graph";
    write_robustness_csv(csv, result);
    write_file(dir / (stem + ".csv"), csv.str());
    std::ostringstream summary;
    write_robustness_summary(summary, result);
    write_file(dir / (stem + "_summary.csv"), summary.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blame attribution for cooperative multi-agent decision making"};
  app.require_subcommand(1);

  std::string model_path, behavior_path;
  std::vector<std::string> methods{"all"};
  int tiebreak = 0;

  auto* attribute_cmd = app.add_subcommand("attribute", "Attribute blame for a model and behavior");
  attribute_cmd->add_option("--model", model_path, "Model JSON file")->required();
  attribute_cmd->add_option("--behavior", behavior_path, "Behavior JSON file")->required();
  attribute_cmd->add_option("--methods", methods, "MER, MC, SV, BI, AP or all")->delimiter(',');
  attribute_cmd->add_option("--tiebreak", tiebreak, "MER tiebreak agent (1-based)");

  std::string experiment;
  int seeds = 10;
  std::uint64_t seed = 0;
  std::vector<double> eps;
  std::string out_dir = "results";
  bool relaxed = false;
  auto* experiment_cmd = app.add_subcommand("experiment", "Rerun a benchmark experiment");
  experiment_cmd->add_option("name", experiment, "Experiment name")
      ->required()
      ->check(CLI::IsMember({"perm", "coordination", "robustness-grid", "robustness-graph"}));
  experiment_cmd->add_option("--seeds", seeds, "Seeds per eps level")->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--seed", seed, "Base seed");
  experiment_cmd->add_option("--eps", eps, "eps_max levels")->delimiter(',');
  experiment_cmd->add_option("--out", out_dir, "Output directory");
  auto* relaxed_flag = experiment_cmd->add_flag("--relaxed", relaxed, "Always use the relaxed box");
  experiment_cmd->add_flag("--exact-uncertainty", "Most exact robust path (default)")
      ->excludes(relaxed_flag);

  std::string method_name = "SV";
  double check_eps = 0.0;
  auto* check_cmd = app.add_subcommand("check", "Print property verdicts for one method");
  check_cmd->add_option("--model", model_path, "Model JSON file")->required();
  check_cmd->add_option("--behavior", behavior_path, "Behavior JSON file")->required();
  check_cmd->add_option("--method", method_name, "Method name");
  check_cmd->add_option("--eps", check_eps, "Perturb blames by L1 eps and check at eps slack")
      ->check(CLI::NonNegativeNumber);
  check_cmd->add_option("--seed", seed, "Perturbation seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (attribute_cmd->parsed()) return cmd_attribute(model_path, behavior_path, methods, tiebreak);
    if (experiment_cmd->parsed()) return cmd_experiment(experiment, seeds, seed, eps, out_dir, relaxed);
    if (check_cmd->parsed()) return cmd_check(model_path, behavior_path, method_name, check_eps, seed);
  } catch (const ExitError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return 0;
}
