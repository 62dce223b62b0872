#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "blame/io.hpp"
#include "blame/properties.hpp"

using namespace blame;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "blame_cli_test.out";
  const std::string cmd = std::string(BLAME_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return {WEXITSTATUS(status), read_file(out.string())};
}

std::string data(const std::string& name) { return std::string(BLAME_DATA_DIR) + "/" + name; }

}  // namespace

TEST(Io, ModelAndBehaviorRoundTrip) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto inst = random_instance(2 + static_cast<int>(seed % 2), seed);
    auto model = parse_model_json(model_to_json(inst.model));
    auto behavior = parse_behavior_json(behavior_to_json(inst.behavior));
    EXPECT_EQ(content_hash(model), content_hash(inst.model));
    EXPECT_EQ(content_hash(to_joint_distribution(model, behavior)),
              content_hash(to_joint_distribution(inst.model, inst.behavior)));
  }
}

TEST(Io, MalformedInputsRaiseParseError) {
  EXPECT_THROW(parse_model_json("{"), ParseError);
  EXPECT_THROW(parse_model_json("{\"num_states\": 2}"), ParseError);
  EXPECT_THROW(parse_behavior_json("[1, 2]"), ParseError);
  EXPECT_THROW(read_file("/nonexistent/file.json"), std::runtime_error);
}

TEST(Io, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(2.0), "2");
}

TEST(Io, CsvLayout) {
  EXPECT_EQ(blame_csv_header(2), "method,beta_1,beta_2,total");
  EXPECT_EQ(blame_csv_row(make_assignment("SV", {1.0, 1.0})), "SV,1,1,2");
}

TEST(Io, FixtureFilesMatchGenerator) {
  auto fx = impossibility_fixture();
  EXPECT_EQ(content_hash(load_model(data("prop3_model.json"))), content_hash(fx.model));
  auto pi = load_behavior(data("prop3_behavior.json"));
  EXPECT_EQ(content_hash(to_joint_distribution(fx.model, pi)),
            content_hash(to_joint_distribution(fx.model, fx.behavior())));
}

TEST(Cli, AttributesFixture) {
  auto r = run_cli("attribute --model " + data("prop3_model.json") + " --behavior " +
                   data("prop3_behavior.json") + " --methods SV,MC");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("SV,1,1,2"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("MC,2,2,4"), std::string::npos) << r.out;
}

TEST(Cli, ExitCodes) {
  const std::string inputs =
      " --model " + data("prop3_model.json") + " --behavior " + data("prop3_behavior.json");
  EXPECT_EQ(run_cli("attribute" + inputs + " --methods XX").code, 2);
  EXPECT_EQ(run_cli("attribute --model /nonexistent.json --behavior /nonexistent.json").code, 2);
  EXPECT_EQ(run_cli("experiment coordination --out " + data("gridworld.map") + "/sub").code, 4);
  EXPECT_EQ(run_cli("check" + inputs + " --method SV").code, 0);
  EXPECT_EQ(run_cli("check" + inputs + " --method MC").code, 0);
}

TEST(Cli, ExperimentOutputIsDeterministic) {
  const fs::path a = fs::temp_directory_path() / "blame_cli_a";
  const fs::path b = fs::temp_directory_path() / "blame_cli_b";
  fs::create_directories(a);
  fs::create_directories(b);
  const std::string common = "experiment robustness-graph --seeds 2 --seed 5 --out ";
  ASSERT_EQ(run_cli(common + a.string()).code, 0);
  ASSERT_EQ(run_cli(common + b.string()).code, 0);
  EXPECT_EQ(read_file((a / "robustness_graph.csv").string()),
            read_file((b / "robustness_graph.csv").string()));
  auto csv = read_file((a / "robustness_graph.csv").string());
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "method,eps_max,seed,beta_1,beta_2,beta_3,beta_4,total,l1_to_truth,consistent");
}
