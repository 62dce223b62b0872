#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "blame/attribution.hpp"
#include "blame/mmdp.hpp"
#include "blame/planning.hpp"

namespace blame {

/// Malformed or unreadable input file.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Mmdp parse_model_json(const std::string& text);
JointPolicy parse_behavior_json(const std::string& text);
std::string model_to_json(const Mmdp& m);
std::string behavior_to_json(const JointPolicy& pi);

/// Reads a whole file; throws ParseError when it cannot be opened.
std::string read_file(const std::string& path);
Mmdp load_model(const std::string& path);
JointPolicy load_behavior(const std::string& path);

/// %.12g
std::string format_number(double x);

std::string blame_csv_header(int num_agents);
std::string blame_csv_row(const BlameAssignment& b);
/// `coalition,value` rows with the coalition as a `|`-joined member list.
std::string game_csv(const CharacteristicGame& game);

}  // namespace blame
