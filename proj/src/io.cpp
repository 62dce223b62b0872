#include "blame/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace blame {

using nlohmann::json;

namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

Mmdp parse_model_json(const std::string& text) {
  const json j = parse_json(text);
  const int n_states = field<int>(j, "num_states");
  const auto counts = field<std::vector<int>>(j, "action_counts");
  if (j.contains("num_agents") && field<int>(j, "num_agents") != static_cast<int>(counts.size())) {
    throw ParseError("num_agents does not match action_counts");
  }
  if (n_states <= 0 || counts.empty() || counts.size() > kMaxAgents) {
    throw ParseError("model needs states and between 1 and 12 agents");
  }
  for (int c : counts) {
    if (c <= 0) throw ParseError("action counts must be positive");
  }
  Mmdp m(n_states, counts, field<double>(j, "gamma"));
  const int n_joint = m.num_joint_actions();

  const auto rewards = field<std::vector<std::vector<double>>>(j, "rewards");
  const auto transitions =
      field<std::vector<std::vector<std::vector<std::pair<int, double>>>>>(j, "transitions");
  if (static_cast<int>(rewards.size()) != n_states ||
      static_cast<int>(transitions.size()) != n_states) {
    throw ParseError("rewards and transitions need one entry per state");
  }
  for (int s = 0; s < n_states; ++s) {
    if (static_cast<int>(rewards[s].size()) != n_joint ||
        static_cast<int>(transitions[s].size()) != n_joint) {
      throw ParseError("state " + std::to_string(s) + " needs one entry per joint action");
    }
    for (int a = 0; a < n_joint; ++a) {
      m.set_reward(s, a, rewards[s][a]);
      std::vector<Successor> row;
      for (auto [next, p] : transitions[s][a]) {
        if (next < 0 || next >= n_states) throw ParseError("successor state out of range");
        row.push_back({next, p});
      }
      m.set_transition(s, a, std::move(row));
    }
  }
  m.set_initial_dist(field<std::vector<double>>(j, "initial_dist"));
  if (j.contains("terminals")) {
    for (int s : field<std::vector<int>>(j, "terminals")) {
      if (s < 0 || s >= n_states) throw ParseError("terminal state out of range");
      m.set_terminal(s);
    }
  }
  return m;
}

JointPolicy parse_behavior_json(const std::string& text) {
  const json j = parse_json(text);
  JointPolicy pi;
  for (auto& rows : field<std::vector<std::vector<std::vector<double>>>>(j, "policies")) {
    pi.agents.push_back(AgentPolicy{std::move(rows)});
  }
  return pi;
}

std::string model_to_json(const Mmdp& m) {
  json j;
  j["num_states"] = m.num_states();
  j["num_agents"] = m.num_agents();
  j["action_counts"] = m.action_counts();
  j["gamma"] = m.discount();
  j["initial_dist"] = m.initial_dist();
  j["terminals"] = m.terminal_states();
  json rewards = json::array();
  json transitions = json::array();
  for (int s = 0; s < m.num_states(); ++s) {
    json r = json::array();
    json t = json::array();
    for (int a = 0; a < m.num_joint_actions(); ++a) {
      r.push_back(m.reward(s, a));
      json row = json::array();
      for (const auto& succ : m.successors(s, a)) row.push_back({succ.state, succ.prob});
      t.push_back(std::move(row));
    }
    rewards.push_back(std::move(r));
    transitions.push_back(std::move(t));
  }
  j["rewards"] = std::move(rewards);
  j["transitions"] = std::move(transitions);
  return j.dump(1);
}

std::string behavior_to_json(const JointPolicy& pi) {
  json policies = json::array();
  for (const auto& agent : pi.agents) policies.push_back(agent.probs);
  return json{{"policies", policies}}.dump(1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Mmdp load_model(const std::string& path) {
  try {
    return parse_model_json(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

JointPolicy load_behavior(const std::string& path) {
  try {
    return parse_behavior_json(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string blame_csv_header(int num_agents) {
  std::string out = "method";
  for (int i = 1; i <= num_agents; ++i) out += ",beta_" + std::to_string(i);
  return out + ",total";
}

std::string blame_csv_row(const BlameAssignment& b) {
  std::string out = b.method;
  for (double x : b.blames) out += "," + format_number(x);
  return out + "," + format_number(b.total);
}

std::string game_csv(const CharacteristicGame& game) {
  std::string out = "coalition,value\n";
  for (Coalition s = 0; s < game.values.size(); ++s) {
    std::string name;
    for (int i : members(s)) name += (name.empty() ? "" : "|") + std::to_string(i + 1);
    out += (name.empty() ? "{}" : name) + "," + format_number(game[s]) + "\n";
  }
  return out;
}

}  // namespace blame
