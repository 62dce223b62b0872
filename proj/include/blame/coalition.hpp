#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace blame {

/// Set of agents as a bitmask; agent i (0-based) is bit i.
using Coalition = std::uint32_t;

inline constexpr int kMaxAgents = 12;

constexpr Coalition singleton(int agent) { return Coalition{1} << agent; }
constexpr Coalition grand_coalition(int num_agents) {
  return (Coalition{1} << num_agents) - 1;
}
constexpr bool contains(Coalition s, int agent) { return (s >> agent) & 1u; }
constexpr int coalition_size(Coalition s) { return std::popcount(s); }

/// Members of `s` in increasing agent order.
inline std::vector<int> members(Coalition s) {
  std::vector<int> out;
  for (int i = 0; s != 0; ++i, s >>= 1) {
    if (s & 1u) out.push_back(i);
  }
  return out;
}

}  // namespace blame
