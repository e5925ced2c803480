#pragma once

#include <initializer_list>
#include <string>
#include <tuple>
#include <vector>

#include "adn/network.hpp"
#include "adn/simulate.hpp"

namespace testing {

using EdgeList = std::vector<std::tuple<int, int, std::uint64_t>>;

inline adn::Schedule make_schedule(int n, const std::vector<EdgeList>& rounds) {
  adn::Schedule s;
  s.n = n;
  for (const auto& edges : rounds) {
    adn::RoundGraph g;
    for (const auto& [i, j, m] : edges) g.add_edge(i, j, m);
    s.rounds.push_back(g);
  }
  return s;
}

inline adn::InputAssignment make_inputs(std::initializer_list<std::string> values,
                                        std::initializer_list<int> leaders = {}) {
  adn::InputAssignment in;
  for (const auto& v : values) in.push_back({v, false});
  for (int p : leaders) in[p - 1].leader = true;
  return in;
}

/// View of process p after `rounds` rounds.
inline adn::View view_at(const adn::Schedule& s, const adn::InputAssignment& in, int rounds,
                         adn::ProcessId p) {
  adn::Simulator sim(s, in);
  while (sim.round() < rounds) sim.step();
  return sim.view(p);
}

}  // namespace testing
