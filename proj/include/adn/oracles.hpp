#pragma once

#include <vector>

#include <gmpxx.h>

#include "adn/leaderless.hpp"
#include "adn/network.hpp"

namespace adn::oracle {

/// Colour refinement: classes[t][p - 1] for t = 0..horizon. Two processes
/// share a class at round t iff they shared one at round t - 1 (same input at
/// round 0) and received the same multiset of round t - 1 classes. Class ids
/// are dense per round but otherwise arbitrary.
std::vector<std::vector<int>> refinement_classes(const Schedule& schedule,
                                                 const InputAssignment& inputs, int horizon);

/// True iff the two labelings induce the same partition of the processes.
bool same_partition(const std::vector<int>& a, const std::vector<int>& b);

/// Breadth-first connectivity of the union of rounds [first, last].
bool window_connected(const Schedule& schedule, int first, int last);

/// The input multiset, counted directly.
Inventory input_multiset(const InputAssignment& inputs);

/// Each input's share of the processes.
Concentration input_concentration(const InputAssignment& inputs);

}  // namespace adn::oracle
