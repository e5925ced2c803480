#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "adn/equations.hpp"
#include "adn/history.hpp"

namespace adn {

/// Fraction of processes holding each input; nullopt plays the role of
/// Unknown throughout.
using Concentration = std::map<ProcessInput, mpq_class>;

/// Relative weights of the level-0 nodes: beta[i] is proportional to the
/// anonymity of the node of rank i in level 0.
struct LevelZeroWeights {
  int t = -1;  // level the equations were taken from
  std::vector<mpq_class> beta;
  mpq_class total;
};

std::optional<LevelZeroWeights> concentration_weights(const View& view);

std::optional<Concentration> stabilizing_concentration(const View& view);

struct TerminatingOutput {
  std::optional<Concentration> output;
  bool terminated = false;
};

/// Terminates once equations were found at some level t and
/// current_round >= t + T * N.
TerminatingOutput terminating_concentration(const View& view, int T, int N, int current_round);

/// Input multiset with integer multiplicities.
using Inventory = std::map<ProcessInput, std::uint64_t>;

/// Smallest integer rescaling of a concentration: multiplies by the lcm of the
/// reduced denominators.
Inventory scaled_inventory(const Concentration& conc);

/// A multi-aggregate function in signature form: own input and input multiset.
template <class Value>
using Signature = std::function<Value(const ProcessInput&, const Inventory&)>;

template <class Value>
Value scale_invariant_eval(const Concentration& conc, const ProcessInput& own,
                           const Signature<Value>& psi) {
  return psi(own, scaled_inventory(conc));
}

/// Parses an input value as an exact rational ("3", "-2", "5/4", "0.25").
/// Throws std::invalid_argument for anything else.
mpq_class numeric_value(const std::string& value);

namespace signatures {
mpq_class mean(const ProcessInput& own, const Inventory& inv);
mpq_class max(const ProcessInput& own, const Inventory& inv);
/// Most frequent value; ties go to the smallest.
mpq_class mode(const ProcessInput& own, const Inventory& inv);
/// Population variance.
mpq_class variance(const ProcessInput& own, const Inventory& inv);
}  // namespace signatures

/// Mean of the numeric inputs, or nullopt while the concentration is unknown.
std::optional<mpq_class> average_consensus(const View& view);

}  // namespace adn
