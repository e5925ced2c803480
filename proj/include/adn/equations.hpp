#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "adn/history.hpp"

namespace adn {

/// m1 * x_i = m2 * x_j, variables indexed from 0.
struct Equation {
  int i;
  std::uint64_t m1;
  int j;
  std::uint64_t m2;

  friend bool operator==(const Equation&, const Equation&) = default;
};

struct LinearSystem {
  int k = 0;
  std::vector<Equation> equations;

  friend bool operator==(const LinearSystem&, const LinearSystem&) = default;
};

/// t == -1 means no system was found; variable i stands for the anonymity of
/// the node of rank i in level t.
struct EquationResult {
  int t = -1;
  LinearSystem system;
};

/// Scans levels 0..h for a run of non-branching levels s..t whose strands are
/// connected through exposed pairs, and returns one equation per edge of a
/// breadth-first spanning tree of the strand graph rooted at strand 0.
EquationResult find_equations(const View& view);

/// Rank of the coefficient matrix, by exact elimination.
int rank(const LinearSystem& system);

/// The solution ray scaled so that x_0 = 1, or nullopt unless the system has
/// rank k - 1 and the ray has x_0 != 0.
std::optional<std::vector<mpq_class>> solve_one_parameter(const LinearSystem& system);

/// One "m1*x_i = m2*x_j" line per equation, variables numbered from 1.
std::string to_string(const LinearSystem& system);

}  // namespace adn
