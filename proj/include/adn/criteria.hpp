#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "adn/harness.hpp"
#include "adn/leaders.hpp"

namespace adn {

struct CheckCount {
  long long checked = 0;
  long long failed = 0;
  std::string first_failure;
};

/// Pass/fail counters per named check.
class Tally {
 public:
  template <class Describe>
  void record(const std::string& name, bool ok, Describe&& describe) {
    auto& c = counts_[name];
    ++c.checked;
    if (!ok && c.failed++ == 0) c.first_failure = describe();
  }
  void record(const std::string& name, bool ok) {
    record(name, ok, [] { return std::string(); });
  }

  /// Appends `other`; first failures are kept from the earlier tally.
  void merge(const Tally& other);

  const std::map<std::string, CheckCount>& counts() const { return counts_; }

  /// True iff some check named `prefix`* ran and none of them failed.
  bool passed(const std::string& prefix) const;
  /// True iff no check failed. Names starting with "obs." are observations
  /// that are reported but never fail a run.
  bool clean() const;

  /// One "name failed/checked" entry per check under `prefix`, with the
  /// first failure of each failing check.
  std::string summary(const std::string& prefix) const;
  nlohmann::json to_json() const;

 private:
  std::map<std::string, CheckCount> counts_;
};

struct SweepSpec {
  std::vector<int> ns;
  std::vector<int> Ts;
  std::vector<int> leaders;  // leader sweeps only
  int trials = 20;
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct SweepResult {
  Tally tally;
  int cases = 0;
  /// One JSONL record per case, in case order.
  std::string trace;
};

/// Which checks a leaderless case runs. Check names:
///   stabilization  c1.exact
///   termination    c2.bound, c2.exact
///   oracle         c4.views, c4.refinement
///   equations      c5.level, c5.rank, c5.satisfied
struct LeaderlessChecks {
  bool stabilization = true;
  bool termination = true;
  bool oracle = true;
  bool equations = true;
};

/// Random leaderless executions: for each n, T and trial, a random
/// T-interval-connected schedule and random inputs.
SweepResult leaderless_sweep(const SweepSpec& spec, const LeaderlessChecks& checks);

/// Check names:
///   stabilization  c3.stabilizing
///   termination    c3.terminates, c3.terminated_exact, c3.count_sound,
///                  c3.count_by_bound, obs.monotone (count kept once found)
///   oracle         c4.views, c4.refinement
///   audit          c6.clause_i, c6.clause_ii, c6.clause_iii, c6.guess_sound,
///                  c6.guess_exact, c6.counted_sound, c6.locked_levels,
///                  c6.well_spread, c6.no_heavy_left
struct LeaderChecks {
  bool stabilization = true;
  bool termination = true;
  bool oracle = true;
  bool audit = true;
  CountingOptions counting;
};

SweepResult leader_sweep(const SweepSpec& spec, const LeaderChecks& checks);

/// View-isomorphism checks on the scale family, the leader ring and the
/// marked cycle. The last entry is informational.
std::vector<Check> construction_checks();

/// Repeats sample experiments and small sweeps (with different job counts)
/// and compares their traces byte for byte.
Check determinism_check(std::uint64_t seed, int jobs);

struct SuiteResult {
  bool passed = false;
  Tally tally;
  nlohmann::json to_json() const;
};

/// Leaderless sweep over n <= max_n, T <= max_T and leader sweep over
/// additionally 1 <= leaders <= min(max_leaders, n), all checks on.
SuiteResult verify_suite(int max_n, int max_T, int max_leaders, int trials, std::uint64_t seed,
                         int jobs, const CountingOptions& counting = {});

}  // namespace adn
