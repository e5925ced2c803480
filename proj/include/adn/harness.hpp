#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "adn/network.hpp"

namespace adn {

/// Invalid experiment configuration (exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Family { Random, Scale, LeaderRing, MarkedCycle, File };
enum class Task { Concentration, Average, GcCount };
enum class Mode { Stabilizing, Terminating };

Family parse_family(const std::string& name);
Task parse_task(const std::string& name);
Mode parse_mode(const std::string& name);
std::string to_string(Family family);
std::string to_string(Task task);
std::string to_string(Mode mode);

struct ExperimentConfig {
  Family family = Family::Random;
  int n = 4;                    // random
  int T = 1;                    // random, file; static families use 1
  int blocks = 0;               // random; 0 sizes the schedule to the horizon
  std::uint64_t seed = 0;       // random
  std::vector<int> sizes{3, 4}; // scale
  int alpha = 1;                // scale
  int k = 3;                    // leader-ring
  int i = 3;                    // leader-ring
  int t = 2;                    // marked-cycle
  /// Leaders to place (random) or the declared count (other families).
  std::optional<int> leaders;
  std::string schedule_path;    // file
  std::string inputs_path;      // file

  Task task = Task::Concentration;
  Mode mode = Mode::Stabilizing;
  std::optional<int> N;         // upper bound on n, terminating concentration
  int horizon = 0;              // 0: bound + T * n
  std::string trace_path;
  std::string report_path;

  nlohmann::json to_json() const;
};

/// Mixes seed components into one 64-bit seed (std::seed_seq).
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

/// Values drawn uniformly from {"0", "1", "2"}; `leaders` distinct random
/// processes carry the leader flag.
InputAssignment gen_random_inputs(int n, int leaders, std::uint64_t seed);

/// Network of a configuration, with its schedule covering `rounds` rounds.
Network build_network(const ExperimentConfig& config, int rounds);

struct Check {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct RunReport {
  std::string status;  // ok | violation | horizon_exhausted
  int n = 0;
  int T = 1;
  int leaders = 0;
  int horizon = 0;
  std::optional<int> stabilization_round;
  std::optional<int> termination_round;
  std::string bound_name;
  long long bound = 0;
  bool bound_satisfied = false;
  nlohmann::json truth;
  std::vector<Check> checks;

  nlohmann::json to_json() const;
};

/// Runs one experiment. Writes one JSONL record per (round, process) and a
/// closing summary record to `trace` (if given) and to config.trace_path (if
/// set); the report goes to config.report_path (if set). Throws ConfigError.
RunReport run_experiment(const ExperimentConfig& config, std::ostream* trace = nullptr);

/// ADN_JOBS if set, else the hardware concurrency.
int default_jobs();

}  // namespace adn
