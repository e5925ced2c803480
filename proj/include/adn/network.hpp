#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace adn {

/// Process indices are 1-based, V = {1..n}.
using ProcessId = int;

/// An input token together with the leader flag. Ordered by value, then flag.
struct ProcessInput {
  std::string value;
  bool leader = false;

  friend auto operator<=>(const ProcessInput&, const ProcessInput&) = default;
  friend bool operator==(const ProcessInput&, const ProcessInput&) = default;
};

/// "value" for non-leaders, "L:value" for leaders.
std::string to_string(const ProcessInput& input);

using InputAssignment = std::vector<ProcessInput>;

/// Number of leader-flagged inputs.
int count_leaders(const InputAssignment& inputs);

struct Link {
  ProcessId peer;
  std::uint64_t multiplicity;
};

/// Multiset of undirected links for one round. Pairs are stored with i < j.
class RoundGraph {
 public:
  using EdgeMap = std::map<std::pair<ProcessId, ProcessId>, std::uint64_t>;

  RoundGraph() = default;

  /// Adds `multiplicity` parallel links between i and j. Self-loops and zero
  /// multiplicities are rejected.
  void add_edge(ProcessId i, ProcessId j, std::uint64_t multiplicity = 1);

  std::uint64_t multiplicity(ProcessId i, ProcessId j) const;
  const EdgeMap& edges() const { return edges_; }
  bool empty() const { return edges_.empty(); }
  std::uint64_t total_multiplicity() const;

  /// Per-process neighbor lists (index 0 unused), peers ascending.
  std::vector<std::vector<Link>> incidence(int n) const;

  /// Multiset union: multiplicities add.
  RoundGraph& operator+=(const RoundGraph& other);

  friend bool operator==(const RoundGraph&, const RoundGraph&) = default;

 private:
  EdgeMap edges_;
};

/// A finite prefix of a dynamic network. Rounds are 1-based; rounds past the
/// stored prefix are empty.
struct Schedule {
  int n = 1;
  std::vector<RoundGraph> rounds;

  int length() const { return static_cast<int>(rounds.size()); }
  const RoundGraph& round(int t) const;

  /// Throws std::invalid_argument on n < 1 or endpoints outside [1, n].
  void validate() const;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct Network {
  Schedule schedule;
  InputAssignment inputs;
};

/// True iff the union of every window of T consecutive rounds is connected.
/// Throws std::invalid_argument unless 1 <= T <= schedule.length().
bool validate_disconnectivity(const Schedule& schedule, int T);

/// Merges each block of T consecutive rounds into one round. A trailing
/// partial block is padded with empty rounds.
Schedule block_reduce(const Schedule& schedule, int T);

/// Random T-interval-disconnected multigraph schedule of num_blocks * T rounds,
/// deterministic in `seed`.
Schedule gen_random_schedule(int n, int T, int num_blocks, std::uint64_t seed);

/// Static network: alpha disjoint copies of the complete k-partite graph with
/// the given part sizes, plus one cycle through all copies of each part.
/// Processes in copies of part i get input "z<i>" (1-based).
Network gen_scale_family(std::span<const int> partite_sizes, int alpha,
                         int rounds);

/// Static cycle of k*i processes with i evenly spaced leaders (positions
/// 1, 1+k, 1+2k, ...). All processes share the value "z".
Network gen_leader_ring(int k, int i, int rounds);

struct MarkedCycle {
  Network marked;     // cycle of 2t+2 processes, input "1" at p1, "0" elsewhere
  Network companion;  // 3-cycle, all inputs "0"
};
MarkedCycle gen_cycle_with_one_marked(int t, int rounds);

/// Static cycle on processes 1..n in index order.
Schedule static_cycle(int n, int rounds);

}  // namespace adn
