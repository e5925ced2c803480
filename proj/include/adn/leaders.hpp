#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "adn/history.hpp"
#include "adn/leaderless.hpp"

namespace adn {

/// estimate > 0, or one of the error codes below; level is the last level
/// the procedure looked at.
struct ApproxResult {
  std::int64_t estimate;
  int level;

  friend bool operator==(const ApproxResult&, const ApproxResult&) = default;
};

inline constexpr std::int64_t kNoLeaderNode = -1;
inline constexpr std::int64_t kLeaderBranches = -2;
inline constexpr std::int64_t kLeaderMismatch = -3;

struct GuessRecord {
  NodeRef node;
  std::int64_t guess;
  NodeRef guesser;
  /// The guesser's children with their conditional anonymities.
  std::vector<std::pair<NodeRef, std::int64_t>> guesser_children;
};

struct CountRecord {
  NodeRef node;
  std::int64_t value;
  bool from_isle;  // false: deepest heavy node
};

/// Optional record of one approx_count run, for invariant checks.
struct ApproxTrace {
  std::optional<NodeRef> tau;
  int strand_end = -1;  // level of the last node of the seed strand
  std::vector<GuessRecord> guesses;
  std::vector<CountRecord> counted;
  std::vector<NodeRef> cut;
  int max_locked_levels = 0;
  int max_guessed_per_level = 0;
  int heavy_after_iteration = 0;  // worst count of heavy nodes left by an iteration
};

/// Upper bound on the conditional anonymity of a node v from a guesser u:
/// ceil(sum_c a'(c) * red(c, parent(v)) / m) over the children c of u, with m
/// the multiplicity of the red edge between v and u.
std::int64_t guess_from(std::span<const std::int64_t> child_counts,
                        std::span<const std::uint64_t> red_to_parent, std::uint64_t m);

/// Estimates n assuming the first leader node of level s represents x
/// processes.
ApproxResult approx_count(const View& view, int s, std::int64_t x, int leaders,
                          ApproxTrace* trace = nullptr);

struct ApproxCall {
  int phase;
  int s;
  std::int64_t x;
  ApproxResult result;
  ApproxTrace trace;  // filled only when requested
};

struct CountingTranscript {
  bool record_traces = false;
  std::vector<ApproxCall> calls;
  int final_s = 0;
  std::int64_t best = -1;
};

struct CountingOptions {
  /// Fault injection for mutation testing: accept the best estimate without
  /// the final horizon check.
  bool skip_final_check = false;
};

/// Network size from a view of a 1-interval-connected execution with the
/// given number of leaders, or nullopt for Unknown.
std::optional<std::int64_t> counting_with_leaders(const View& view, int leaders,
                                                  CountingTranscript* transcript = nullptr,
                                                  const CountingOptions& options = {});

/// Input multiset, or nullopt for Unknown.
std::optional<Inventory> stabilizing_gc(const View& view, int leaders);

/// Terminating generalized counting for one process. Feed it the process's
/// views in the block-reduced execution, one per block round.
class TerminatingGc {
 public:
  TerminatingGc(int leaders, int T, CountingOptions options = {});

  struct Status {
    std::optional<Inventory> output;
    bool terminated = false;
  };

  /// `view` is the view at block round view.last_level(). The transcript, if
  /// given, receives the counting calls made in this step (none once the
  /// count is known).
  Status step(const View& view, CountingTranscript* transcript = nullptr);

  std::optional<std::int64_t> count() const { return count_; }
  int count_found_at() const { return found_at_; }
  /// Original-network round of a block round.
  int original_round(int block_round) const { return block_round * T_; }

 private:
  int leaders_;
  int T_;
  CountingOptions options_;
  std::optional<std::int64_t> count_;
  int found_at_ = -1;
  Status last_;
};

template <class Value>
Value multi_aggregate_eval(const Inventory& gc_output, const ProcessInput& own,
                           const Signature<Value>& psi) {
  return psi(own, gc_output);
}

}  // namespace adn
