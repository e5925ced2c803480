#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adn/network.hpp"

namespace adn {

/// Red in-edge from a node of the previous level, by rank in that level.
struct RedEdge {
  std::int32_t source;
  std::uint64_t multiplicity;

  friend auto operator<=>(const RedEdge&, const RedEdge&) = default;
  friend bool operator==(const RedEdge&, const RedEdge&) = default;
};

/// Position of a node: level in [-1, last] and rank within the level.
struct NodeRef {
  int level;
  int rank;

  friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

struct ViewNode {
  std::optional<ProcessInput> label;  // empty only for the root
  std::int32_t parent = -1;           // rank in the previous level
  std::vector<RedEdge> red_in;        // sorted by source
  std::vector<std::int32_t> children; // ranks in the next level, ascending

  friend bool operator==(const ViewNode&, const ViewNode&) = default;
};

/// A view of a history tree in canonical form: inside every level, nodes are
/// sorted by (label, parent rank, red in-edges), so two views are isomorphic
/// iff they compare equal. The viewpoint is the single node of the last level.
class View {
 public:
  /// View at round 0 of a process with the given input.
  static View initial(const ProcessInput& input);

  int last_level() const { return static_cast<int>(levels_.size()) - 2; }
  std::span<const ViewNode> level(int l) const { return levels_.at(l + 1); }
  const ViewNode& node(NodeRef ref) const { return levels_.at(ref.level + 1).at(ref.rank); }
  NodeRef viewpoint() const { return {last_level(), 0}; }
  std::size_t node_count() const;

  /// Label of a non-root node.
  const ProcessInput& label(NodeRef ref) const { return *node(ref).label; }

  /// Byte encoding; equal iff the views are isomorphic.
  std::string canonical_form() const;
  std::uint64_t fingerprint() const;

  friend bool operator==(const View&, const View&) = default;

 private:
  friend class ViewBuilder;
  std::vector<std::vector<ViewNode>> levels_;  // index = level + 1
};

/// Incremental construction of a view. Nodes are identified by local ids per
/// level; add_node returns the existing id when an identical node (same
/// label, parent and red in-edges) is already present.
class ViewBuilder {
 public:
  ViewBuilder();
  ViewBuilder(const ViewBuilder&) = delete;
  ViewBuilder& operator=(const ViewBuilder&) = delete;

  /// The root, local id 0 of level -1.
  int root() const { return 0; }

  int add_node(int level, const ProcessInput& label, int parent,
               std::vector<RedEdge> red_in);

  /// Embeds `view` by the breadth-first homomorphism and returns the local
  /// id of the image of its viewpoint.
  int embed(const View& view);

  /// Same as embed, returning the image of every node: result[level + 1][rank].
  std::vector<std::vector<int>> embed_all(const View& view);

  int last_level() const { return static_cast<int>(levels_.size()) - 2; }

  /// Canonicalizes. Throws std::invalid_argument unless the last level holds
  /// exactly one node and every node is an ancestor of it along black or red
  /// edges.
  View finish() const;

 private:
  struct Key {
    ProcessInput label;
    int parent;
    std::vector<RedEdge> red_in;
    friend auto operator<=>(const Key&, const Key&) = default;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct Level {
    std::vector<const Key*> nodes;
    std::map<Key, int> index;
  };
  std::vector<Level> levels_;  // index = level + 1; level -1 holds the root
};

struct Message {
  const View* view;
  std::uint64_t multiplicity;
};

/// One step of the update algorithm: own view extended by a new viewpoint,
/// merged with every received view, plus red edges to their viewpoints.
/// Throws std::invalid_argument if some received view is not at own's level.
View merge_view(const View& own, std::span<const Message> received);

struct HistoryNode {
  std::optional<ProcessInput> label;
  std::int32_t parent = -1;
  std::vector<RedEdge> red_in;
  std::vector<std::int32_t> children;
  std::uint64_t anonymity = 0;
};

/// Ground-truth history tree, levels -1..last_level(), with anonymities and
/// the representation function.
class HistoryTree {
 public:
  int n() const { return n_; }
  int last_level() const { return static_cast<int>(levels_.size()) - 2; }
  std::span<const HistoryNode> level(int l) const { return levels_.at(l + 1); }
  const HistoryNode& node(NodeRef ref) const { return levels_.at(ref.level + 1).at(ref.rank); }
  std::uint64_t anonymity(NodeRef ref) const { return node(ref).anonymity; }

  /// Rank in level t of the node representing process p.
  int representative(int t, ProcessId p) const { return rep_.at(t + 1).at(p - 1); }

 private:
  friend HistoryTree build_ground_truth(const Schedule&, const InputAssignment&, int);
  int n_ = 0;
  std::vector<std::vector<HistoryNode>> levels_;
  std::vector<std::vector<int>> rep_;
};

/// Levels -1..horizon of the history tree of (schedule, inputs) by iterated
/// refinement on observation multisets. Rounds past the schedule are empty.
HistoryTree build_ground_truth(const Schedule& schedule, const InputAssignment& inputs,
                               int horizon);

/// The view of a tree node: everything reachable by ascending black or red
/// paths.
View extract_view(const HistoryTree& tree, NodeRef node);

/// Maps every view node to its tree node: result[level + 1][rank] is a tree
/// rank. Throws std::invalid_argument if the view does not embed.
std::vector<std::vector<int>> locate_view(const HistoryTree& tree, const View& view);

}  // namespace adn
