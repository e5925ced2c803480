#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

#include "adn/history.hpp"

namespace adn {

HistoryTree build_ground_truth(const Schedule& schedule, const InputAssignment& inputs,
                               int horizon) {
  const int n = schedule.n;
  if (static_cast<int>(inputs.size()) != n) {
    throw std::invalid_argument("input assignment length differs from n");
  }
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");

  HistoryTree tree;
  tree.n_ = n;
  tree.levels_.resize(horizon + 2);
  tree.rep_.assign(horizon + 2, std::vector<int>(n, 0));

  HistoryNode root;
  root.anonymity = static_cast<std::uint64_t>(n);
  tree.levels_[0].push_back(root);

  using Key = std::tuple<ProcessInput, int, std::vector<RedEdge>>;
  for (int t = 0; t <= horizon; ++t) {
    std::map<Key, std::vector<ProcessId>> classes;
    const auto& prev = tree.rep_[t];
    if (t == 0) {
      for (ProcessId p = 1; p <= n; ++p) classes[{inputs[p - 1], 0, {}}].push_back(p);
    } else {
      const auto adj = schedule.round(t).incidence(n);
      for (ProcessId p = 1; p <= n; ++p) {
        std::map<int, std::uint64_t> obs;
        for (const auto& link : adj[p]) obs[prev[link.peer - 1]] += link.multiplicity;
        std::vector<RedEdge> red;
        for (const auto& [src, m] : obs) red.push_back({src, m});
        classes[{inputs[p - 1], prev[p - 1], std::move(red)}].push_back(p);
      }
    }
    auto& level = tree.levels_[t + 1];
    auto& above = tree.levels_[t];
    for (auto& [key, members] : classes) {
      const int rank = static_cast<int>(level.size());
      HistoryNode node;
      node.label = std::get<0>(key);
      node.parent = std::get<1>(key);
      node.red_in = std::get<2>(key);
      node.anonymity = members.size();
      above[node.parent].children.push_back(rank);
      for (ProcessId p : members) tree.rep_[t + 1][p - 1] = rank;
      level.push_back(std::move(node));
    }
  }
  return tree;
}

View extract_view(const HistoryTree& tree, NodeRef ref) {
  if (ref.level < -1 || ref.level > tree.last_level() ||
      ref.rank < 0 || ref.rank >= static_cast<int>(tree.level(ref.level).size())) {
    throw std::invalid_argument("extract_view: no such node");
  }
  std::vector<std::vector<char>> keep(ref.level + 2);
  for (int l = -1; l <= ref.level; ++l) keep[l + 1].assign(tree.level(l).size(), 0);
  keep[ref.level + 1][ref.rank] = 1;
  for (int l = ref.level; l >= 0; --l) {
    const auto nodes = tree.level(l);
    for (std::size_t r = 0; r < nodes.size(); ++r) {
      if (!keep[l + 1][r]) continue;
      keep[l][nodes[r].parent] = 1;
      for (const auto& e : nodes[r].red_in) keep[l][e.source] = 1;
    }
  }

  ViewBuilder builder;
  std::vector<int> prev_ids{builder.root()};
  for (int l = 0; l <= ref.level; ++l) {
    const auto nodes = tree.level(l);
    std::vector<int> ids(nodes.size(), -1);
    for (std::size_t r = 0; r < nodes.size(); ++r) {
      if (!keep[l + 1][r]) continue;
      std::vector<RedEdge> red;
      for (const auto& e : nodes[r].red_in) red.push_back({prev_ids[e.source], e.multiplicity});
      ids[r] = builder.add_node(l, *nodes[r].label, prev_ids[nodes[r].parent], std::move(red));
    }
    prev_ids = std::move(ids);
  }
  return builder.finish();
}

std::vector<std::vector<int>> locate_view(const HistoryTree& tree, const View& view) {
  if (view.last_level() > tree.last_level()) {
    throw std::invalid_argument("locate_view: view deeper than tree");
  }
  std::vector<std::vector<int>> image(view.last_level() + 2);
  image[0] = {0};
  for (int l = 0; l <= view.last_level(); ++l) {
    const auto nodes = view.level(l);
    const auto tree_level = tree.level(l);
    image[l + 1].resize(nodes.size());
    for (std::size_t r = 0; r < nodes.size(); ++r) {
      const auto& vn = nodes[r];
      std::vector<RedEdge> red;
      for (const auto& e : vn.red_in) red.push_back({image[l][e.source], e.multiplicity});
      std::sort(red.begin(), red.end());
      const int parent = image[l][vn.parent];
      int found = -1;
      for (int child : tree.level(l - 1)[parent].children) {
        const auto& tn = tree_level[child];
        if (*tn.label == *vn.label && tn.red_in == red) {
          found = child;
          break;
        }
      }
      if (found < 0) throw std::invalid_argument("locate_view: view does not embed in tree");
      image[l + 1][r] = found;
    }
  }
  return image;
}

}  // namespace adn
