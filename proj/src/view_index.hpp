#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "adn/history.hpp"
#include "adn/leaders.hpp"

namespace adn::detail {

/// Flat adjacency of a view: node ids are consecutive, level by level, in
/// rank order.
struct ViewIndex {
  explicit ViewIndex(const View& view) : last_level(view.last_level()) {
    offset.push_back(0);
    for (int l = -1; l <= last_level; ++l) {
      offset.push_back(offset.back() + static_cast<int>(view.level(l).size()));
    }
    const int total = offset.back();
    level.resize(total);
    parent.assign(total, -1);
    children.resize(total);
    red_in.resize(total);
    red_out.resize(total);
    leader.assign(total, 0);
    for (int l = -1; l <= last_level; ++l) {
      const auto nodes = view.level(l);
      for (std::size_t r = 0; r < nodes.size(); ++r) {
        const int v = id(l, static_cast<int>(r));
        level[v] = l;
        if (nodes[r].label) leader[v] = nodes[r].label->leader;
        if (l >= 0) parent[v] = id(l - 1, nodes[r].parent);
        for (int c : nodes[r].children) children[v].push_back(id(l + 1, c));
        for (const auto& e : nodes[r].red_in) {
          const int u = id(l - 1, e.source);
          red_in[v].push_back({u, e.multiplicity});
          red_out[u].push_back({v, e.multiplicity});
        }
      }
    }
  }

  int id(int l, int rank) const { return offset[l + 1] + rank; }
  NodeRef ref(int v) const { return {level[v], v - offset[level[v] + 1]}; }
  int size() const { return offset.back(); }
  int level_size(int l) const { return offset[l + 2] - offset[l + 1]; }

  /// Multiplicity of the red edge between v and u, u one level above v.
  std::uint64_t red(int v, int u) const {
    const auto& in = red_in[v];
    auto it = std::lower_bound(in.begin(), in.end(), u,
                               [](const std::pair<int, std::uint64_t>& e, int x) { return e.first < x; });
    return it != in.end() && it->first == u ? it->second : 0;
  }

  int last_level;
  std::vector<int> offset;  // offset[l + 1] = first id of level l
  std::vector<int> level;
  std::vector<int> parent;
  std::vector<std::vector<int>> children;
  std::vector<std::vector<std::pair<int, std::uint64_t>>> red_in;
  std::vector<std::vector<std::pair<int, std::uint64_t>>> red_out;
  std::vector<char> leader;
};

ApproxResult approx_count(const ViewIndex& index, int s, std::int64_t x, int leaders,
                          ApproxTrace* trace);

}  // namespace adn::detail
