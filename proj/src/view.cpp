#include <algorithm>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "adn/history.hpp"

namespace adn {

namespace {

void sort_and_merge(std::vector<RedEdge>& edges) {
  std::sort(edges.begin(), edges.end());
  std::size_t out = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (out > 0 && edges[out - 1].source == edges[i].source) {
      edges[out - 1].multiplicity += edges[i].multiplicity;
    } else {
      edges[out++] = edges[i];
    }
  }
  edges.resize(out);
}

template <class T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

}  // namespace

View View::initial(const ProcessInput& input) {
  View v;
  ViewNode root;
  root.children = {0};
  ViewNode leaf;
  leaf.label = input;
  leaf.parent = 0;
  v.levels_ = {{root}, {leaf}};
  return v;
}

std::size_t View::node_count() const {
  std::size_t total = 0;
  for (const auto& l : levels_) total += l.size();
  return total;
}

std::string View::canonical_form() const {
  std::string out;
  put<std::uint32_t>(out, static_cast<std::uint32_t>(levels_.size()));
  for (const auto& level : levels_) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(level.size()));
    for (const auto& node : level) {
      if (node.label) {
        put<std::uint8_t>(out, node.label->leader ? 2 : 1);
        put<std::uint32_t>(out, static_cast<std::uint32_t>(node.label->value.size()));
        out += node.label->value;
      } else {
        put<std::uint8_t>(out, 0);
      }
      put<std::int32_t>(out, node.parent);
      put<std::uint32_t>(out, static_cast<std::uint32_t>(node.red_in.size()));
      for (const auto& e : node.red_in) {
        put<std::int32_t>(out, e.source);
        put<std::uint64_t>(out, e.multiplicity);
      }
    }
  }
  return out;
}

std::uint64_t View::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_form()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ViewBuilder::ViewBuilder() {
  levels_.resize(1);
  auto [it, inserted] = levels_[0].index.emplace(Key{{}, -1, {}}, 0);
  levels_[0].nodes.push_back(&it->first);
}

int ViewBuilder::add_node(int level, const ProcessInput& label, int parent,
                          std::vector<RedEdge> red_in) {
  if (level < 0 || level > last_level() + 1) {
    throw std::invalid_argument("add_node: level out of range");
  }
  const auto& above = levels_[level];
  if (parent < 0 || parent >= static_cast<int>(above.nodes.size())) {
    throw std::invalid_argument("add_node: unknown parent");
  }
  for (const auto& e : red_in) {
    if (level == 0 || e.source < 0 || e.source >= static_cast<int>(above.nodes.size()) ||
        e.multiplicity == 0) {
      throw std::invalid_argument("add_node: bad red edge");
    }
  }
  sort_and_merge(red_in);
  if (level > last_level()) levels_.emplace_back();
  auto& here = levels_[level + 1];
  const int next_id = static_cast<int>(here.nodes.size());
  auto [it, inserted] = here.index.emplace(Key{label, parent, std::move(red_in)}, next_id);
  if (inserted) here.nodes.push_back(&it->first);
  return it->second;
}

std::vector<std::vector<int>> ViewBuilder::embed_all(const View& view) {
  std::vector<std::vector<int>> phi(view.last_level() + 2);
  phi[0] = {root()};
  std::vector<RedEdge> red;
  for (int l = 0; l <= view.last_level(); ++l) {
    const auto nodes = view.level(l);
    phi[l + 1].resize(nodes.size());
    for (std::size_t r = 0; r < nodes.size(); ++r) {
      const auto& node = nodes[r];
      red.clear();
      for (const auto& e : node.red_in) red.push_back({phi[l][e.source], e.multiplicity});
      phi[l + 1][r] = add_node(l, *node.label, phi[l][node.parent], red);
    }
  }
  return phi;
}

int ViewBuilder::embed(const View& view) { return embed_all(view).back().front(); }

View ViewBuilder::finish() const {
  const int levels = static_cast<int>(levels_.size());
  if (levels_.back().nodes.size() != 1) {
    throw std::invalid_argument("view must end in a single viewpoint");
  }

  // Reachability from the viewpoint, on local ids.
  std::vector<std::vector<char>> seen(levels);
  for (int i = 0; i < levels; ++i) seen[i].assign(levels_[i].nodes.size(), 0);
  seen[levels - 1][0] = 1;
  for (int i = levels - 1; i >= 1; --i) {
    for (std::size_t id = 0; id < seen[i].size(); ++id) {
      if (!seen[i][id]) continue;
      const Key& key = *levels_[i].nodes[id];
      seen[i - 1][key.parent] = 1;
      for (const auto& e : key.red_in) seen[i - 1][e.source] = 1;
    }
  }
  for (const auto& s : seen) {
    if (std::find(s.begin(), s.end(), 0) != s.end()) {
      throw std::invalid_argument("view has a node off every ascending path");
    }
  }

  View view;
  view.levels_.resize(levels);
  view.levels_[0].resize(1);
  std::vector<int> prev_rank{0};
  for (int i = 1; i < levels; ++i) {
    const auto& ids = levels_[i].nodes;
    std::vector<Key> keys;
    keys.reserve(ids.size());
    for (const Key* k : ids) {
      Key mapped{k->label, prev_rank[k->parent], k->red_in};
      for (auto& e : mapped.red_in) e.source = prev_rank[e.source];
      std::sort(mapped.red_in.begin(), mapped.red_in.end());
      keys.push_back(std::move(mapped));
    }
    std::vector<int> order(ids.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return keys[a] < keys[b]; });
    std::vector<int> rank(ids.size());
    auto& out = view.levels_[i];
    out.resize(ids.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
      if (r > 0 && keys[order[r]] == keys[order[r - 1]]) {
        throw std::invalid_argument("view has two indistinguishable siblings");
      }
      rank[order[r]] = static_cast<int>(r);
      Key& k = keys[order[r]];
      out[r].label = std::move(k.label);
      out[r].parent = k.parent;
      out[r].red_in = std::move(k.red_in);
      view.levels_[i - 1][out[r].parent].children.push_back(static_cast<int>(r));
    }
    prev_rank = std::move(rank);
  }
  return view;
}

View merge_view(const View& own, std::span<const Message> received) {
  const int level = own.last_level();
  ViewBuilder builder;
  const int own_vp = builder.embed(own);
  std::vector<RedEdge> red;
  for (const auto& msg : received) {
    if (msg.view->last_level() != level) {
      throw std::invalid_argument("merge_view: received view from another round");
    }
    if (msg.multiplicity == 0) continue;
    red.push_back({builder.embed(*msg.view), msg.multiplicity});
  }
  builder.add_node(level + 1, own.label(own.viewpoint()), own_vp, std::move(red));
  return builder.finish();
}

}  // namespace adn
