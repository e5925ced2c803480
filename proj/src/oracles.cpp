#include "adn/oracles.hpp"

#include <algorithm>
#include <queue>
#include <string>
#include <unordered_map>

namespace adn::oracle {

namespace {

struct VectorHash {
  std::size_t operator()(const std::vector<long long>& v) const {
    std::size_t h = v.size();
    for (long long x : v) h ^= std::hash<long long>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

std::vector<std::vector<int>> refinement_classes(const Schedule& schedule,
                                                 const InputAssignment& inputs, int horizon) {
  const int n = schedule.n;
  std::vector<std::vector<int>> classes(horizon + 1, std::vector<int>(n));
  std::unordered_map<std::string, int> by_input;
  for (int p = 0; p < n; ++p) {
    const std::string key = (inputs[p].leader ? "L" : "N") + inputs[p].value;
    classes[0][p] = by_input.emplace(key, static_cast<int>(by_input.size())).first->second;
  }
  for (int t = 1; t <= horizon; ++t) {
    // Signature: own previous class, then every received class repeated by
    // its link multiplicity, sorted.
    std::vector<std::vector<long long>> sig(n);
    for (int p = 0; p < n; ++p) sig[p].push_back(classes[t - 1][p]);
    for (const auto& [pair, m] : schedule.round(t).edges()) {
      const int a = pair.first - 1;
      const int b = pair.second - 1;
      for (std::uint64_t c = 0; c < m; ++c) {
        sig[a].push_back(classes[t - 1][b]);
        sig[b].push_back(classes[t - 1][a]);
      }
    }
    std::unordered_map<std::vector<long long>, int, VectorHash> ids;
    for (int p = 0; p < n; ++p) {
      std::sort(sig[p].begin() + 1, sig[p].end());
      classes[t][p] = ids.emplace(sig[p], static_cast<int>(ids.size())).first->second;
    }
  }
  return classes;
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::unordered_map<int, int> ab;
  std::unordered_map<int, int> ba;
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (ab.emplace(a[p], b[p]).first->second != b[p]) return false;
    if (ba.emplace(b[p], a[p]).first->second != a[p]) return false;
  }
  return true;
}

bool window_connected(const Schedule& schedule, int first, int last) {
  const int n = schedule.n;
  std::vector<std::vector<int>> adj(n + 1);
  for (int t = first; t <= last; ++t) {
    for (const auto& [pair, m] : schedule.round(t).edges()) {
      adj[pair.first].push_back(pair.second);
      adj[pair.second].push_back(pair.first);
    }
  }
  std::vector<char> seen(n + 1, 0);
  std::queue<int> queue;
  queue.push(1);
  seen[1] = 1;
  int reached = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        queue.push(v);
      }
    }
  }
  return reached == n;
}

Inventory input_multiset(const InputAssignment& inputs) {
  Inventory inv;
  for (const auto& in : inputs) ++inv[in];
  return inv;
}

Concentration input_concentration(const InputAssignment& inputs) {
  Concentration conc;
  for (const auto& [label, m] : input_multiset(inputs)) {
    mpq_class q(static_cast<unsigned long>(m), static_cast<unsigned long>(inputs.size()));
    q.canonicalize();
    conc[label] = q;
  }
  return conc;
}

}  // namespace adn::oracle
