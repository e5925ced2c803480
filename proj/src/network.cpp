#include "adn/network.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace adn {

std::string to_string(const ProcessInput& input) {
  return input.leader ? "L:" + input.value : input.value;
}

int count_leaders(const InputAssignment& inputs) {
  return static_cast<int>(std::count_if(inputs.begin(), inputs.end(),
                                        [](const auto& in) { return in.leader; }));
}

void RoundGraph::add_edge(ProcessId i, ProcessId j, std::uint64_t multiplicity) {
  if (i == j) throw std::invalid_argument("self-loop on process " + std::to_string(i));
  if (multiplicity == 0) throw std::invalid_argument("zero edge multiplicity");
  if (i > j) std::swap(i, j);
  edges_[{i, j}] += multiplicity;
}

std::uint64_t RoundGraph::multiplicity(ProcessId i, ProcessId j) const {
  if (i > j) std::swap(i, j);
  auto it = edges_.find({i, j});
  return it == edges_.end() ? 0 : it->second;
}

std::uint64_t RoundGraph::total_multiplicity() const {
  std::uint64_t total = 0;
  for (const auto& [pair, m] : edges_) total += m;
  return total;
}

std::vector<std::vector<Link>> RoundGraph::incidence(int n) const {
  std::vector<std::vector<Link>> adj(n + 1);
  for (const auto& [pair, m] : edges_) {
    adj[pair.first].push_back({pair.second, m});
    adj[pair.second].push_back({pair.first, m});
  }
  for (auto& links : adj) {
    std::sort(links.begin(), links.end(),
              [](const Link& a, const Link& b) { return a.peer < b.peer; });
  }
  return adj;
}

RoundGraph& RoundGraph::operator+=(const RoundGraph& other) {
  for (const auto& [pair, m] : other.edges_) edges_[pair] += m;
  return *this;
}

const RoundGraph& Schedule::round(int t) const {
  static const RoundGraph kEmpty;
  if (t < 1 || t > length()) return kEmpty;
  return rounds[t - 1];
}

void Schedule::validate() const {
  if (n < 1) throw std::invalid_argument("schedule needs n >= 1");
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    for (const auto& [pair, m] : rounds[r].edges()) {
      if (pair.first < 1 || pair.second > n) {
        throw std::invalid_argument("round " + std::to_string(r + 1) +
                                    ": endpoint outside [1, n]");
      }
    }
  }
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n + 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};

// Components of the union of rounds [first, last], as vertex lists.
std::vector<std::vector<ProcessId>> window_components(const Schedule& s, int first,
                                                      int last) {
  DisjointSets sets(s.n);
  for (int t = first; t <= last; ++t) {
    for (const auto& [pair, m] : s.round(t).edges()) sets.unite(pair.first, pair.second);
  }
  std::map<int, std::vector<ProcessId>> by_root;
  for (ProcessId p = 1; p <= s.n; ++p) by_root[sets.find(p)].push_back(p);
  std::vector<std::vector<ProcessId>> out;
  for (auto& [root, members] : by_root) out.push_back(std::move(members));
  return out;
}

}  // namespace

bool validate_disconnectivity(const Schedule& schedule, int T) {
  if (T <= 0 || T > schedule.length()) {
    throw std::invalid_argument("T must lie in [1, number of rounds]");
  }
  if (schedule.n == 1) return true;
  for (int first = 1; first + T - 1 <= schedule.length(); ++first) {
    if (window_components(schedule, first, first + T - 1).size() != 1) return false;
  }
  return true;
}

Schedule block_reduce(const Schedule& schedule, int T) {
  if (T <= 0) throw std::invalid_argument("T must be positive");
  Schedule out;
  out.n = schedule.n;
  const int blocks = (schedule.length() + T - 1) / T;
  out.rounds.resize(blocks);
  for (int t = 1; t <= schedule.length(); ++t) out.rounds[(t - 1) / T] += schedule.round(t);
  return out;
}

Schedule gen_random_schedule(int n, int T, int num_blocks, std::uint64_t seed) {
  if (n < 1 || T < 1 || num_blocks < 0) {
    throw std::invalid_argument("gen_random_schedule needs n >= 1, T >= 1");
  }
  Schedule s;
  s.n = n;
  s.rounds.resize(static_cast<std::size_t>(num_blocks) * T);
  if (n == 1) return s;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(1, n);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution doubled(0.1);

  auto random_pair = [&] {
    int a = pick(rng);
    int b = pick(rng);
    while (b == a) b = pick(rng);
    return std::pair{a, b};
  };

  for (int t = 1; t <= s.length(); ++t) {
    auto& round = s.rounds[t - 1];
    // Background noise: half of the rounds carry a few random links.
    if (coin(rng)) {
      std::geometric_distribution<int> extra(0.5);
      const int count = 1 + std::min(extra(rng), n);
      for (int e = 0; e < count; ++e) {
        auto [a, b] = random_pair();
        round.add_edge(a, b, doubled(rng) ? 2 : 1);
      }
    }
    if (t < T) continue;
    // Repair: the window ending at t must be connected; join its components
    // with a random tree whose edges all land in round t.
    auto comps = window_components(s, t - T + 1, t);
    if (comps.size() == 1) continue;
    std::shuffle(comps.begin(), comps.end(), rng);
    for (std::size_t c = 1; c < comps.size(); ++c) {
      std::uniform_int_distribution<std::size_t> earlier(0, c - 1);
      const auto& from = comps[c];
      const auto& to = comps[earlier(rng)];
      std::uniform_int_distribution<std::size_t> in_from(0, from.size() - 1);
      std::uniform_int_distribution<std::size_t> in_to(0, to.size() - 1);
      round.add_edge(from[in_from(rng)], to[in_to(rng)], doubled(rng) ? 2 : 1);
    }
  }
  return s;
}

Schedule static_cycle(int n, int rounds) {
  Schedule s;
  s.n = n;
  RoundGraph g;
  if (n == 2) {
    g.add_edge(1, 2);
  } else if (n > 2) {
    for (int p = 1; p <= n; ++p) g.add_edge(p, p % n + 1);
  }
  s.rounds.assign(rounds, g);
  return s;
}

Network gen_scale_family(std::span<const int> partite_sizes, int alpha, int rounds) {
  if (partite_sizes.empty()) throw std::invalid_argument("need at least one part");
  if (alpha < 1) throw std::invalid_argument("alpha must be positive");
  int g = 0;
  for (int m : partite_sizes) {
    if (m <= 2) throw std::invalid_argument("part sizes must exceed 2");
    g = std::gcd(g, m);
  }
  if (g != 1) throw std::invalid_argument("part sizes must have gcd 1");

  const int k = static_cast<int>(partite_sizes.size());
  const int copy_size = std::accumulate(partite_sizes.begin(), partite_sizes.end(), 0);
  // Process id of member `j` of part `i` in copy `c`, all 0-based.
  std::vector<int> part_offset(k, 0);
  for (int i = 1; i < k; ++i) part_offset[i] = part_offset[i - 1] + partite_sizes[i - 1];
  auto id = [&](int c, int i, int j) { return c * copy_size + part_offset[i] + j + 1; };

  Network net;
  net.schedule.n = alpha * copy_size;
  net.inputs.resize(net.schedule.n);
  RoundGraph graph;
  for (int c = 0; c < alpha; ++c) {
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < partite_sizes[i]; ++j) {
        net.inputs[id(c, i, j) - 1] = {"z" + std::to_string(i + 1), false};
        for (int i2 = i + 1; i2 < k; ++i2) {
          for (int j2 = 0; j2 < partite_sizes[i2]; ++j2) graph.add_edge(id(c, i, j), id(c, i2, j2));
        }
      }
    }
  }
  for (int i = 0; i < k; ++i) {
    std::vector<int> ring;
    for (int c = 0; c < alpha; ++c) {
      for (int j = 0; j < partite_sizes[i]; ++j) ring.push_back(id(c, i, j));
    }
    for (std::size_t r = 0; r < ring.size(); ++r) graph.add_edge(ring[r], ring[(r + 1) % ring.size()]);
  }
  net.schedule.rounds.assign(rounds, graph);
  return net;
}

Network gen_leader_ring(int k, int i, int rounds) {
  if (i < 3) throw std::invalid_argument("leader ring needs i >= 3");
  if (k < 1) throw std::invalid_argument("leader ring needs k >= 1");
  Network net;
  net.schedule = static_cycle(k * i, rounds);
  net.inputs.assign(k * i, ProcessInput{"z", false});
  for (int leader = 0; leader < i; ++leader) net.inputs[leader * k].leader = true;
  return net;
}

MarkedCycle gen_cycle_with_one_marked(int t, int rounds) {
  if (t < 1) throw std::invalid_argument("marked cycle needs t >= 1");
  MarkedCycle out;
  out.marked.schedule = static_cycle(2 * t + 2, rounds);
  out.marked.inputs.assign(2 * t + 2, ProcessInput{"0", false});
  out.marked.inputs[0].value = "1";
  out.companion.schedule = static_cycle(3, rounds);
  out.companion.inputs.assign(3, ProcessInput{"0", false});
  return out;
}

}  // namespace adn
