#include <limits>
#include <set>

#include "view_index.hpp"

namespace adn {

std::int64_t guess_from(std::span<const std::int64_t> child_counts,
                        std::span<const std::uint64_t> red_to_parent, std::uint64_t m) {
  std::int64_t num = 0;
  for (std::size_t i = 0; i < child_counts.size(); ++i) {
    num += child_counts[i] * static_cast<std::int64_t>(red_to_parent[i]);
  }
  const auto den = static_cast<std::int64_t>(m);
  return (num + den - 1) / den;
}

namespace detail {

namespace {

class ApproxRun {
 public:
  ApproxRun(const ViewIndex& ix, int s, ApproxTrace* trace)
      : ix_(ix),
        s_(s),
        trace_(trace),
        a_(ix.size(), 0),
        g_(ix.size(), 0),
        w_(ix.size(), 0),
        counted_(ix.size(), 0),
        guessed_(ix.size(), 0),
        guesser_(ix.size(), 0),
        covered_(ix.size(), 0),
        locked_(ix.last_level + 1, 0),
        candidates_(ix.last_level + 1) {
    for (int v = 0; v < ix.size(); ++v) {
      if (ix.children[v].empty()) ++uncovered_leaves_;
    }
  }

  ApproxResult run(std::int64_t x, int leaders) {
    int tau = -1;
    for (int r = 0; r < ix_.level_size(s_); ++r) {
      if (ix_.leader[ix_.id(s_, r)]) {
        tau = ix_.id(s_, r);
        break;
      }
    }
    if (tau < 0) return {kNoLeaderNode, s_};

    int end = tau;
    mark_counted(end, x);
    while (ix_.children[end].size() == 1) {
      end = ix_.children[end][0];
      mark_counted(end, x);
    }
    if (trace_) {
      trace_->tau = ix_.ref(tau);
      trace_->strand_end = ix_.level[end];
    }

    while (uncovered_leaves_ > 0 && !ready_.empty()) iterate();

    if (uncovered_leaves_ > 0) return {kLeaderBranches, ix_.level[end]};

    // The topmost counted nodes form a minimal counting cut.
    std::int64_t total = 0;
    std::int64_t leader_total = 0;
    int deepest = -1;
    std::vector<int> stack{0};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (counted_[v]) {
        total += a_[v];
        if (ix_.leader[v]) leader_total += a_[v];
        deepest = std::max(deepest, ix_.level[v]);
        if (trace_) trace_->cut.push_back(ix_.ref(v));
        continue;
      }
      for (int c : ix_.children[v]) stack.push_back(c);
    }
    if (leader_total == leaders) return {total, deepest};
    return {kLeaderMismatch, deepest};
  }

 private:
  void iterate() {
    const int l = *ready_.begin();
    const int v = *candidates_[l].begin();
    const int p = ix_.parent[v];

    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    int best_u = -1;
    for (const auto& [u, m] : ix_.red_in[v]) {
      if (u == p || !guesser_[u]) continue;
      counts_.clear();
      reds_.clear();
      for (int c : ix_.children[u]) {
        counts_.push_back(a_[c]);
        reds_.push_back(ix_.red(c, p));
      }
      const std::int64_t guess = guess_from(counts_, reds_, m);
      if (guess < best) {
        best = guess;
        best_u = u;
      }
    }

    g_[v] = best;
    guessed_[v] = 1;
    if (locked_[l]++ == 0) ++locked_levels_;
    update_ready(l);
    for (int y = v;; y = ix_.parent[y]) {
      ++w_[y];
      if (ix_.level[y] == s_) break;
    }
    if (trace_) {
      GuessRecord rec{ix_.ref(v), best, ix_.ref(best_u), {}};
      for (int c : ix_.children[best_u]) rec.guesser_children.push_back({ix_.ref(c), a_[c]});
      trace_->guesses.push_back(std::move(rec));
      trace_->max_locked_levels = std::max(trace_->max_locked_levels, locked_levels_);
      trace_->max_guessed_per_level = std::max(trace_->max_guessed_per_level, locked_[l]);
    }

    int heavy = -1;
    for (int y = v;; y = ix_.parent[y]) {
      if (guessed_[y] && w_[y] >= g_[y]) {
        heavy = y;
        break;
      }
      if (ix_.level[y] == s_) break;
    }
    if (heavy >= 0) {
      mark_counted(heavy, g_[heavy]);
      if (trace_) trace_->counted.push_back({ix_.ref(heavy), g_[heavy], false});
      int root = ix_.parent[heavy];
      while (ix_.level[root] >= s_ && !counted_[root]) root = ix_.parent[root];
      if (ix_.level[root] >= s_) resolve_isle(root);
      resolve_isle(heavy);
    }

    if (trace_) {
      int heavy_left = 0;
      for (int y = v;; y = ix_.parent[y]) {
        if (guessed_[y] && w_[y] >= g_[y]) ++heavy_left;
        if (ix_.level[y] == s_) break;
      }
      trace_->heavy_after_iteration = std::max(trace_->heavy_after_iteration, heavy_left);
    }
  }

  // If the counted node `root` and the topmost counted nodes below it form a
  // complete isle, fills in the internal nodes bottom-up.
  void resolve_isle(int root) {
    std::vector<int> internal;
    std::vector<int> stack(ix_.children[root].begin(), ix_.children[root].end());
    if (stack.empty()) return;
    std::int64_t leaf_sum = 0;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (counted_[v]) {
        leaf_sum += a_[v];
        continue;
      }
      if (ix_.children[v].empty()) return;  // no cut below root
      internal.push_back(v);
      for (int c : ix_.children[v]) stack.push_back(c);
    }
    if (internal.empty() || leaf_sum != a_[root]) return;
    for (auto it = internal.rbegin(); it != internal.rend(); ++it) {
      std::int64_t sum = 0;
      for (int c : ix_.children[*it]) sum += a_[c];
      mark_counted(*it, sum);
      if (trace_) trace_->counted.push_back({ix_.ref(*it), sum, true});
    }
  }

  void mark_counted(int v, std::int64_t value) {
    a_[v] = value;
    counted_[v] = 1;
    const int l = ix_.level[v];
    if (guessed_[v]) {
      guessed_[v] = 0;
      for (int y = v;; y = ix_.parent[y]) {
        --w_[y];
        if (ix_.level[y] == s_) break;
      }
      if (--locked_[l] == 0) --locked_levels_;
    }
    candidates_[l].erase(v);
    update_ready(l);
    cover(v);
    refresh_guesser(v);
    if (ix_.parent[v] >= 0) refresh_guesser(ix_.parent[v]);
  }

  void refresh_guesser(int u) {
    if (guesser_[u] || !counted_[u] || ix_.children[u].empty()) return;
    std::int64_t sum = 0;
    for (int c : ix_.children[u]) {
      if (!counted_[c]) return;
      sum += a_[c];
    }
    if (sum != a_[u]) return;
    guesser_[u] = 1;
    for (const auto& [v, m] : ix_.red_out[u]) {
      if (counted_[v] || ix_.parent[v] == u) continue;
      candidates_[ix_.level[v]].insert(v);
      update_ready(ix_.level[v]);
    }
  }

  void cover(int v) {
    std::vector<int> stack{v};
    while (!stack.empty()) {
      const int y = stack.back();
      stack.pop_back();
      if (covered_[y]) continue;
      covered_[y] = 1;
      if (ix_.children[y].empty()) --uncovered_leaves_;
      for (int c : ix_.children[y]) stack.push_back(c);
    }
  }

  void update_ready(int l) {
    if (l < 0) return;
    if (locked_[l] == 0 && !candidates_[l].empty()) {
      ready_.insert(l);
    } else {
      ready_.erase(l);
    }
  }

  const ViewIndex& ix_;
  const int s_;
  ApproxTrace* trace_;
  std::vector<std::int64_t> a_;
  std::vector<std::int64_t> g_;
  std::vector<int> w_;
  std::vector<char> counted_;
  std::vector<char> guessed_;
  std::vector<char> guesser_;
  std::vector<char> covered_;
  std::vector<int> locked_;
  std::vector<std::set<int>> candidates_;
  std::set<int> ready_;
  std::vector<std::int64_t> counts_;
  std::vector<std::uint64_t> reds_;
  int uncovered_leaves_ = 0;
  int locked_levels_ = 0;
};

}  // namespace

ApproxResult approx_count(const ViewIndex& index, int s, std::int64_t x, int leaders,
                          ApproxTrace* trace) {
  if (trace) *trace = ApproxTrace{};
  if (s < 0 || s > index.last_level) return {kNoLeaderNode, s};
  return ApproxRun(index, s, trace).run(x, leaders);
}

}  // namespace detail

ApproxResult approx_count(const View& view, int s, std::int64_t x, int leaders,
                          ApproxTrace* trace) {
  return detail::approx_count(detail::ViewIndex(view), s, x, leaders, trace);
}

}  // namespace adn
