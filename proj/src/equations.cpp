#include "adn/equations.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace adn {

namespace {

std::uint64_t red_multiplicity(const ViewNode& node, int source) {
  auto it = std::lower_bound(node.red_in.begin(), node.red_in.end(), source,
                             [](const RedEdge& e, int s) { return e.source < s; });
  return it != node.red_in.end() && it->source == source ? it->multiplicity : 0;
}

using Matrix = std::vector<std::vector<mpq_class>>;

Matrix coefficients(const LinearSystem& system) {
  Matrix a;
  for (const auto& eq : system.equations) {
    std::vector<mpq_class> row(system.k, 0);
    row.at(eq.i) += mpq_class(mpz_class(std::to_string(eq.m1)));
    row.at(eq.j) -= mpq_class(mpz_class(std::to_string(eq.m2)));
    a.push_back(std::move(row));
  }
  return a;
}

// Reduced row echelon form in place; returns the pivot column of each
// nonzero row.
std::vector<int> reduce(Matrix& a, int cols) {
  std::vector<int> pivots;
  std::size_t row = 0;
  for (int c = 0; c < cols && row < a.size(); ++c) {
    std::size_t p = row;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[row], a[p]);
    const mpq_class lead = a[row][c];
    for (auto& v : a[row]) v /= lead;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][c] == 0) continue;
      const mpq_class f = a[r][c];
      for (int cc = c; cc < cols; ++cc) a[r][cc] -= f * a[row][cc];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

}  // namespace

EquationResult find_equations(const View& view) {
  int s = 0;
  for (int t = 0; t <= view.last_level(); ++t) {
    const auto level_t = view.level(t);
    bool branching = false;
    for (const auto& node : level_t) {
      if (node.children.empty()) return {};
      if (node.children.size() > 1) branching = true;
    }
    if (branching) {
      s = t + 1;
      continue;
    }

    const int k = static_cast<int>(level_t.size());
    // strand[r - s][rank] = index of the strand through node (r, rank).
    std::vector<std::vector<int>> strand(t - s + 1);
    strand[t - s].resize(k);
    for (int i = 0; i < k; ++i) strand[t - s][i] = i;
    for (int r = t - 1; r >= s; --r) {
      strand[r - s].resize(k);
      const auto below = view.level(r + 1);
      for (int i = 0; i < k; ++i) strand[r - s][below[i].parent] = strand[r + 1 - s][i];
    }

    // First exposed pair of each pair of strands, by level.
    std::map<std::pair<int, int>, std::pair<std::uint64_t, std::uint64_t>> exposed;
    for (int r = s; r <= t; ++r) {
      const auto nodes = view.level(r);
      const auto below = view.level(r + 1);
      for (int a = 0; a < k; ++a) {
        const ViewNode& a_child = below[nodes[a].children[0]];
        for (const auto& e : a_child.red_in) {
          const int b = e.source;
          if (b == a) continue;
          const std::uint64_t back = red_multiplicity(below[nodes[b].children[0]], a);
          if (back == 0) continue;
          const int pa = strand[r - s][a];
          const int pb = strand[r - s][b];
          if (pa < pb) {
            exposed.emplace(std::pair{pa, pb}, std::pair{e.multiplicity, back});
          } else {
            exposed.emplace(std::pair{pb, pa}, std::pair{back, e.multiplicity});
          }
        }
      }
    }

    std::vector<std::vector<int>> adj(k);
    for (const auto& [pair, m] : exposed) {
      adj[pair.first].push_back(pair.second);
      adj[pair.second].push_back(pair.first);
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    std::vector<char> seen(k, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    EquationResult result;
    result.t = t;
    result.system.k = k;
    int reached = 1;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : adj[u]) {
        if (seen[v]) continue;
        seen[v] = 1;
        ++reached;
        queue.push_back(v);
        const int i = std::min(u, v);
        const int j = std::max(u, v);
        const auto [m1, m2] = exposed.at({i, j});
        result.system.equations.push_back({i, m1, j, m2});
      }
    }
    if (reached == k) return result;
  }
  return {};
}

int rank(const LinearSystem& system) {
  Matrix a = coefficients(system);
  return static_cast<int>(reduce(a, system.k).size());
}

std::optional<std::vector<mpq_class>> solve_one_parameter(const LinearSystem& system) {
  const int k = system.k;
  if (k < 1) return std::nullopt;
  Matrix a = coefficients(system);
  const auto pivots = reduce(a, k);
  if (static_cast<int>(pivots.size()) != k - 1) return std::nullopt;
  int free_col = k - 1;
  for (int c = 0; c < static_cast<int>(pivots.size()); ++c) {
    if (pivots[c] != c) {
      free_col = c;
      break;
    }
  }
  std::vector<mpq_class> x(k, 0);
  x[free_col] = 1;
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -a[r][free_col];
  if (x[0] == 0) return std::nullopt;
  const mpq_class scale = x[0];
  for (auto& v : x) v /= scale;
  return x;
}

std::string to_string(const LinearSystem& system) {
  std::ostringstream out;
  for (const auto& eq : system.equations) {
    out << eq.m1 << "*x_" << eq.i + 1 << " = " << eq.m2 << "*x_" << eq.j + 1 << '\n';
  }
  return out.str();
}

}  // namespace adn
