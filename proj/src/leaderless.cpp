#include "adn/leaderless.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace adn {

std::optional<LevelZeroWeights> concentration_weights(const View& view) {
  const auto found = find_equations(view);
  if (found.t < 0) return std::nullopt;
  const auto alpha = solve_one_parameter(found.system);
  if (!alpha) return std::nullopt;

  LevelZeroWeights w;
  w.t = found.t;
  w.beta.assign(view.level(0).size(), 0);
  const auto level_t = view.level(found.t);
  for (std::size_t j = 0; j < level_t.size(); ++j) {
    int rank = static_cast<int>(j);
    for (int l = found.t; l > 0; --l) rank = view.level(l)[rank].parent;
    w.beta[rank] += (*alpha)[j];
  }
  w.total = 0;
  for (const auto& b : w.beta) w.total += b;
  return w;
}

namespace {
Concentration normalize(const View& view, const LevelZeroWeights& w) {
  Concentration out;
  const auto level0 = view.level(0);
  for (std::size_t i = 0; i < level0.size(); ++i) {
    mpq_class q = w.beta[i] / w.total;
    q.canonicalize();
    out[*level0[i].label] = q;
  }
  return out;
}
}  // namespace

std::optional<Concentration> stabilizing_concentration(const View& view) {
  const auto w = concentration_weights(view);
  if (!w) return std::nullopt;
  return normalize(view, *w);
}

TerminatingOutput terminating_concentration(const View& view, int T, int N, int current_round) {
  const auto w = concentration_weights(view);
  if (!w) return {};
  TerminatingOutput out;
  out.output = normalize(view, *w);
  out.terminated = current_round >= w->t + static_cast<long long>(T) * N;
  return out;
}

Inventory scaled_inventory(const Concentration& conc) {
  mpz_class d = 1;
  for (const auto& [label, q] : conc) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), q.get_den_mpz_t());
  Inventory inv;
  for (const auto& [label, q] : conc) {
    mpq_class scaled = q * d;
    scaled.canonicalize();
    inv[label] = scaled.get_num().get_ui();
  }
  return inv;
}

mpq_class numeric_value(const std::string& value) {
  const auto bad = [&] { return std::invalid_argument("not a number: '" + value + "'"); };
  if (value.empty()) throw bad();
  const auto dot = value.find('.');
  if (dot != std::string::npos) {
    std::string digits = value.substr(0, dot) + value.substr(dot + 1);
    const std::size_t start = !digits.empty() && digits[0] == '-' ? 1 : 0;
    if (digits.size() == start || value.size() == dot + 1) throw bad();
    for (std::size_t i = start; i < digits.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(digits[i]))) throw bad();
    }
    mpz_class num(digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, value.size() - dot - 1);
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
  for (std::size_t i = 0; i < value.size(); ++i) {
    const char c = value[i];
    if (!(std::isdigit(static_cast<unsigned char>(c)) || (c == '-' && i == 0) || c == '/')) {
      throw bad();
    }
  }
  mpq_class q;
  if (q.set_str(value, 10) != 0 || q.get_den() == 0) throw bad();
  q.canonicalize();
  return q;
}

namespace signatures {

namespace {
mpq_class count(const Inventory& inv) {
  mpq_class total = 0;
  for (const auto& [label, m] : inv) total += m;
  return total;
}
}  // namespace

mpq_class mean(const ProcessInput&, const Inventory& inv) {
  mpq_class sum = 0;
  for (const auto& [label, m] : inv) sum += numeric_value(label.value) * m;
  mpq_class out = sum / count(inv);
  out.canonicalize();
  return out;
}

mpq_class max(const ProcessInput&, const Inventory& inv) {
  if (inv.empty()) throw std::invalid_argument("max of an empty multiset");
  std::optional<mpq_class> best;
  for (const auto& [label, m] : inv) {
    const auto v = numeric_value(label.value);
    if (!best || v > *best) best = v;
  }
  return *best;
}

mpq_class mode(const ProcessInput&, const Inventory& inv) {
  std::map<mpq_class, std::uint64_t> freq;
  for (const auto& [label, m] : inv) freq[numeric_value(label.value)] += m;
  if (freq.empty()) throw std::invalid_argument("mode of an empty multiset");
  auto best = freq.begin();
  for (auto it = freq.begin(); it != freq.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

mpq_class variance(const ProcessInput& own, const Inventory& inv) {
  const mpq_class mu = mean(own, inv);
  mpq_class sum = 0;
  for (const auto& [label, m] : inv) {
    const mpq_class dev = numeric_value(label.value) - mu;
    sum += dev * dev * m;
  }
  mpq_class out = sum / count(inv);
  out.canonicalize();
  return out;
}

}  // namespace signatures

std::optional<mpq_class> average_consensus(const View& view) {
  const auto conc = stabilizing_concentration(view);
  if (!conc) return std::nullopt;
  mpq_class sum = 0;
  for (const auto& [label, q] : *conc) sum += numeric_value(label.value) * q;
  sum.canonicalize();
  return sum;
}

}  // namespace adn
