#include <doctest.h>

#include "adn/harness.hpp"
#include "adn/leaderless.hpp"
#include "adn/oracles.hpp"
#include "support.hpp"

using namespace adn;
using testing::make_inputs;
using testing::make_schedule;
using testing::view_at;

namespace {

ProcessInput in(const std::string& v) { return {v, false}; }

}  // namespace

TEST_SUITE("leaderless") {

TEST_CASE("equal inputs concentrate on one value") {
  const auto s = gen_random_schedule(4, 2, 8, 5);
  const auto inputs = make_inputs({"z", "z", "z", "z"});
  Simulator sim(s, inputs);
  int known = 0;
  for (int t = 0; t <= 16; ++t) {
    const auto out = stabilizing_concentration(sim.view(1));
    if (out) {
      ++known;
      CHECK(*out == Concentration{{in("z"), 1}});
    }
    if (t < 16) sim.step();
  }
  CHECK(known > 0);
}

TEST_CASE("two linked processes split evenly") {
  const auto s = make_schedule(2, std::vector<testing::EdgeList>(6, {{1, 2, 1}}));
  const auto inputs = make_inputs({"A", "B"});
  const Concentration half{{in("A"), mpq_class(1, 2)}, {in("B"), mpq_class(1, 2)}};
  for (int t = 2; t <= 6; ++t) {
    CHECK(stabilizing_concentration(view_at(s, inputs, t, 1)) == half);
    CHECK(stabilizing_concentration(view_at(s, inputs, t, 2)) == half);
  }
}

TEST_CASE("a lone process terminates by T(n+N)") {
  Schedule s;
  s.n = 1;
  s.rounds.resize(3);
  const auto inputs = make_inputs({"z"});
  CHECK_FALSE(terminating_concentration(view_at(s, inputs, 0, 1), 1, 1, 0).terminated);
  const auto out = terminating_concentration(view_at(s, inputs, 1, 1), 1, 1, 1);
  CHECK(out.terminated);
  CHECK(out.output == Concentration{{in("z"), 1}});
}

TEST_CASE("scaled inventories and signatures") {
  const Concentration thirds{{in("A"), mpq_class(2, 3)}, {in("B"), mpq_class(1, 3)}};
  CHECK(scaled_inventory(thirds) == Inventory{{in("A"), 2}, {in("B"), 1}});

  const Concentration half{{in("0"), mpq_class(1, 2)}, {in("1"), mpq_class(1, 2)}};
  const Signature<mpq_class> mean = signatures::mean;
  CHECK(scale_invariant_eval(half, in("0"), mean) == mpq_class(1, 2));

  const Inventory inv{{in("1"), 3}, {in("4"), 1}, {in("2"), 3}};
  CHECK(signatures::max(in("1"), inv) == 4);
  CHECK(signatures::mode(in("1"), inv) == 1);
  CHECK(signatures::mean(in("1"), inv) == mpq_class(13, 7));
  CHECK(signatures::variance(in("1"), Inventory{{in("0"), 1}, {in("2"), 1}}) == 1);

  for (int t = 1; t <= 4; ++t) {
    const auto mc = gen_cycle_with_one_marked(t, 1);
    const auto conc = oracle::input_concentration(mc.marked.inputs);
    CHECK(scale_invariant_eval(conc, in("0"), mean) == mpq_class(1, 2 * t + 2));
  }
}

TEST_CASE("numeric values") {
  CHECK(numeric_value("3") == 3);
  CHECK(numeric_value("-2") == -2);
  CHECK(numeric_value("5/4") == mpq_class(5, 4));
  CHECK(numeric_value("0.25") == mpq_class(1, 4));
  CHECK(numeric_value("-1.5") == mpq_class(-3, 2));
  for (const char* bad : {"", "z", "1.", "1/0", "--1", "1.2.3"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(numeric_value(bad), std::invalid_argument);
  }
}

TEST_CASE("average consensus") {
  const auto fives = make_inputs({"5", "5", "5"});
  const auto cycle = static_cycle(3, 8);
  CHECK(average_consensus(view_at(cycle, fives, 6, 2)) == 5);
  const auto mixed = make_inputs({"0", "0", "1"});
  for (ProcessId p = 1; p <= 3; ++p) {
    CHECK(average_consensus(view_at(cycle, mixed, 6, p)) == mpq_class(1, 3));
  }
}

TEST_CASE("property: concentrations sum to one and stabilize by 2Tn") {
  for (int n = 1; n <= 6; ++n) {
    for (int T = 1; T <= 2; ++T) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        CAPTURE(n);
        CAPTURE(T);
        CAPTURE(seed);
        const int horizon = 3 * T * n;
        const auto s = gen_random_schedule(n, T, horizon / T + 1, seed);
        const auto inputs = gen_random_inputs(n, 0, seed * 3 + 1);
        const auto truth = oracle::input_concentration(inputs);
        Simulator sim(s, inputs);
        for (int t = 0; t <= horizon; ++t) {
          for (const auto& [id, view] : sim.views()) {
            const auto out = stabilizing_concentration(*view);
            if (out) {
              mpq_class sum = 0;
              for (const auto& [label, q] : *out) sum += q;
              CHECK(sum == 1);
              CHECK(out->size() == view->level(0).size());
            }
            if (t >= 2 * T * n) CHECK(out == truth);
          }
          if (t < horizon) sim.step();
        }
      }
    }
  }
}

TEST_CASE("property: scaled copies give identical outputs") {
  const std::vector<int> sizes{3, 4};
  std::vector<std::vector<std::optional<Concentration>>> per_alpha;
  for (int alpha = 1; alpha <= 3; ++alpha) {
    const auto net = gen_scale_family(sizes, alpha, 15);
    const auto result = simulate(
        net.schedule, net.inputs, 15,
        [](ProcessId, int, const View& v, std::uint64_t) { return stabilizing_concentration(v); },
        [](const auto&) { return false; });
    std::vector<std::optional<Concentration>> first;
    for (const auto& row : result.outputs) {
      for (const auto& out : row) CHECK(out == row.front());
      first.push_back(row.front());
    }
    per_alpha.push_back(first);
  }
  CHECK(per_alpha[0] == per_alpha[1]);
  CHECK(per_alpha[0] == per_alpha[2]);
  CHECK(per_alpha[0].back() ==
        Concentration{{in("z1"), mpq_class(3, 7)}, {in("z2"), mpq_class(4, 7)}});
}

}
