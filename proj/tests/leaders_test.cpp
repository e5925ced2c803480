#include <doctest.h>

#include <algorithm>

#include "adn/criteria.hpp"
#include "adn/harness.hpp"
#include "adn/leaders.hpp"
#include "adn/oracles.hpp"
#include "support.hpp"

using namespace adn;
using testing::make_inputs;
using testing::make_schedule;
using testing::view_at;

namespace {

Schedule lone(int rounds) {
  Schedule s;
  s.n = 1;
  s.rounds.resize(rounds);
  return s;
}

}  // namespace

TEST_SUITE("leaders") {

TEST_CASE("guess arithmetic") {
  const std::vector<std::int64_t> counts{2, 1};
  const std::vector<std::uint64_t> reds{1, 2};
  CHECK(guess_from(counts, reds, 2) == 2);
  CHECK(guess_from(counts, reds, 3) == 2);
  CHECK(guess_from(counts, reds, 4) == 1);
  CHECK(guess_from(counts, reds, 1) == 4);
}

TEST_CASE("no leader in the starting level") {
  const View v = view_at(lone(2), make_inputs({"z"}), 2, 1);
  CHECK(approx_count(v, 0, 1, 1) == ApproxResult{kNoLeaderNode, 0});
  CHECK_FALSE(counting_with_leaders(v, 1));
  CHECK_FALSE(stabilizing_gc(v, 1));
}

TEST_CASE("one leader and one follower") {
  const auto s = make_schedule(2, std::vector<testing::EdgeList>(6, {{1, 2, 1}}));
  const auto inputs = make_inputs({"a", "b"}, {1});
  const View v = view_at(s, inputs, 3, 1);
  ApproxTrace trace;
  const auto result = approx_count(v, 0, 1, 1, &trace);
  CHECK(result.estimate == 2);
  REQUIRE(trace.tau);
  CHECK(v.label(*trace.tau).leader);
  CHECK_FALSE(trace.guesses.empty());
  CHECK(trace.max_guessed_per_level <= 1);
  for (const auto& g : trace.guesses) CHECK(g.guess == 1);
}

TEST_CASE("a lone leader") {
  const auto inputs = make_inputs({"z"}, {1});
  const auto s = lone(4);
  CHECK(counting_with_leaders(view_at(s, inputs, 3, 1), 1) == 1);
  CHECK(stabilizing_gc(view_at(s, inputs, 2, 1), 1) == Inventory{{{"z", true}, 1}});

  TerminatingGc gc(1, 1);
  int terminated_at = -1;
  Simulator sim(s, inputs);
  for (int t = 0; t <= 3; ++t) {
    const auto st = gc.step(sim.view(1));
    if (st.terminated && terminated_at < 0) {
      terminated_at = t;
      CHECK(st.output == Inventory{{{"z", true}, 1}});
    }
    if (t < 3) sim.step();
  }
  CHECK(terminated_at >= 0);
  CHECK(terminated_at <= 3);
  CHECK(gc.count() == 1);
  CHECK(gc.original_round(3) == 3);
}

TEST_CASE("a 3-cycle with one leader") {
  const auto inputs = make_inputs({"z", "z", "z"}, {2});
  const auto s = static_cycle(3, 8);
  for (int t = 6; t <= 8; ++t) {
    CHECK(stabilizing_gc(view_at(s, inputs, t, 1), 1) ==
          Inventory{{{"z", true}, 1}, {{"z", false}, 2}});
  }
}

TEST_CASE("multi-aggregate evaluation") {
  const Inventory inv{{{"0", false}, 2}, {{"1", true}, 1}};
  const Signature<std::uint64_t> total = [](const ProcessInput&, const Inventory& m) {
    std::uint64_t sum = 0;
    for (const auto& [label, k] : m) sum += k;
    return sum;
  };
  CHECK(multi_aggregate_eval(inv, {"0", false}, total) == 3);
  const Signature<mpq_class> sum = [](const ProcessInput&, const Inventory& m) {
    mpq_class s = 0;
    for (const auto& [label, k] : m) s += numeric_value(label.value) * k;
    return s;
  };
  CHECK(multi_aggregate_eval(inv, {"0", false}, sum) == 1);

  const auto inputs = gen_random_inputs(7, 2, 3);
  const Signature<mpq_class> median = [](const ProcessInput&, const Inventory& m) {
    std::vector<mpq_class> values;
    for (const auto& [label, k] : m) values.insert(values.end(), k, numeric_value(label.value));
    std::sort(values.begin(), values.end());
    return values[values.size() / 2];
  };
  std::vector<mpq_class> direct;
  for (const auto& x : inputs) direct.push_back(numeric_value(x.value));
  std::sort(direct.begin(), direct.end());
  CHECK(multi_aggregate_eval(oracle::input_multiset(inputs), inputs[0], median) == direct[3]);
}

TEST_CASE("counting succeeds by (l^2+l+1)n on block-reduced runs") {
  for (int leaders = 1; leaders <= 3; ++leaders) {
    for (int n = leaders; n <= 5; ++n) {
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        CAPTURE(leaders);
        CAPTURE(n);
        CAPTURE(seed);
        const int rounds = (leaders * leaders + leaders + 1) * n;
        const auto s = block_reduce(gen_random_schedule(n, 2, rounds, seed), 2);
        const auto inputs = gen_random_inputs(n, leaders, seed);
        CHECK(counting_with_leaders(view_at(s, inputs, rounds, 1), leaders) == n);
      }
    }
  }
}

TEST_CASE("property: invariants over a small leader sweep") {
  SweepSpec spec{{1, 2, 3, 4}, {1, 2}, {1, 2, 3}, 3, 17, default_jobs()};
  const auto result = leader_sweep(spec, {});
  for (const auto& [name, c] : result.tally.counts()) {
    CAPTURE(name);
    CAPTURE(c.first_failure);
    if (name.rfind("obs.", 0) != 0) CHECK(c.failed == 0);
  }
  CHECK(result.tally.clean());
  CHECK(result.tally.passed("c3.terminates"));
  CHECK(result.tally.passed("c6.guess_sound"));
}

TEST_CASE("a found count can be lost in a later round") {
  // n=4, T=2, two leaders, trial 12 of seed 0: block 9 returns 4, block 10 does not,
  // because the starting leader node of the first phase changes as the view grows.
  SweepSpec spec{{4}, {2}, {2}, 13, 0, 1};
  const auto result = leader_sweep(spec, {});
  CHECK(result.tally.clean());
  const auto& counts = result.tally.counts();
  REQUIRE(counts.count("obs.monotone"));
  CHECK(counts.at("obs.monotone").failed > 0);
  CHECK(counts.at("obs.monotone").first_failure.find("trial=12") != std::string::npos);
  CHECK(result.tally.passed("c3.count_by_bound"));
}

TEST_CASE("mutation: dropping the final horizon check is caught") {
  CountingOptions tampered;
  tampered.skip_final_check = true;
  const auto result = verify_suite(4, 1, 2, 5, 0, default_jobs(), tampered);
  CHECK_FALSE(result.passed);
  const auto& counts = result.tally.counts();
  REQUIRE(counts.count("c3.count_sound"));
  CHECK(counts.at("c3.count_sound").failed > 0);
}

}
