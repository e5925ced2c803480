#include <doctest.h>

#include <numeric>

#include "adn/harness.hpp"
#include "adn/io.hpp"
#include "adn/network.hpp"
#include "adn/oracles.hpp"
#include "support.hpp"

using namespace adn;
using testing::make_schedule;

TEST_SUITE("network") {

TEST_CASE("round graphs reject self-loops and zero multiplicity") {
  RoundGraph g;
  CHECK_THROWS_AS(g.add_edge(2, 2), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(1, 2, 0), std::invalid_argument);
  g.add_edge(2, 1, 3);
  g.add_edge(1, 2);
  CHECK(g.multiplicity(1, 2) == 4);
  CHECK(g.multiplicity(2, 1) == 4);
  CHECK(g.total_multiplicity() == 4);
}

TEST_CASE("schedule validation checks endpoints") {
  auto s = make_schedule(2, {{{1, 3, 1}}});
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.n = 3;
  CHECK_NOTHROW(s.validate());
  CHECK(s.round(10).empty());
}

TEST_CASE("validate_disconnectivity") {
  Schedule single;
  single.n = 1;
  single.rounds.resize(4);
  for (int T = 1; T <= 4; ++T) CHECK(validate_disconnectivity(single, T));

  const auto s = make_schedule(3, {{{1, 2, 1}}, {{2, 3, 1}}, {{1, 3, 1}}});
  CHECK_FALSE(validate_disconnectivity(s, 1));
  CHECK(validate_disconnectivity(s, 2));
  CHECK(validate_disconnectivity(s, 3));
  CHECK_THROWS_AS(validate_disconnectivity(s, 0), std::invalid_argument);
  CHECK_THROWS_AS(validate_disconnectivity(s, 4), std::invalid_argument);
}

TEST_CASE("block_reduce") {
  const auto pair = make_schedule(2, {{{1, 2, 1}}, {{1, 2, 1}}});
  const auto once = block_reduce(pair, 2);
  REQUIRE(once.length() == 1);
  CHECK(once.round(1).multiplicity(1, 2) == 2);
  CHECK(block_reduce(pair, 1) == pair);

  const auto odd = make_schedule(3, {{{1, 2, 1}}, {{2, 3, 1}}, {{1, 3, 2}}});
  const auto padded = block_reduce(odd, 2);
  REQUIRE(padded.length() == 2);
  CHECK(padded.round(2).multiplicity(1, 3) == 2);
}

TEST_CASE("random schedules") {
  const auto empty = gen_random_schedule(1, 3, 2, 7);
  CHECK(empty.length() == 6);
  for (const auto& r : empty.rounds) CHECK(r.empty());
  CHECK(validate_disconnectivity(empty, 3));

  const auto s = gen_random_schedule(5, 1, 10, 1);
  for (int t = 1; t <= s.length(); ++t) CHECK(oracle::window_connected(s, t, t));
  CHECK(s == gen_random_schedule(5, 1, 10, 1));
  CHECK_FALSE(s == gen_random_schedule(5, 1, 10, 2));
}

TEST_CASE("property: generated schedules and their reductions") {
  for (int n = 1; n <= 7; ++n) {
    for (int T = 1; T <= 4; ++T) {
      for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto s = gen_random_schedule(n, T, 5, seed * 31 + n);
        CAPTURE(n);
        CAPTURE(T);
        CAPTURE(seed);
        REQUIRE(validate_disconnectivity(s, T));
        for (int T2 = T; T2 <= s.length(); ++T2) CHECK(validate_disconnectivity(s, T2));
        const auto r = block_reduce(s, T);
        CHECK(validate_disconnectivity(r, 1));
        std::uint64_t before = 0;
        std::uint64_t after = 0;
        for (const auto& g : s.rounds) before += g.total_multiplicity();
        for (const auto& g : r.rounds) after += g.total_multiplicity();
        CHECK(before == after);
        for (int t = T; t <= s.length(); ++t) {
          CHECK(oracle::window_connected(s, t - T + 1, t));
        }
      }
    }
  }
}

TEST_CASE("scale family") {
  const std::vector<int> sizes{3, 4};
  const auto one = gen_scale_family(sizes, 1, 2);
  CHECK(one.schedule.n == 7);
  CHECK(validate_disconnectivity(one.schedule, 1));
  // K_{3,4} plus a 3-cycle and a 4-cycle.
  CHECK(one.schedule.round(1).total_multiplicity() == 12 + 3 + 4);

  const auto two = gen_scale_family(sizes, 2, 2);
  CHECK(two.schedule.n == 14);
  const auto adj = two.schedule.round(1).incidence(14);
  for (ProcessId p = 1; p <= 14; ++p) {
    const std::uint64_t degree = std::accumulate(
        adj[p].begin(), adj[p].end(), std::uint64_t{0},
        [](std::uint64_t acc, const Link& l) { return acc + l.multiplicity; });
    CHECK(degree == (two.inputs[p - 1].value == "z1" ? 2 + 4 : 2 + 3));
  }
  for (int alpha = 1; alpha <= 3; ++alpha) {
    const std::vector<int> other{3, 5, 7};
    CHECK(gen_scale_family(other, alpha, 1).schedule.n == alpha * 15);
  }
}

TEST_CASE("leader ring") {
  const auto ring = gen_leader_ring(3, 3, 1);
  REQUIRE(ring.schedule.n == 9);
  for (ProcessId p = 1; p <= 9; ++p) CHECK(ring.inputs[p - 1].leader == (p % 3 == 1));
  const auto all = gen_leader_ring(1, 3, 1);
  CHECK(count_leaders(all.inputs) == 3);
}

TEST_CASE("marked cycle") {
  const auto one = gen_cycle_with_one_marked(1, 1);
  CHECK(one.marked.schedule.n == 4);
  const auto two = gen_cycle_with_one_marked(2, 1);
  CHECK(two.marked.schedule.n == 6);
  CHECK(two.companion.schedule.n == 3);
  CHECK(oracle::input_concentration(two.marked.inputs).at({"1", false}) == mpq_class(1, 6));
}

TEST_CASE("json round trips") {
  const auto s = gen_random_schedule(4, 2, 3, 5);
  CHECK(schedule_from_json(schedule_to_json(s)) == s);
  const auto in = gen_random_inputs(4, 2, 9);
  CHECK(inputs_from_json(inputs_to_json(in)) == in);
  CHECK(count_leaders(in) == 2);

  const auto j = nlohmann::json::parse(R"({"n": 3, "rounds": [[[1, 2]], [[2, 3, 4]]]})");
  const auto parsed = schedule_from_json(j);
  CHECK(parsed.round(1).multiplicity(1, 2) == 1);
  CHECK(parsed.round(2).multiplicity(2, 3) == 4);
  CHECK_THROWS(schedule_from_json(nlohmann::json::parse(R"({"n": 2, "rounds": [[[1, 5]]]})")));
  const auto inputs = inputs_from_json(nlohmann::json::parse(R"({"inputs": [{"value": "a"}]})"));
  CHECK_FALSE(inputs[0].leader);
}

}
