#include <doctest.h>

#include <random>

#include "adn/equations.hpp"
#include "adn/harness.hpp"
#include "support.hpp"

using namespace adn;
using testing::make_inputs;
using testing::make_schedule;
using testing::view_at;

TEST_SUITE("equations") {

TEST_CASE("a single strand gives an empty system at level 0") {
  Schedule s;
  s.n = 1;
  s.rounds.resize(3);
  const auto found = find_equations(view_at(s, make_inputs({"z"}), 1, 1));
  CHECK(found.t == 0);
  CHECK(found.system.k == 1);
  CHECK(found.system.equations.empty());
  CHECK(find_equations(View::initial({"z", false})).t == -1);
}

TEST_CASE("two linked processes expose each other") {
  const auto s = make_schedule(2, {{{1, 2, 1}}, {{1, 2, 1}}, {{1, 2, 1}}});
  const auto in = make_inputs({"A", "B"});
  CHECK(find_equations(view_at(s, in, 1, 1)).t == -1);
  const auto found = find_equations(view_at(s, in, 2, 1));
  CHECK(found.t == 0);
  REQUIRE(found.system.k == 2);
  REQUIRE(found.system.equations.size() == 1);
  CHECK(found.system.equations[0] == Equation{0, 1, 1, 1});
  CHECK(to_string(found.system) == "1*x_1 = 1*x_2\n");
}

TEST_CASE("solving one-parameter systems") {
  const auto one = solve_one_parameter({1, {}});
  REQUIRE(one);
  CHECK(*one == std::vector<mpq_class>{1});

  const LinearSystem chain{3, {{0, 2, 1, 1}, {1, 1, 2, 3}}};
  CHECK(rank(chain) == 2);
  const auto alpha = solve_one_parameter(chain);
  REQUIRE(alpha);
  CHECK((*alpha)[0] == 1);
  CHECK((*alpha)[1] == 2);
  CHECK((*alpha)[2] == mpq_class(2, 3));

  const LinearSystem short_system{3, {{0, 1, 1, 1}}};
  CHECK(rank(short_system) == 1);
  CHECK_FALSE(solve_one_parameter(short_system));
}

TEST_CASE("property: planted solutions are recovered") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 7);
    std::vector<std::uint64_t> planted(k);
    for (auto& a : planted) a = 1 + rng() % 9;
    LinearSystem system{k, {}};
    for (int j = 1; j < k; ++j) {
      const int i = static_cast<int>(rng() % j);
      const std::uint64_t scale = 1 + rng() % 3;
      system.equations.push_back({i, planted[j] * scale, j, planted[i] * scale});
    }
    CAPTURE(trial);
    CHECK(rank(system) == k - 1);
    const auto alpha = solve_one_parameter(system);
    REQUIRE(alpha);
    for (int i = 0; i < k; ++i) {
      mpq_class expected(planted[i], planted[0]);
      expected.canonicalize();
      CHECK((*alpha)[i] == expected);
    }
  }
}

TEST_CASE("property: systems found in random runs are spanning trees") {
  for (int n = 2; n <= 7; ++n) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto s = gen_random_schedule(n, 1, 3 * n, seed);
      const auto in = gen_random_inputs(n, 0, seed + 7);
      Simulator sim(s, in);
      for (int t = 0; t < 3 * n; ++t) {
        sim.step();
        for (const auto& [id, view] : sim.views()) {
          const auto found = find_equations(*view);
          if (found.t < 0) continue;
          CHECK(found.system.k == static_cast<int>(view->level(found.t).size()));
          CHECK(found.system.equations.size() == std::size_t(found.system.k - 1));
          for (const auto& e : found.system.equations) {
            CHECK(e.i < e.j);
            CHECK(e.m1 > 0);
            CHECK(e.m2 > 0);
          }
          CHECK(find_equations(*view).system == found.system);
        }
      }
    }
  }
}

}
