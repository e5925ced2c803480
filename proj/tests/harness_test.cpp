#include <doctest.h>

#include <sstream>

#include "adn/criteria.hpp"
#include "adn/harness.hpp"
#include "adn/io.hpp"

using namespace adn;

namespace {

std::vector<nlohmann::json> parse_lines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(nlohmann::json::parse(line));
  return out;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("random average stabilizes within 2Tn") {
  ExperimentConfig c;
  c.n = 5;
  c.T = 1;
  c.seed = 3;
  c.task = Task::Average;
  std::ostringstream trace;
  const auto r = run_experiment(c, &trace);
  CHECK(r.status == "ok");
  CHECK(r.bound == 10);
  REQUIRE(r.stabilization_round);
  CHECK(*r.stabilization_round <= 10);
  CHECK(r.bound_satisfied);
  for (const auto& check : r.checks) CHECK(check.passed);

  const auto lines = parse_lines(trace.str());
  REQUIRE(lines.size() == std::size_t(5 * (r.horizon + 1) + 1));
  CHECK(lines.front()["round"] == 0);
  CHECK(lines.front()["process"] == 1);
  CHECK(lines.front()["view"].get<std::string>().size() == 16);
  CHECK(lines.back()["type"] == "summary");
}

TEST_CASE("marked cycle average") {
  ExperimentConfig c;
  c.family = Family::MarkedCycle;
  c.t = 2;
  c.task = Task::Average;
  const auto r = run_experiment(c);
  CHECK(r.status == "ok");
  CHECK(r.truth == "1/6");
}

TEST_CASE("terminating counting with one leader") {
  ExperimentConfig c;
  c.n = 4;
  c.leaders = 1;
  c.task = Task::GcCount;
  c.mode = Mode::Terminating;
  std::ostringstream trace;
  const auto r = run_experiment(c, &trace);
  CHECK(r.status == "ok");
  CHECK(r.bound == 12);
  REQUIRE(r.termination_round);
  CHECK(*r.termination_round <= 12);
  std::uint64_t total = 0;
  for (const auto& [label, m] : r.truth.items()) total += m.get<std::uint64_t>();
  CHECK(total == 4);
  bool saw_calls = false;
  for (const auto& line : parse_lines(trace.str())) saw_calls = saw_calls || line.contains("calls");
  CHECK(saw_calls);
}

TEST_CASE("terminating concentration with T = 2") {
  ExperimentConfig c;
  c.n = 5;
  c.T = 2;
  c.seed = 9;
  c.mode = Mode::Terminating;
  c.N = 7;
  const auto r = run_experiment(c);
  CHECK(r.status == "ok");
  CHECK(r.bound == 24);
  REQUIRE(r.termination_round);
  CHECK(*r.termination_round <= 24);
}

TEST_CASE("configuration errors") {
  ExperimentConfig c;
  c.mode = Mode::Terminating;
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  c.N = 2;
  c.n = 4;
  CHECK_THROWS_AS(run_experiment(c), ConfigError);

  ExperimentConfig gc;
  gc.task = Task::GcCount;
  CHECK_THROWS_AS(run_experiment(gc), ConfigError);

  ExperimentConfig ring;
  ring.family = Family::LeaderRing;
  ring.task = Task::GcCount;
  ring.leaders = 2;
  CHECK_THROWS_AS(run_experiment(ring), ConfigError);
  ring.leaders = 3;
  CHECK(run_experiment(ring).status == "ok");

  ExperimentConfig scale;
  scale.family = Family::Scale;
  scale.task = Task::Average;
  CHECK_THROWS_AS(run_experiment(scale), ConfigError);

  CHECK_THROWS_AS(parse_family("grid"), ConfigError);
  CHECK(parse_task("gc-count") == Task::GcCount);
  CHECK(to_string(Mode::Terminating) == "terminating");
}

TEST_CASE("file schedules must be T-interval connected") {
  const std::string dir = std::string(BUILD_DIR);
  Schedule s;
  s.n = 3;
  s.rounds.resize(40);
  for (int t = 0; t < 40; ++t) s.rounds[t].add_edge(1 + t % 2, 2 + t % 2);
  write_json_file(dir + "/alternating.json", schedule_to_json(s));
  write_json_file(dir + "/alternating_inputs.json",
                  inputs_to_json({{"0", false}, {"1", false}, {"1", false}}));
  ExperimentConfig c;
  c.family = Family::File;
  c.schedule_path = dir + "/alternating.json";
  c.inputs_path = dir + "/alternating_inputs.json";
  c.T = 1;
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  c.T = 2;
  const auto r = run_experiment(c);
  CHECK(r.status == "ok");
}

TEST_CASE("a short horizon is reported, not judged") {
  ExperimentConfig c;
  c.n = 6;
  c.seed = 1;
  c.horizon = 1;
  const auto r = run_experiment(c);
  CHECK(r.status == "horizon_exhausted");
  CHECK_FALSE(r.bound_satisfied);
}

TEST_CASE("identical configurations give identical traces") {
  ExperimentConfig c;
  c.n = 5;
  c.T = 2;
  c.seed = 12;
  c.leaders = 2;
  c.task = Task::GcCount;
  c.mode = Mode::Terminating;
  std::ostringstream a;
  std::ostringstream b;
  run_experiment(c, &a);
  run_experiment(c, &b);
  CHECK(a.str() == b.str());
  c.seed = 13;
  std::ostringstream other;
  run_experiment(c, &other);
  CHECK(a.str() != other.str());
}

TEST_CASE("verify suite") {
  CHECK(verify_suite(1, 2, 2, 3, 0, 1).passed);
  const auto small = verify_suite(4, 2, 2, 3, 5, default_jobs());
  CHECK(small.passed);
  CHECK(small.to_json()["passed"] == true);
}

TEST_CASE("counterexample constructions") {
  const auto checks = construction_checks();
  REQUIRE(checks.size() == 4);
  CHECK(checks[0].passed);
  CHECK(checks[1].passed);
  CHECK(checks[3].passed);
}

TEST_CASE("derived seeds") {
  CHECK(derive_seed({1, 2, 3}) == derive_seed({1, 2, 3}));
  CHECK(derive_seed({1, 2, 3}) != derive_seed({1, 2, 4}));
  CHECK(gen_random_inputs(6, 2, 4) == gen_random_inputs(6, 2, 4));
  CHECK_THROWS(gen_random_inputs(2, 3, 0));
}

}
