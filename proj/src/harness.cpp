#include "adn/harness.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "adn/history.hpp"
#include "adn/io.hpp"
#include "adn/leaderless.hpp"
#include "adn/leaders.hpp"
#include "adn/oracles.hpp"
#include "adn/simulate.hpp"

namespace adn {

namespace {

const std::pair<Family, const char*> kFamilies[] = {
    {Family::Random, "random"},          {Family::Scale, "scale"},
    {Family::LeaderRing, "leader-ring"}, {Family::MarkedCycle, "marked-cycle"},
    {Family::File, "file"}};
const std::pair<Task, const char*> kTasks[] = {
    {Task::Concentration, "concentration"}, {Task::Average, "average"}, {Task::GcCount, "gc-count"}};
const std::pair<Mode, const char*> kModes[] = {{Mode::Stabilizing, "stabilizing"},
                                               {Mode::Terminating, "terminating"}};

template <class E, std::size_t K>
E parse_name(const std::pair<E, const char*> (&table)[K], const std::string& name,
             const char* what) {
  for (const auto& [e, s] : table) {
    if (name == s) return e;
  }
  throw ConfigError(std::string("unknown ") + what + " '" + name + "'");
}

template <class E, std::size_t K>
std::string name_of(const std::pair<E, const char*> (&table)[K], E e) {
  for (const auto& [x, s] : table) {
    if (x == e) return s;
  }
  return "?";
}

}  // namespace

Family parse_family(const std::string& name) { return parse_name(kFamilies, name, "family"); }
Task parse_task(const std::string& name) { return parse_name(kTasks, name, "task"); }
Mode parse_mode(const std::string& name) { return parse_name(kModes, name, "mode"); }
std::string to_string(Family family) { return name_of(kFamilies, family); }
std::string to_string(Task task) { return name_of(kTasks, task); }
std::string to_string(Mode mode) { return name_of(kModes, mode); }

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j{{"family", to_string(family)}, {"task", to_string(task)},
                   {"mode", to_string(mode)}, {"horizon", horizon}};
  switch (family) {
    case Family::Random:
      j["n"] = n;
      j["T"] = T;
      j["blocks"] = blocks;
      j["seed"] = seed;
      break;
    case Family::Scale:
      j["sizes"] = sizes;
      j["alpha"] = alpha;
      break;
    case Family::LeaderRing:
      j["k"] = k;
      j["i"] = i;
      break;
    case Family::MarkedCycle:
      j["t"] = t;
      break;
    case Family::File:
      j["T"] = T;
      j["schedule"] = schedule_path;
      j["inputs"] = inputs_path;
      break;
  }
  if (leaders) j["leaders"] = *leaders;
  if (N) j["N"] = *N;
  return j;
}

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::vector<std::uint32_t> words;
  for (auto p : parts) {
    words.push_back(static_cast<std::uint32_t>(p));
    words.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

InputAssignment gen_random_inputs(int n, int leaders, std::uint64_t seed) {
  if (n < 1 || leaders < 0 || leaders > n) {
    throw std::invalid_argument("need 0 <= leaders <= n");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> value(0, 2);
  InputAssignment inputs(n);
  for (auto& in : inputs) in.value = std::to_string(value(rng));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int j = 0; j < leaders; ++j) inputs[order[j]].leader = true;
  return inputs;
}

Network build_network(const ExperimentConfig& c, int rounds) {
  try {
    switch (c.family) {
      case Family::Random: {
        if (c.n < 1 || c.T < 1) throw ConfigError("random family needs n >= 1 and T >= 1");
        const int needed = (rounds + c.T - 1) / c.T;
        if (c.blocks > 0 && c.blocks < needed) {
          throw ConfigError("schedule of " + std::to_string(c.blocks) +
                            " blocks is shorter than the horizon");
        }
        const int blocks = std::max(c.blocks, needed);
        const int leaders = c.leaders.value_or(0);
        if (leaders < 0 || leaders > c.n) throw ConfigError("need 0 <= leaders <= n");
        return {gen_random_schedule(c.n, c.T, blocks, derive_seed({c.seed, 0})),
                gen_random_inputs(c.n, leaders, derive_seed({c.seed, 1}))};
      }
      case Family::Scale:
        return gen_scale_family(c.sizes, c.alpha, rounds);
      case Family::LeaderRing:
        return gen_leader_ring(c.k, c.i, rounds);
      case Family::MarkedCycle:
        return gen_cycle_with_one_marked(c.t, rounds).marked;
      case Family::File: {
        if (c.schedule_path.empty() || c.inputs_path.empty()) {
          throw ConfigError("file family needs a schedule and an inputs file");
        }
        Network net{schedule_from_json(read_json_file(c.schedule_path)),
                    inputs_from_json(read_json_file(c.inputs_path))};
        if (static_cast<int>(net.inputs.size()) != net.schedule.n) {
          throw ConfigError("inputs file does not match the schedule's n");
        }
        return net;
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown family");
}

int default_jobs() {
  if (const char* env = std::getenv("ADN_JOBS")) {
    const int jobs = std::atoi(env);
    if (jobs > 0) return jobs;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& c : checks) {
    checks_json.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  const auto opt = [](const std::optional<int>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {{"status", status},
          {"n", n},
          {"T", T},
          {"leaders", leaders},
          {"horizon", horizon},
          {"stabilization_round", opt(stabilization_round)},
          {"termination_round", opt(termination_round)},
          {"bound", {{"name", bound_name}, {"value", bound}}},
          {"bound_satisfied", bound_satisfied},
          {"truth", truth},
          {"checks", checks_json}};
}

namespace {

nlohmann::json to_json(const std::optional<Concentration>& c) {
  if (!c) return nullptr;
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [label, q] : *c) j[to_string(label)] = q.get_str();
  return j;
}

nlohmann::json to_json(const std::optional<Inventory>& inv) {
  if (!inv) return nullptr;
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [label, m] : *inv) j[to_string(label)] = m;
  return j;
}

nlohmann::json mean_json(const std::optional<Concentration>& c) {
  if (!c) return nullptr;
  mpq_class sum = 0;
  for (const auto& [label, q] : *c) sum += numeric_value(label.value) * q;
  sum.canonicalize();
  return sum.get_str();
}

std::string hex(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

struct Eval {
  nlohmann::json output;
  bool terminated = false;
};

// Compares simulated views with the ground truth and the refinement oracle,
// keeping the first discrepancy of each kind.
class OracleAudit {
 public:
  OracleAudit(const Schedule& schedule, const InputAssignment& inputs, int horizon)
      : tree_(build_ground_truth(schedule, inputs, horizon)),
        classes_(oracle::refinement_classes(schedule, inputs, horizon)) {}

  void observe(const Simulator& sim) {
    const int t = sim.round();
    std::map<int, View> extracted;
    std::vector<int> reps(sim.n());
    std::vector<int> ids(sim.n());
    for (ProcessId p = 1; p <= sim.n(); ++p) {
      const int rep = tree_.representative(t, p);
      reps[p - 1] = rep;
      ids[p - 1] = static_cast<int>(sim.view_id(p));
      auto it = extracted.find(rep);
      if (it == extracted.end()) it = extracted.emplace(rep, extract_view(tree_, {t, rep})).first;
      if (views_.passed && !(sim.view(p) == it->second)) {
        views_ = {"views_match_ground_truth", false,
                  "round " + std::to_string(t) + ", process " + std::to_string(p)};
      }
    }
    if (refinement_.passed &&
        (!oracle::same_partition(reps, classes_[t]) || !oracle::same_partition(reps, ids) ||
         static_cast<std::size_t>(tree_.level(t).size()) != sim.views().size())) {
      refinement_ = {"refinement_oracle", false, "round " + std::to_string(t)};
    }
  }

  std::vector<Check> checks() const { return {views_, refinement_}; }

 private:
  HistoryTree tree_;
  std::vector<std::vector<int>> classes_;
  Check views_{"views_match_ground_truth", true, ""};
  Check refinement_{"refinement_oracle", true, ""};
};

}  // namespace

RunReport run_experiment(const ExperimentConfig& config, std::ostream* trace) {
  const Network probe = build_network(config, 1);
  const int n = probe.schedule.n;
  const bool static_family = config.family == Family::Scale ||
                             config.family == Family::LeaderRing ||
                             config.family == Family::MarkedCycle;
  const int T = static_family ? 1 : config.T;
  if (T < 1) throw ConfigError("T must be positive");
  const int leaders = count_leaders(probe.inputs);
  if (config.leaders && config.family != Family::Random && *config.leaders != leaders) {
    throw ConfigError("declared " + std::to_string(*config.leaders) + " leaders, inputs have " +
                      std::to_string(leaders));
  }
  const bool terminating = config.mode == Mode::Terminating;
  const bool gc = config.task == Task::GcCount;
  if (gc && leaders < 1) throw ConfigError("gc-count needs at least one leader");
  if (terminating && !gc && (!config.N || *config.N < n)) {
    throw ConfigError("terminating " + to_string(config.task) + " needs N >= n");
  }
  if (config.task == Task::Average) {
    try {
      for (const auto& in : probe.inputs) numeric_value(in.value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("average needs numeric inputs: ") + e.what());
    }
  }

  RunReport report;
  report.n = n;
  report.T = T;
  report.leaders = leaders;
  if (!terminating) {
    report.bound_name = "2Tn";
    report.bound = 2LL * T * n;
  } else if (!gc) {
    report.bound_name = "T(n+N)";
    report.bound = static_cast<long long>(T) * (n + *config.N);
  } else {
    report.bound_name = "(l^2+l+1)Tn";
    report.bound = static_cast<long long>(leaders * leaders + leaders + 1) * T * n;
  }
  int horizon = config.horizon > 0 ? config.horizon : static_cast<int>(report.bound) + T * n;
  const bool reduced = terminating && gc;
  if (reduced) horizon = (horizon + T - 1) / T * T;
  report.horizon = horizon;

  const Network net = build_network(config, horizon);
  if (net.schedule.length() < horizon) {
    throw ConfigError("schedule has " + std::to_string(net.schedule.length()) +
                      " rounds, horizon is " + std::to_string(horizon));
  }
  try {
    if (!validate_disconnectivity(net.schedule, T)) {
      throw ConfigError("schedule is not " + std::to_string(T) + "-interval connected");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  switch (config.task) {
    case Task::Concentration:
      report.truth = to_json(std::optional(oracle::input_concentration(net.inputs)));
      break;
    case Task::Average:
      report.truth = mean_json(oracle::input_concentration(net.inputs));
      break;
    case Task::GcCount:
      report.truth = to_json(std::optional(oracle::input_multiset(net.inputs)));
      break;
  }

  std::ostringstream lines;
  const auto emit = [&](const nlohmann::json& j) { lines << j.dump() << '\n'; };

  // Rounds of the simulated execution: original rounds, or block rounds of
  // the block-reduced execution for terminating GC.
  const Schedule sim_schedule = reduced ? block_reduce(net.schedule, T) : net.schedule;
  const int steps = reduced ? horizon / T : horizon;
  const int scale = reduced ? T : 1;

  OracleAudit audit(sim_schedule, net.inputs, steps);
  Simulator sim(sim_schedule, net.inputs);
  std::vector<TerminatingGc> gc_states;
  if (reduced) gc_states.assign(n, TerminatingGc(leaders, T));

  std::vector<std::vector<nlohmann::json>> outputs;
  std::vector<int> terminated_at(n, -1);
  for (int b = 0; b <= steps; ++b) {
    audit.observe(sim);
    std::map<std::uint64_t, Eval> evals;
    std::map<std::uint64_t, std::string> prints;
    std::vector<nlohmann::json> row(n);
    for (ProcessId p = 1; p <= n; ++p) {
      const auto id = sim.view_id(p);
      const View& view = sim.view(p);
      auto fp = prints.find(id);
      if (fp == prints.end()) fp = prints.emplace(id, hex(view.fingerprint())).first;
      nlohmann::json record{{"round", b * scale}, {"process", p}, {"view", fp->second}};
      if (reduced) record["block"] = b;

      if (terminated_at[p - 1] >= 0) {
        row[p - 1] = outputs.back()[p - 1];
      } else if (reduced) {
        CountingTranscript transcript;
        const auto status = gc_states[p - 1].step(view, &transcript);
        row[p - 1] = to_json(status.output);
        if (status.terminated) terminated_at[p - 1] = b * scale;
        if (!transcript.calls.empty()) {
          auto& calls = record["calls"] = nlohmann::json::array();
          for (const auto& c : transcript.calls) {
            calls.push_back({c.s, c.x, c.result.estimate, c.result.level});
          }
        }
      } else {
        auto it = evals.find(id);
        if (it == evals.end()) {
          Eval e;
          switch (config.task) {
            case Task::Concentration:
              if (terminating) {
                const auto r = terminating_concentration(view, T, *config.N, b);
                e = {to_json(r.output), r.terminated};
              } else {
                e.output = to_json(stabilizing_concentration(view));
              }
              break;
            case Task::Average:
              if (terminating) {
                const auto r = terminating_concentration(view, T, *config.N, b);
                e = {mean_json(r.output), r.terminated};
              } else {
                e.output = mean_json(stabilizing_concentration(view));
              }
              break;
            case Task::GcCount:
              e.output = to_json(stabilizing_gc(view, leaders));
              break;
          }
          it = evals.emplace(id, std::move(e)).first;
        }
        row[p - 1] = it->second.output;
        if (it->second.terminated) terminated_at[p - 1] = b;
      }
      record["output"] = row[p - 1];
      if (terminating) record["terminated"] = terminated_at[p - 1] >= 0;
      emit(record);
    }
    outputs.push_back(std::move(row));
    if (b < steps) sim.step();
  }

  report.checks = audit.checks();

  int stable_from = steps + 1;
  while (stable_from > 0 &&
         std::all_of(outputs[stable_from - 1].begin(), outputs[stable_from - 1].end(),
                     [&](const nlohmann::json& o) { return o == report.truth; })) {
    --stable_from;
  }
  if (stable_from <= steps) report.stabilization_round = stable_from * scale;

  bool observed = true;
  if (terminating) {
    Check exact{"terminated_output_exact", true, ""};
    for (ProcessId p = 1; p <= n; ++p) {
      if (terminated_at[p - 1] < 0) continue;
      if (outputs.back()[p - 1] != report.truth && exact.passed) {
        exact = {exact.name, false, "process " + std::to_string(p)};
      }
    }
    report.checks.push_back(exact);
    const bool all = std::all_of(terminated_at.begin(), terminated_at.end(),
                                 [](int r) { return r >= 0; });
    if (all) report.termination_round = *std::max_element(terminated_at.begin(), terminated_at.end());
    report.bound_satisfied = all && exact.passed && *report.termination_round <= report.bound;
    observed = all || horizon >= report.bound;
  } else {
    report.bound_satisfied =
        report.stabilization_round && *report.stabilization_round <= report.bound;
    observed = report.bound_satisfied || horizon >= report.bound;
  }
  report.checks.push_back({"bound", report.bound_satisfied || !observed,
                           report.bound_satisfied ? "" : "not within " + report.bound_name});

  const bool clean = std::all_of(report.checks.begin(), report.checks.end(),
                                 [](const Check& c) { return c.passed; });
  report.status = !clean ? "violation" : report.bound_satisfied ? "ok" : "horizon_exhausted";

  nlohmann::json summary = report.to_json();
  summary["type"] = "summary";
  summary["config"] = config.to_json();
  emit(summary);

  const std::string text = lines.str();
  if (trace) *trace << text;
  if (!config.trace_path.empty()) {
    std::ofstream out(config.trace_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + config.trace_path);
    out << text;
  }
  if (!config.report_path.empty()) write_json_file(config.report_path, report.to_json());
  return report;
}

}  // namespace adn
