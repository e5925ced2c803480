#include "adn/criteria.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "adn/equations.hpp"
#include "adn/history.hpp"
#include "adn/leaderless.hpp"
#include "adn/oracles.hpp"
#include "adn/simulate.hpp"

namespace adn {

void Tally::merge(const Tally& other) {
  for (const auto& [name, c] : other.counts_) {
    auto& mine = counts_[name];
    if (mine.failed == 0 && c.failed > 0) mine.first_failure = c.first_failure;
    mine.checked += c.checked;
    mine.failed += c.failed;
  }
}

bool Tally::passed(const std::string& prefix) const {
  bool any = false;
  for (const auto& [name, c] : counts_) {
    if (name.rfind(prefix, 0) != 0) continue;
    if (c.failed > 0) return false;
    any = any || c.checked > 0;
  }
  return any;
}

bool Tally::clean() const {
  return std::all_of(counts_.begin(), counts_.end(), [](const auto& kv) {
    return kv.first.rfind("obs.", 0) == 0 || kv.second.failed == 0;
  });
}

std::string Tally::summary(const std::string& prefix) const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, c] : counts_) {
    if (name.rfind(prefix, 0) != 0) continue;
    if (!first) out << "; ";
    first = false;
    out << name << ' ' << c.failed << '/' << c.checked << " failed";
    if (c.failed > 0) out << " (first: " << c.first_failure << ')';
  }
  if (first) out << "no " << prefix << " checks ran";
  return out.str();
}

nlohmann::json Tally::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, c] : counts_) {
    j[name] = {{"checked", c.checked}, {"failed", c.failed}};
    if (c.failed > 0) j[name]["first_failure"] = c.first_failure;
  }
  return j;
}

nlohmann::json SuiteResult::to_json() const {
  return {{"passed", passed}, {"checks", tally.to_json()}};
}

namespace {

struct Case {
  int n;
  int T;
  int leaders;
  int trial;

  std::string describe() const {
    std::string s = "n=" + std::to_string(n) + " T=" + std::to_string(T);
    if (leaders > 0) s += " l=" + std::to_string(leaders);
    return s + " trial=" + std::to_string(trial);
  }
};

// Runs every case on `jobs` threads; results come back in case order.
SweepResult run_cases(const std::vector<Case>& cases, int jobs,
                      const std::function<Tally(const Case&)>& body) {
  std::vector<Tally> tallies(cases.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next++;
      if (i >= cases.size()) return;
      try {
        tallies[i] = body(cases[i]);
      } catch (const std::exception& e) {
        tallies[i].record("exception", false,
                          [&] { return cases[i].describe() + ": " + e.what(); });
      }
    }
  };
  std::vector<std::thread> threads;
  const int count = std::clamp<int>(jobs, 1, std::max<int>(1, static_cast<int>(cases.size())));
  for (int j = 1; j < count; ++j) threads.emplace_back(worker);
  worker();
  for (auto& th : threads) th.join();

  SweepResult result;
  result.cases = static_cast<int>(cases.size());
  std::ostringstream trace;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    nlohmann::json line{{"n", c.n}, {"T", c.T}, {"trial", c.trial}, {"checks", tallies[i].to_json()}};
    if (c.leaders > 0) line["leaders"] = c.leaders;
    trace << line.dump() << '\n';
    result.tally.merge(tallies[i]);
  }
  result.trace = trace.str();
  return result;
}

// Ground-truth comparisons for one round of a simulation.
void audit_round(Tally& tally, const Simulator& sim, const HistoryTree& tree,
                 const std::vector<std::vector<int>>& classes, const std::string& ctx) {
  const int t = sim.round();
  std::map<int, View> extracted;
  std::vector<int> reps(sim.n());
  for (ProcessId p = 1; p <= sim.n(); ++p) {
    const int rep = tree.representative(t, p);
    reps[p - 1] = rep;
    auto it = extracted.find(rep);
    if (it == extracted.end()) it = extracted.emplace(rep, extract_view(tree, {t, rep})).first;
    tally.record("c4.views", sim.view(p) == it->second, [&] {
      return ctx + " round " + std::to_string(t) + " process " + std::to_string(p);
    });
  }
  std::set<std::string> forms;
  for (const auto& [id, view] : sim.views()) forms.insert(view->canonical_form());
  const bool ok = forms.size() == tree.level(t).size() && oracle::same_partition(reps, classes[t]);
  tally.record("c4.refinement", ok, [&] { return ctx + " round " + std::to_string(t); });
}

Tally leaderless_case(const Case& c, std::uint64_t seed, const LeaderlessChecks& chk) {
  Tally tally;
  const int n = c.n;
  const int T = c.T;
  const std::string ctx = c.describe();
  const std::uint64_t cs = derive_seed({seed, 0, static_cast<std::uint64_t>(n),
                                        static_cast<std::uint64_t>(T),
                                        static_cast<std::uint64_t>(c.trial)});
  const int horizon = chk.termination || chk.equations ? T * std::max(3 * n + 1, 2 * n + 3)
                                                       : 3 * T * n;
  const Schedule schedule = gen_random_schedule(n, T, horizon / T + 1, derive_seed({cs, 0}));
  const InputAssignment inputs = gen_random_inputs(n, 0, derive_seed({cs, 1}));
  const Concentration truth = oracle::input_concentration(inputs);

  std::optional<HistoryTree> tree;
  std::vector<std::vector<int>> classes;
  if (chk.oracle || chk.equations) tree = build_ground_truth(schedule, inputs, horizon);
  if (chk.oracle) classes = oracle::refinement_classes(schedule, inputs, horizon);

  const std::vector<int> Ns{n, n + 3};
  std::vector<std::vector<int>> terminated_at(Ns.size(), std::vector<int>(n, -1));

  Simulator sim(schedule, inputs);
  for (int t = 0;; ++t) {
    const bool late = t >= 2 * T * n;
    if (chk.oracle) audit_round(tally, sim, *tree, classes, ctx);

    std::map<std::uint64_t, std::optional<Concentration>> outputs;
    if (late && chk.stabilization) {
      for (const auto& [id, view] : sim.views()) outputs[id] = stabilizing_concentration(*view);
    }
    std::vector<std::map<std::uint64_t, TerminatingOutput>> decisions(Ns.size());

    for (ProcessId p = 1; p <= n; ++p) {
      const auto id = sim.view_id(p);
      if (late && chk.stabilization) {
        tally.record("c1.exact", outputs[id] == truth, [&] {
          return ctx + " round " + std::to_string(t) + " process " + std::to_string(p);
        });
      }
      if (!chk.termination) continue;
      for (std::size_t k = 0; k < Ns.size(); ++k) {
        if (terminated_at[k][p - 1] >= 0) continue;
        auto it = decisions[k].find(id);
        if (it == decisions[k].end()) {
          it = decisions[k].emplace(id, terminating_concentration(sim.view(p), T, Ns[k], t)).first;
        }
        if (!it->second.terminated) continue;
        terminated_at[k][p - 1] = t;
        const auto what = [&] {
          return ctx + " N=" + std::to_string(Ns[k]) + " process " + std::to_string(p) +
                 " round " + std::to_string(t);
        };
        tally.record("c2.bound", t <= T * (n + Ns[k]), what);
        tally.record("c2.exact", it->second.output == truth, what);
      }
    }

    if (late && chk.equations) {
      for (const auto& [id, view] : sim.views()) {
        const auto what = [&] { return ctx + " round " + std::to_string(t); };
        const auto found = find_equations(*view);
        tally.record("c5.level", found.t >= 0 && found.t <= T * n, what);
        if (found.t < 0) continue;
        tally.record("c5.rank", rank(found.system) == found.system.k - 1, what);
        const auto located = locate_view(*tree, *view);
        const auto& images = located[found.t + 1];
        bool satisfied = true;
        for (const auto& e : found.system.equations) {
          const auto ai = tree->anonymity({found.t, images[e.i]});
          const auto aj = tree->anonymity({found.t, images[e.j]});
          satisfied = satisfied && e.m1 * ai == e.m2 * aj;
        }
        tally.record("c5.satisfied", satisfied, what);
      }
    }

    if (t == horizon) break;
    sim.step();
  }

  if (chk.termination) {
    for (std::size_t k = 0; k < Ns.size(); ++k) {
      for (ProcessId p = 1; p <= n; ++p) {
        if (terminated_at[k][p - 1] >= 0) continue;
        tally.record("c2.bound", false, [&] {
          return ctx + " N=" + std::to_string(Ns[k]) + " process " + std::to_string(p) +
                 " never terminated";
        });
      }
    }
  }
  return tally;
}

// Clause and guess checks for the approx_count calls of one counting run on `view`.
void audit_calls(Tally& tally, const View& view, const HistoryTree& tree,
                 const std::vector<std::vector<int>>& located, int n, int leaders,
                 const CountingTranscript& transcript, const std::string& ctx) {
  const int tv = view.last_level();
  const auto image = [&](NodeRef r) { return NodeRef{r.level, located[r.level + 1][r.rank]}; };
  const auto a = [&](NodeRef r) { return static_cast<std::int64_t>(tree.anonymity(image(r))); };

  for (const auto& call : transcript.calls) {
    const auto& tr = call.trace;
    if (!tr.tau) continue;
    const int s = call.s;
    const std::int64_t x = call.x;
    const std::int64_t est = call.result.estimate;
    const int t = call.result.level;
    const std::int64_t a_tau = a(*tr.tau);
    const auto what = [&] {
      return ctx + " view level " + std::to_string(tv) + " s=" + std::to_string(s) +
             " x=" + std::to_string(x) + " result=" + std::to_string(est) + "@" +
             std::to_string(t);
    };

    if (tv >= s + (leaders + 2) * n - 1) {
      tally.record("c6.clause_i", s <= t && t <= s + (leaders + 1) * n - 1, what);
    }
    if (x == a_tau && tv >= t + n) tally.record("c6.clause_ii", est != kLeaderMismatch, what);
    if (x >= a_tau && est > 0 && tv >= t + est) tally.record("c6.clause_iii", est == n, what);

    int deepest = s;
    for (const auto& g : tr.guesses) {
      deepest = std::max(deepest, g.node.level);
      const NodeRef u = image(g.guesser);
      bool premise = tree.node(u).children.size() == g.guesser_children.size();
      for (const auto& [child, value] : g.guesser_children) {
        premise = premise && value * a_tau == x * a(child);
      }
      if (!premise) continue;
      tally.record("c6.guess_sound", g.guess * a_tau >= x * a(g.node), what);
      const NodeRef v = image(g.node);
      if (tree.node({v.level - 1, tree.node(v).parent}).children.size() == 1) {
        // The guess is then the ceiling of x * a(v) / a(tau).
        const std::int64_t scaled = x * a(g.node);
        tally.record("c6.guess_exact",
                     g.guess * a_tau >= scaled && (g.guess - 1) * a_tau < scaled, what);
      }
    }
    for (const auto& cr : tr.counted) deepest = std::max(deepest, cr.node.level);
    if (x == a_tau && tv >= deepest + n) {
      bool sound = true;
      for (const auto& cr : tr.counted) sound = sound && cr.value == a(cr.node);
      tally.record("c6.counted_sound", sound, what);
      tally.record("c6.locked_levels", tr.max_locked_levels <= n, what);
    }
    tally.record("c6.well_spread", tr.max_guessed_per_level <= 1, what);
    tally.record("c6.no_heavy_left", tr.heavy_after_iteration == 0, what);
  }
}

Tally leader_case(const Case& c, std::uint64_t seed, const LeaderChecks& chk) {
  Tally tally;
  const int n = c.n;
  const int T = c.T;
  const int leaders = c.leaders;
  const std::string ctx = c.describe();
  const std::uint64_t cs = derive_seed(
      {seed, 1, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(T),
       static_cast<std::uint64_t>(leaders), static_cast<std::uint64_t>(c.trial)});
  const int blocks = (leaders * leaders + leaders + 1) * n;
  const int horizon = 3 * T * n;
  const Schedule schedule =
      gen_random_schedule(n, T, std::max(blocks, horizon / T) + 1, derive_seed({cs, 0}));
  const InputAssignment inputs = gen_random_inputs(n, leaders, derive_seed({cs, 1}));
  const Inventory truth = oracle::input_multiset(inputs);

  if (chk.stabilization || chk.oracle) {
    std::optional<HistoryTree> tree;
    std::vector<std::vector<int>> classes;
    if (chk.oracle) {
      tree = build_ground_truth(schedule, inputs, horizon);
      classes = oracle::refinement_classes(schedule, inputs, horizon);
    }
    Simulator sim(schedule, inputs);
    for (int t = 0;; ++t) {
      if (chk.oracle) audit_round(tally, sim, *tree, classes, ctx);
      if (chk.stabilization && t >= 2 * T * n) {
        std::map<std::uint64_t, std::optional<Inventory>> out;
        for (const auto& [id, view] : sim.views()) out[id] = stabilizing_gc(*view, leaders);
        for (ProcessId p = 1; p <= n; ++p) {
          tally.record("c3.stabilizing", out[sim.view_id(p)] == truth, [&] {
            return ctx + " round " + std::to_string(t) + " process " + std::to_string(p);
          });
        }
      }
      if (t == horizon) break;
      sim.step();
    }
  }

  if (!chk.termination && !chk.audit) return tally;

  const Schedule reduced = block_reduce(schedule, T);
  std::optional<HistoryTree> tree;
  if (chk.audit) tree = build_ground_truth(reduced, inputs, blocks);
  Simulator sim(reduced, inputs);
  std::map<std::uint64_t, TerminatingGc> states;
  for (const auto& [id, view] : sim.views()) {
    states.emplace(id, TerminatingGc(leaders, T, chk.counting));
  }
  std::vector<int> terminated_at(n, -1);
  for (int b = 0;; ++b) {
    std::map<std::uint64_t, TerminatingGc::Status> status;
    for (auto& [id, state] : states) {
      const View& view = *sim.views().at(id);
      CountingTranscript transcript;
      transcript.record_traces = chk.audit;
      const bool known = state.count().has_value();
      status[id] = state.step(view, &transcript);
      const auto count =
          known ? counting_with_leaders(view, leaders, &transcript, chk.counting) : state.count();
      const auto what = [&] { return ctx + " block " + std::to_string(b); };
      tally.record("c3.count_sound", !count || *count == n, what);
      if (known) tally.record("obs.monotone", count.has_value(), what);
      if (b == blocks) tally.record("c3.count_by_bound", count == n, what);
      if (chk.audit && !transcript.calls.empty()) {
        audit_calls(tally, view, *tree, locate_view(*tree, view), n, leaders, transcript, ctx);
      }
    }
    for (ProcessId p = 1; p <= n; ++p) {
      const auto& st = status.at(sim.view_id(p));
      if (terminated_at[p - 1] >= 0 || !st.terminated) continue;
      terminated_at[p - 1] = b;
      tally.record("c3.terminated_exact", st.output == truth, [&] {
        return ctx + " process " + std::to_string(p) + " block " + std::to_string(b);
      });
    }
    if (b == blocks) break;

    std::vector<std::uint64_t> before(n);
    for (ProcessId p = 1; p <= n; ++p) before[p - 1] = sim.view_id(p);
    sim.step();
    std::map<std::uint64_t, TerminatingGc> next;
    for (ProcessId p = 1; p <= n; ++p) next.emplace(sim.view_id(p), states.at(before[p - 1]));
    states = std::move(next);
  }
  for (ProcessId p = 1; p <= n; ++p) {
    tally.record("c3.terminates", terminated_at[p - 1] >= 0, [&] {
      return ctx + " process " + std::to_string(p) + " not terminated by block " +
             std::to_string(blocks);
    });
  }
  return tally;
}

// Canonical forms of the views of the given processes after each round.
std::vector<std::set<std::string>> forms_per_round(const Network& net,
                                                   const std::vector<ProcessId>& processes,
                                                   int rounds) {
  std::vector<std::set<std::string>> out;
  Simulator sim(net.schedule, net.inputs);
  for (int t = 0;; ++t) {
    std::set<std::string> forms;
    for (ProcessId p : processes) forms.insert(sim.view(p).canonical_form());
    out.push_back(std::move(forms));
    if (t == rounds) break;
    sim.step();
  }
  return out;
}

std::vector<ProcessId> processes_with(const Network& net,
                                      const std::function<bool(const ProcessInput&)>& pred) {
  std::vector<ProcessId> out;
  for (ProcessId p = 1; p <= net.schedule.n; ++p) {
    if (pred(net.inputs[p - 1])) out.push_back(p);
  }
  return out;
}

}  // namespace

SweepResult leaderless_sweep(const SweepSpec& spec, const LeaderlessChecks& checks) {
  std::vector<Case> cases;
  for (int n : spec.ns) {
    for (int T : spec.Ts) {
      for (int trial = 0; trial < spec.trials; ++trial) cases.push_back({n, T, 0, trial});
    }
  }
  return run_cases(cases, spec.jobs,
                   [&](const Case& c) { return leaderless_case(c, spec.seed, checks); });
}

SweepResult leader_sweep(const SweepSpec& spec, const LeaderChecks& checks) {
  std::vector<Case> cases;
  for (int n : spec.ns) {
    for (int l : spec.leaders) {
      if (l < 1 || l > n) continue;
      for (int T : spec.Ts) {
        for (int trial = 0; trial < spec.trials; ++trial) cases.push_back({n, T, l, trial});
      }
    }
  }
  return run_cases(cases, spec.jobs,
                   [&](const Case& c) { return leader_case(c, spec.seed, checks); });
}

std::vector<Check> construction_checks() {
  constexpr int kRounds = 15;
  std::vector<Check> out;

  {
    Check check{"scale_family", true, "sizes [3,4], alpha 1..3, rounds 0.." +
                                          std::to_string(kRounds)};
    const std::vector<int> sizes{3, 4};
    std::map<std::string, std::vector<std::set<std::string>>> reference;
    for (int alpha = 1; alpha <= 3 && check.passed; ++alpha) {
      const Network net = gen_scale_family(sizes, alpha, kRounds);
      for (const std::string value : {"z1", "z2"}) {
        const auto forms = forms_per_round(
            net, processes_with(net, [&](const ProcessInput& in) { return in.value == value; }),
            kRounds);
        for (int t = 0; t <= kRounds && check.passed; ++t) {
          if (forms[t].size() != 1) {
            check = {check.name, false,
                     "alpha " + std::to_string(alpha) + ": class " + value + " splits at round " +
                         std::to_string(t)};
          }
        }
        auto [it, inserted] = reference.emplace(value, forms);
        for (int t = 0; t <= kRounds && check.passed && !inserted; ++t) {
          if (forms[t] != it->second[t]) {
            check = {check.name, false,
                     "alpha " + std::to_string(alpha) + ": class " + value +
                         " differs from alpha 1 at round " + std::to_string(t)};
          }
        }
      }
    }
    out.push_back(check);
  }

  {
    Check check{"leader_ring", true, "k=3, i in {3,4}, rounds 0.." + std::to_string(kRounds)};
    std::vector<std::vector<std::set<std::string>>> per_i;
    for (int i : {3, 4}) {
      const Network net = gen_leader_ring(3, i, kRounds);
      per_i.push_back(forms_per_round(
          net, processes_with(net, [](const ProcessInput& in) { return in.leader; }), kRounds));
    }
    for (int t = 0; t <= kRounds && check.passed; ++t) {
      if (per_i[0][t].size() != 1 || per_i[0][t] != per_i[1][t]) {
        check = {check.name, false, "leader views differ at round " + std::to_string(t)};
      }
    }
    out.push_back(check);
  }

  {
    constexpr int t_param = 3;
    const auto mc = gen_cycle_with_one_marked(t_param, t_param);
    const auto companion = forms_per_round(mc.companion, {1}, t_param);
    const auto first_mismatch = [&](ProcessId p) {
      const auto forms = forms_per_round(mc.marked, {p}, t_param);
      for (int r = 0; r <= t_param; ++r) {
        if (forms[r] != companion[r]) return r;
      }
      return -1;
    };
    const int literal = first_mismatch(t_param + 1);
    out.push_back({"marked_cycle", literal < 0,
                   literal < 0 ? "p" + std::to_string(t_param + 1) + " matches rounds 0.." +
                                     std::to_string(t_param)
                               : "p" + std::to_string(t_param + 1) +
                                     " differs from the 3-cycle view at round " +
                                     std::to_string(literal)});
    const int antipode = first_mismatch(t_param + 2);
    out.push_back({"marked_cycle_antipode", antipode < 0,
                   antipode < 0 ? "p" + std::to_string(t_param + 2) + " matches rounds 0.." +
                                      std::to_string(t_param)
                                : "p" + std::to_string(t_param + 2) + " differs at round " +
                                      std::to_string(antipode)});
  }
  return out;
}

Check determinism_check(std::uint64_t seed, int jobs) {
  std::vector<ExperimentConfig> configs;
  {
    ExperimentConfig c;
    c.n = 5;
    c.seed = seed;
    c.task = Task::Average;
    configs.push_back(c);
    c.n = 4;
    c.T = 2;
    c.task = Task::Concentration;
    c.mode = Mode::Terminating;
    c.N = 6;
    configs.push_back(c);
    c = {};
    c.n = 4;
    c.leaders = 1;
    c.seed = seed + 1;
    c.task = Task::GcCount;
    c.mode = Mode::Terminating;
    configs.push_back(c);
    c.mode = Mode::Stabilizing;
    c.leaders = 2;
    c.T = 2;
    configs.push_back(c);
    c = {};
    c.family = Family::MarkedCycle;
    c.t = 2;
    c.task = Task::Average;
    configs.push_back(c);
  }
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::ostringstream first;
    std::ostringstream second;
    run_experiment(configs[i], &first);
    run_experiment(configs[i], &second);
    if (first.str() != second.str() || first.str().empty()) {
      return {"determinism", false, "experiment " + configs[i].to_json().dump()};
    }
  }

  SweepSpec spec{{1, 2, 3, 4}, {1, 2}, {1, 2}, 3, seed, 1};
  SweepSpec parallel = spec;
  parallel.jobs = std::max(2, jobs);
  if (leaderless_sweep(spec, {}).trace != leaderless_sweep(parallel, {}).trace) {
    return {"determinism", false, "leaderless sweep traces differ across job counts"};
  }
  if (leader_sweep(spec, {}).trace != leader_sweep(parallel, {}).trace) {
    return {"determinism", false, "leader sweep traces differ across job counts"};
  }
  return {"determinism", true,
          std::to_string(configs.size()) + " experiments and 2 sweeps repeated identically"};
}

SuiteResult verify_suite(int max_n, int max_T, int max_leaders, int trials, std::uint64_t seed,
                         int jobs, const CountingOptions& counting) {
  SweepSpec spec;
  for (int n = 1; n <= max_n; ++n) spec.ns.push_back(n);
  for (int T = 1; T <= max_T; ++T) spec.Ts.push_back(T);
  for (int l = 1; l <= max_leaders; ++l) spec.leaders.push_back(l);
  spec.trials = trials;
  spec.seed = seed;
  spec.jobs = jobs;

  SuiteResult result;
  result.tally = leaderless_sweep(spec, {}).tally;
  LeaderChecks checks;
  checks.counting = counting;
  result.tally.merge(leader_sweep(spec, checks).tally);
  result.passed = result.tally.clean();
  return result;
}

}  // namespace adn
