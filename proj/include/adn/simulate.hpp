#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "adn/history.hpp"
#include "adn/network.hpp"

namespace adn {

/// Synchronous execution of the view-update algorithm. Identical views are
/// shared: a view's id is fixed by (own previous id, multiset of received
/// ids), which determines the merged view exactly, so merges are computed once
/// per distinct id. Ids are never reused within a run.
class Simulator {
 public:
  Simulator(const Schedule& schedule, const InputAssignment& inputs);

  /// Current round t; views are those at the end of round t.
  int round() const { return round_; }
  int n() const { return schedule_.n; }

  /// Executes round t+1.
  void step();

  std::uint64_t view_id(ProcessId p) const { return ids_.at(p - 1); }
  const View& view(ProcessId p) const { return *views_.at(view_id(p)); }
  std::shared_ptr<const View> shared_view(ProcessId p) const { return views_.at(view_id(p)); }

  /// Distinct views of the current round, by id.
  const std::map<std::uint64_t, std::shared_ptr<const View>>& views() const { return views_; }

  /// True once a round past the stored schedule has been executed.
  bool past_schedule() const { return round_ > schedule_.length(); }

 private:
  const Schedule& schedule_;
  int round_ = 0;
  std::uint64_t next_id_ = 0;
  std::vector<std::uint64_t> ids_;
  std::map<std::uint64_t, std::shared_ptr<const View>> views_;
};

template <class Output>
struct SimulationResult {
  /// outputs[t][p - 1] for rounds 0..horizon.
  std::vector<std::vector<Output>> outputs;
  /// Round at which each process terminated, or -1.
  std::vector<int> terminated_at;
  std::vector<std::shared_ptr<const View>> final_views;
  bool ran_past_schedule = false;
};

/// Runs `horizon` rounds. `task(p, round, view, view_id)` yields the output of
/// a process; once `done(output)` holds, the process has terminated and its
/// output is frozen, while it keeps relaying its view. `observer`, if set, is
/// called after each round with the simulator.
template <class Task, class Done>
auto simulate(const Schedule& schedule, const InputAssignment& inputs, int horizon, Task&& task,
              Done&& done, const std::function<void(const Simulator&)>& observer = {}) {
  using Output = std::decay_t<decltype(task(ProcessId{}, int{}, std::declval<const View&>(),
                                            std::uint64_t{}))>;
  SimulationResult<Output> result;
  const int n = schedule.n;
  result.terminated_at.assign(n, -1);
  Simulator sim(schedule, inputs);
  for (int t = 0;; ++t) {
    if (observer) observer(sim);
    std::vector<Output> row;
    row.reserve(n);
    for (ProcessId p = 1; p <= n; ++p) {
      if (result.terminated_at[p - 1] >= 0) {
        row.push_back(result.outputs.back()[p - 1]);
        continue;
      }
      row.push_back(task(p, t, sim.view(p), sim.view_id(p)));
      if (done(row.back())) result.terminated_at[p - 1] = t;
    }
    result.outputs.push_back(std::move(row));
    if (t == horizon) break;
    sim.step();
  }
  for (ProcessId p = 1; p <= n; ++p) result.final_views.push_back(sim.shared_view(p));
  result.ran_past_schedule = sim.past_schedule();
  return result;
}

}  // namespace adn
