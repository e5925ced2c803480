#include "adn/simulate.hpp"

#include <algorithm>
#include <stdexcept>

namespace adn {

Simulator::Simulator(const Schedule& schedule, const InputAssignment& inputs)
    : schedule_(schedule) {
  schedule.validate();
  if (static_cast<int>(inputs.size()) != schedule.n) {
    throw std::invalid_argument("input assignment length differs from n");
  }
  std::map<ProcessInput, std::uint64_t> by_input;
  for (const auto& in : inputs) {
    auto [it, inserted] = by_input.emplace(in, next_id_);
    if (inserted) views_.emplace(next_id_++, std::make_shared<const View>(View::initial(in)));
    ids_.push_back(it->second);
  }
}

void Simulator::step() {
  ++round_;
  const int n = schedule_.n;
  const auto adj = schedule_.round(round_).incidence(n);
  using MergeKey = std::pair<std::uint64_t, std::vector<std::pair<std::uint64_t, std::uint64_t>>>;
  std::map<MergeKey, std::uint64_t> merged;
  std::map<std::uint64_t, std::shared_ptr<const View>> next_views;
  std::vector<std::uint64_t> next_ids(n);
  for (ProcessId p = 1; p <= n; ++p) {
    std::map<std::uint64_t, std::uint64_t> received;
    for (const auto& link : adj[p]) received[ids_[link.peer - 1]] += link.multiplicity;
    MergeKey key{ids_[p - 1], {received.begin(), received.end()}};
    auto it = merged.find(key);
    if (it == merged.end()) {
      std::vector<Message> messages;
      for (const auto& [id, m] : received) messages.push_back({views_.at(id).get(), m});
      auto view = std::make_shared<const View>(merge_view(*views_.at(ids_[p - 1]), messages));
      it = merged.emplace(std::move(key), next_id_).first;
      next_views.emplace(next_id_++, std::move(view));
    }
    next_ids[p - 1] = it->second;
  }
  ids_ = std::move(next_ids);
  views_ = std::move(next_views);
}

}  // namespace adn
