#include "adn/leaders.hpp"

#include <algorithm>

#include "view_index.hpp"

namespace adn {

std::optional<std::int64_t> counting_with_leaders(const View& view, int leaders,
                                                  CountingTranscript* transcript,
                                                  const CountingOptions& options) {
  const detail::ViewIndex index(view);
  std::int64_t best = -1;
  int s = 0;
  for (int phase = 0; phase < leaders; ++phase) {
    int t_star = -1;
    for (std::int64_t x = leaders; x >= 1; --x) {
      ApproxTrace trace;
      const bool keep = transcript && transcript->record_traces;
      const auto result = detail::approx_count(index, s, x, leaders, keep ? &trace : nullptr);
      if (transcript) transcript->calls.push_back({phase, s, x, result, std::move(trace)});
      t_star = std::max(t_star, result.level);
      if (result.estimate > 0) {
        best = std::max(best, result.estimate);
        break;
      }
      if (result.estimate == kNoLeaderNode) {
        if (transcript) {
          transcript->final_s = s;
          transcript->best = best;
        }
        return std::nullopt;
      }
      if (result.estimate == kLeaderBranches) break;
    }
    s = t_star + 1;
  }
  if (transcript) {
    transcript->final_s = s;
    transcript->best = best;
  }
  if (best > 0 && (options.skip_final_check || view.last_level() >= s - 1 + best)) return best;
  return std::nullopt;
}

std::optional<Inventory> stabilizing_gc(const View& view, int leaders) {
  const auto w = concentration_weights(view);
  if (!w) return std::nullopt;
  const auto level0 = view.level(0);
  mpq_class leader_weight = 0;
  for (std::size_t i = 0; i < level0.size(); ++i) {
    if (level0[i].label->leader) leader_weight += w->beta[i];
  }
  if (leader_weight == 0) return std::nullopt;
  Inventory out;
  for (std::size_t i = 0; i < level0.size(); ++i) {
    mpq_class gamma = leaders * w->beta[i] / leader_weight;
    gamma.canonicalize();
    if (gamma.get_den() != 1 || gamma <= 0) return std::nullopt;
    out[*level0[i].label] = gamma.get_num().get_ui();
  }
  return out;
}

TerminatingGc::TerminatingGc(int leaders, int T, CountingOptions options)
    : leaders_(leaders), T_(T), options_(options) {}

TerminatingGc::Status TerminatingGc::step(const View& view, CountingTranscript* transcript) {
  if (last_.terminated) return last_;
  const int round = view.last_level();
  if (!count_) {
    count_ = counting_with_leaders(view, leaders_, transcript, options_);
    if (count_) found_at_ = round;
  }
  last_ = {};
  if (count_ && round >= std::max<std::int64_t>(found_at_, 2 * *count_)) {
    last_.output = stabilizing_gc(view, leaders_);
    last_.terminated = last_.output.has_value();
  }
  return last_;
}

}  // namespace adn
