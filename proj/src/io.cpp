#include "adn/io.hpp"

#include <fstream>
#include <stdexcept>

namespace adn {

using nlohmann::json;

json schedule_to_json(const Schedule& schedule) {
  json rounds = json::array();
  for (const auto& round : schedule.rounds) {
    json edges = json::array();
    for (const auto& [pair, m] : round.edges()) edges.push_back({pair.first, pair.second, m});
    rounds.push_back(std::move(edges));
  }
  return {{"n", schedule.n}, {"rounds", std::move(rounds)}};
}

Schedule schedule_from_json(const json& j) {
  Schedule s;
  s.n = j.at("n").get<int>();
  for (const auto& round : j.at("rounds")) {
    RoundGraph g;
    for (const auto& edge : round) {
      if (!edge.is_array() || edge.size() < 2 || edge.size() > 3) {
        throw std::invalid_argument("edge must be [i, j] or [i, j, mult]");
      }
      const auto mult = edge.size() == 3 ? edge[2].get<std::uint64_t>() : 1;
      g.add_edge(edge[0].get<int>(), edge[1].get<int>(), mult);
    }
    s.rounds.push_back(std::move(g));
  }
  s.validate();
  return s;
}

json inputs_to_json(const InputAssignment& inputs) {
  json arr = json::array();
  for (const auto& in : inputs) arr.push_back({{"value", in.value}, {"leader", in.leader}});
  return {{"inputs", std::move(arr)}};
}

InputAssignment inputs_from_json(const json& j) {
  InputAssignment out;
  for (const auto& in : j.at("inputs")) {
    out.push_back({in.at("value").get<std::string>(), in.value("leader", false)});
  }
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return json::parse(f);
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump() << '\n';
}

}  // namespace adn
