#pragma once

#include <string>

#include <json.hpp>

#include "adn/network.hpp"

namespace adn {

// {"n": int, "rounds": [[[i, j, mult], ...], ...]}; mult may be omitted.
nlohmann::json schedule_to_json(const Schedule& schedule);
Schedule schedule_from_json(const nlohmann::json& j);

// {"inputs": [{"value": string, "leader": bool}, ...]}
nlohmann::json inputs_to_json(const InputAssignment& inputs);
InputAssignment inputs_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace adn
