#pragma once

#include <string>

#include "adn/history.hpp"

namespace adn {

/// Graphviz rendering: black tree edges solid, red edges dashed with the
/// multiplicity as label when it exceeds 1, one rank per level.
std::string view_to_dot(const View& view, const std::string& name = "view");

/// Same conventions; every node also shows its anonymity.
std::string tree_to_dot(const HistoryTree& tree, const std::string& name = "history");

}  // namespace adn
