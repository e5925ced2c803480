#include "adn/dot.hpp"

#include <optional>
#include <sstream>

namespace adn {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

std::string node_name(int level, int rank) {
  return "n" + (level < 0 ? std::string("r") : std::to_string(level)) + "_" + std::to_string(rank);
}

// Shared by views and trees: level(l) yields the nodes of level l, and
// annotate(l, r) adds a second line to a node's text.
template <class Levels, class Annotate>
std::string render(const std::string& name, int last_level, Levels&& level, Annotate&& annotate,
                   std::optional<NodeRef> highlight) {
  std::ostringstream out;
  out << "digraph " << quoted(name) << " {\n";
  out << "  rankdir=TB;\n  node [shape=circle, fontsize=10];\n  edge [arrowhead=none];\n";
  for (int l = -1; l <= last_level; ++l) {
    const auto nodes = level(l);
    out << "  { rank=same;";
    for (std::size_t r = 0; r < nodes.size(); ++r) out << ' ' << node_name(l, static_cast<int>(r)) << ';';
    out << " }\n";
    for (std::size_t r = 0; r < nodes.size(); ++r) {
      const auto& node = nodes[r];
      std::string text = node.label ? to_string(*node.label) : "";
      const std::string extra = annotate(l, static_cast<int>(r));
      if (!extra.empty()) text += (text.empty() ? "" : "\\n") + extra;
      out << "  " << node_name(l, static_cast<int>(r)) << " [label=" << quoted(text);
      if (highlight && highlight->level == l && highlight->rank == static_cast<int>(r)) {
        out << ", penwidth=2";
      }
      out << "];\n";
    }
  }
  for (int l = 0; l <= last_level; ++l) {
    const auto nodes = level(l);
    for (std::size_t r = 0; r < nodes.size(); ++r) {
      const auto& node = nodes[r];
      const auto self = node_name(l, static_cast<int>(r));
      out << "  " << node_name(l - 1, node.parent) << " -> " << self << ";\n";
      for (const auto& e : node.red_in) {
        out << "  " << node_name(l - 1, e.source) << " -> " << self
            << " [color=red, style=dashed, constraint=false";
        if (e.multiplicity > 1) out << ", label=\"" << e.multiplicity << '"';
        out << "];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace

std::string view_to_dot(const View& view, const std::string& name) {
  return render(
      name, view.last_level(), [&](int l) { return view.level(l); },
      [](int, int) { return std::string(); }, view.viewpoint());
}

std::string tree_to_dot(const HistoryTree& tree, const std::string& name) {
  return render(
      name, tree.last_level(), [&](int l) { return tree.level(l); },
      [&](int l, int r) { return "a=" + std::to_string(tree.anonymity({l, r})); }, std::nullopt);
}

}  // namespace adn
