#include "tggdbg/diagram.hpp"

#include <sstream>

#include "tggdbg/errors.hpp"

namespace tgg {

DiagramFormat diagramFormatFromString(std::string_view s) {
  if (s == "puml" || s == "plantuml") return DiagramFormat::PlantUml;
  if (s == "dot") return DiagramFormat::Dot;
  throw Error(ErrorCode::Argument, "unknown diagram format '" + std::string(s) + "'");
}

namespace {

std::string alias(std::string_view id) {
  std::string out(id);
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) c = '_';
  }
  return out;
}

std::string quoted(std::string_view text) {
  std::string out;
  for (char c : text) out += (c == '"') ? '\'' : c;
  return out;
}

std::string_view fill(Domain d) { return d == Domain::Target ? colors::kTarget : colors::kSource; }

std::string_view stroke(Emphasis e) {
  return e == Emphasis::Created ? colors::kCreated : colors::kContext;
}

// PlantUML colors are written without the leading '#' after "line:".
std::string_view bare(std::string_view color) { return color.substr(1); }

}  // namespace

std::string renderPlantUml(const ViewModel& view) {
  std::ostringstream out;
  out << "@startuml\n";
  if (!view.nodes.empty()) out << "hide empty members\n";
  for (const auto& n : view.nodes) {
    out << "object \"" << (n.label.empty() ? " " : quoted(n.label)) << "\" as " << alias(n.id) << ' '
        << fill(n.domain);
    if (n.emphasis == Emphasis::Created) {
      out << ";line:" << bare(colors::kCreated) << ";line.bold";
    } else if (n.emphasis == Emphasis::Context) {
      out << ";line:" << bare(colors::kContext);
    }
    out << '\n';
  }
  for (const auto& e : view.edges) {
    out << alias(e.source) << " -[" << stroke(e.emphasis) << "]-> " << alias(e.target);
    if (!e.label.empty()) out << " : " << quoted(e.label);
    out << '\n';
  }
  for (const auto& c : view.corrs) {
    out << alias(c.source) << " -[" << stroke(c.emphasis) << ",dashed]- " << alias(c.target);
    if (!c.label.empty()) out << " : " << quoted(c.label);
    out << '\n';
  }
  for (const auto& m : view.matchLinks) {
    out << alias(m.ruleNode) << " -[" << colors::kMatchLink << ",dashed]- " << alias(m.modelNode) << '\n';
  }
  out << "@enduml\n";
  return out.str();
}

std::string renderDot(const ViewModel& view) {
  std::ostringstream out;
  out << "digraph view {\n";
  out << "  node [shape=box, style=filled];\n";
  for (const auto& n : view.nodes) {
    out << "  \"" << n.id << "\" [label=\"" << quoted(n.label) << "\", fillcolor=\"" << fill(n.domain) << '"';
    if (n.emphasis == Emphasis::Created) {
      out << ", color=\"" << colors::kCreated << "\", penwidth=2";
    } else if (n.emphasis == Emphasis::Context) {
      out << ", color=\"" << colors::kContext << '"';
    }
    out << "];\n";
  }
  for (const auto& e : view.edges) {
    out << "  \"" << e.source << "\" -> \"" << e.target << "\" [label=\"" << quoted(e.label) << "\", color=\""
        << stroke(e.emphasis) << "\"];\n";
  }
  for (const auto& c : view.corrs) {
    out << "  \"" << c.source << "\" -> \"" << c.target << "\" [label=\"" << quoted(c.label)
        << "\", style=dashed, dir=none, color=\"" << stroke(c.emphasis) << "\"];\n";
  }
  for (const auto& m : view.matchLinks) {
    out << "  \"" << m.ruleNode << "\" -> \"" << m.modelNode << "\" [style=dashed, dir=none, color=\""
        << colors::kMatchLink << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string renderDiagram(const ViewModel& view, DiagramFormat format) {
  return format == DiagramFormat::Dot ? renderDot(view) : renderPlantUml(view);
}

}  // namespace tgg
