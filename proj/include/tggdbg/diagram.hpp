#pragma once

#include <string>
#include <string_view>

#include "tggdbg/view.hpp"

namespace tgg {

enum class DiagramFormat { PlantUml, Dot };
DiagramFormat diagramFormatFromString(std::string_view s);  // "puml" | "dot"

namespace colors {
inline constexpr std::string_view kSource = "#FFDAB9";     // peach
inline constexpr std::string_view kTarget = "#FFE4E1";     // rose
inline constexpr std::string_view kCreated = "#2E7D32";    // green outline
inline constexpr std::string_view kContext = "#000000";    // black outline
inline constexpr std::string_view kMatchLink = "#800080";  // purple
}  // namespace colors

/// PlantUML object diagram. Output depends only on the view, so equal
/// views render byte-identically.
std::string renderPlantUml(const ViewModel& view);

/// Graphviz rendering of the same content.
std::string renderDot(const ViewModel& view);

std::string renderDiagram(const ViewModel& view, DiagramFormat format = DiagramFormat::PlantUml);

}  // namespace tgg
