#pragma once

#include <string>

namespace roomrec {

// Renders a selection.json into a standalone HTML summary: one section per
// room with the chosen objects, materials, occupation versus prior, and
// palette swatch strips embedded as PNG data URIs.
std::string render_selection_report(const std::string& selection_path);

}  // namespace roomrec
