#pragma once

#include <string>
#include <vector>

#include "roomrec/palette.hpp"

namespace roomrec {

// 8-bit PNG; palette/gray/alpha variants are expanded to RGB, alpha
// dropped.
RgbImage read_png(const std::string& path);
void write_png(const RgbImage& image, const std::string& path);

// In-memory PNG encode, for embedding swatches into reports.
std::vector<std::uint8_t> encode_png(const RgbImage& image);

}  // namespace roomrec
