#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "roomrec/corpus.hpp"

namespace roomrec {

struct ChannelWeights {
  double h = 1.0;
  double s = 1.0;
  double v = 3.0;
};

// Five HSV colors, canonically ordered by v descending (ties broken by h,
// then s) so slot-wise palette distance is well defined.
struct Palette {
  std::array<HsvColor, 5> colors;
};

Palette canonical_palette(Palette p);

// Circular distance on the hue channel, in [0, 0.5].
double hue_distance(double a, double b);

// Channel-weighted squared slot-wise distance M.
double palette_distance(const Palette& p, const Palette& q,
                        const ChannelWeights& w = ChannelWeights{});

// Minimum of M over all 120 slot alignments; sensitivity-check mode.
double palette_distance_min_permutation(const Palette& p, const Palette& q,
                                        const ChannelWeights& w = ChannelWeights{});

// Slot-wise per-channel quadratic mean, re-canonicalized.
Palette hybrid_palette(const Palette& p, const Palette& q);

struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // RGB, row-major
};

HsvColor rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// Seeded k-means (k=5) over the pixel multiset in HSV, v weighted per the
// palette metric; best of `restarts` k-means++ runs.
Palette extract_palette(const RgbImage& image, std::uint64_t seed = 0, int restarts = 50);

struct TemplateEntry {
  std::string house_id;
  std::string room_type;
  Palette palette;
};

struct TemplateLibrary {
  std::vector<TemplateEntry> entries;
};

// Palettes of the house whose reference-room-type palette is closest to
// the reference; room types the house lacks fall back to the reference.
struct TemplateMatch {
  std::string house_id;
  double distance = 0.0;
  std::map<std::string, Palette> palette_of_type;
  Palette reference;

  const Palette& lookup(const std::string& room_type) const;
};

TemplateMatch match_template(const Palette& reference, const std::string& reference_room_type,
                             const TemplateLibrary& library);

Palette load_palette(const std::string& path);
void save_palette(const Palette& palette, const std::string& path);

TemplateLibrary load_templates(const std::string& path);
void save_templates(const TemplateLibrary& library, const std::string& path);

}  // namespace roomrec
