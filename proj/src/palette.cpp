#include "roomrec/palette.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "roomrec/json_io.hpp"
#include "roomrec/rng.hpp"

namespace roomrec {
namespace {

constexpr double kTau = 6.283185307179586476925286766559;

void check_channels(const Palette& p) {
  for (const auto& c : p.colors) {
    if (c.h < 0.0 || c.h > 1.0 || c.s < 0.0 || c.s > 1.0 || c.v < 0.0 || c.v > 1.0) {
      throw IntegrityError("palette channel outside [0,1]");
    }
  }
}

double color_distance(const HsvColor& a, const HsvColor& b, const ChannelWeights& w) {
  const double dh = hue_distance(a.h, b.h);
  const double ds = a.s - b.s;
  const double dv = a.v - b.v;
  return w.h * dh * dh + w.s * ds * ds + w.v * dv * dv;
}

}  // namespace

Palette canonical_palette(Palette p) {
  check_channels(p);
  std::sort(p.colors.begin(), p.colors.end(), [](const HsvColor& a, const HsvColor& b) {
    if (a.v != b.v) return a.v > b.v;
    if (a.h != b.h) return a.h < b.h;
    return a.s < b.s;
  });
  return p;
}

double hue_distance(double a, double b) {
  const double d = std::fabs(a - b);
  return std::min(d, 1.0 - d);
}

double palette_distance(const Palette& p, const Palette& q, const ChannelWeights& w) {
  if (w.h < 0.0 || w.s < 0.0 || w.v < 0.0 || (w.h == 0.0 && w.s == 0.0 && w.v == 0.0)) {
    throw UsageError("channel weights must be non-negative and not all zero");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < 5; ++i) total += color_distance(p.colors[i], q.colors[i], w);
  return total;
}

double palette_distance_min_permutation(const Palette& p, const Palette& q,
                                        const ChannelWeights& w) {
  std::array<std::size_t, 5> perm{0, 1, 2, 3, 4};
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      total += color_distance(p.colors[i], q.colors[perm[i]], w);
    }
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Palette hybrid_palette(const Palette& p, const Palette& q) {
  check_channels(p);
  check_channels(q);
  Palette out;
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& a = p.colors[i];
    const auto& b = q.colors[i];
    out.colors[i].h = std::sqrt((a.h * a.h + b.h * b.h) / 2.0);
    out.colors[i].s = std::sqrt((a.s * a.s + b.s * b.s) / 2.0);
    out.colors[i].v = std::sqrt((a.v * a.v + b.v * b.v) / 2.0);
  }
  return canonical_palette(out);
}

HsvColor rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
  const double max = std::max({r, g, b});
  const double min = std::min({r, g, b});
  const double delta = max - min;
  HsvColor c;
  c.v = max;
  c.s = max == 0.0 ? 0.0 : delta / max;
  if (delta == 0.0) {
    c.h = 0.0;
  } else if (max == r) {
    c.h = std::fmod((g - b) / delta + 6.0, 6.0) / 6.0;
  } else if (max == g) {
    c.h = ((b - r) / delta + 2.0) / 6.0;
  } else {
    c.h = ((r - g) / delta + 4.0) / 6.0;
  }
  return c;
}

Palette extract_palette(const RgbImage& image, std::uint64_t seed, int restarts) {
  const std::size_t n = image.width * image.height;
  if (n < 5 || image.pixels.size() != 3 * n) {
    throw ParseError("palette extraction needs an RGB image with at least 5 pixels; "
                     "consider providing a palette JSON instead");
  }
  std::vector<HsvColor> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    points[i] = rgb_to_hsv(image.pixels[3 * i], image.pixels[3 * i + 1], image.pixels[3 * i + 2]);
  }

  const ChannelWeights w;
  constexpr std::size_t k = 5;
  Rng rng(seed);
  std::array<HsvColor, k> best_centroids{};
  double best_inertia = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> assign(n, 0);
  std::vector<double> dist(n);

  for (int restart = 0; restart < std::max(restarts, 1); ++restart) {
    // k-means++ seeding.
    std::array<HsvColor, k> centroids{};
    centroids[0] = points[rng.uniform_index(n)];
    for (std::size_t c = 1; c < k; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t cc = 0; cc < c; ++cc) {
          d = std::min(d, color_distance(points[i], centroids[cc], w));
        }
        dist[i] = d;
      }
      centroids[c] = points[rng.discrete(dist)];
    }

    double inertia = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      inertia = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double d_best = std::numeric_limits<double>::infinity();
        std::size_t c_best = 0;
        for (std::size_t c = 0; c < k; ++c) {
          const double d = color_distance(points[i], centroids[c], w);
          if (d < d_best) {
            d_best = d;
            c_best = c;
          }
        }
        assign[i] = c_best;
        inertia += d_best;
      }
      // Update: circular mean on hue, plain mean on s and v.
      std::array<double, k> sum_sin{}, sum_cos{}, sum_s{}, sum_v{};
      std::array<std::size_t, k> count{};
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = assign[i];
        sum_sin[c] += std::sin(points[i].h * kTau);
        sum_cos[c] += std::cos(points[i].h * kTau);
        sum_s[c] += points[i].s;
        sum_v[c] += points[i].v;
        ++count[c];
      }
      bool moved = false;
      for (std::size_t c = 0; c < k; ++c) {
        if (count[c] == 0) continue;  // empty cluster keeps its centroid
        HsvColor next;
        double angle = std::atan2(sum_sin[c], sum_cos[c]) / kTau;
        if (angle < 0.0) angle += 1.0;
        next.h = angle;
        next.s = sum_s[c] / static_cast<double>(count[c]);
        next.v = sum_v[c] / static_cast<double>(count[c]);
        if (color_distance(next, centroids[c], w) > 1e-14) moved = true;
        centroids[c] = next;
      }
      if (!moved) break;
    }
    if (inertia < best_inertia) {
      best_inertia = inertia;
      best_centroids = centroids;
    }
  }

  Palette palette;
  palette.colors = best_centroids;
  return canonical_palette(palette);
}

const Palette& TemplateMatch::lookup(const std::string& room_type) const {
  auto it = palette_of_type.find(room_type);
  return it == palette_of_type.end() ? reference : it->second;
}

TemplateMatch match_template(const Palette& reference, const std::string& reference_room_type,
                             const TemplateLibrary& library) {
  const TemplateEntry* best = nullptr;
  double best_distance = std::numeric_limits<double>::infinity();
  for (const auto& entry : library.entries) {
    if (entry.room_type != reference_room_type) continue;
    const double d = palette_distance(reference, entry.palette);
    if (d < best_distance) {
      best_distance = d;
      best = &entry;
    }
  }
  if (!best) {
    throw IntegrityError("template library has no entry of room type '" + reference_room_type +
                         "'");
  }
  TemplateMatch match;
  match.house_id = best->house_id;
  match.distance = best_distance;
  match.reference = reference;
  for (const auto& entry : library.entries) {
    if (entry.house_id == match.house_id) match.palette_of_type[entry.room_type] = entry.palette;
  }
  return match;
}

namespace {

nlohmann::json dump_palette(const Palette& p) {
  nlohmann::json colors = nlohmann::json::array();
  for (const auto& c : p.colors) colors.push_back({c.h, c.s, c.v});
  return colors;
}

Palette parse_palette(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 5) {
    throw ParseError(where + ": palette must hold exactly 5 colors");
  }
  Palette p;
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& cj = j[i];
    if (!cj.is_array() || cj.size() != 3) {
      throw ParseError(where + ": color must be a [h,s,v] triple");
    }
    p.colors[i] = {cj[0].get<double>(), cj[1].get<double>(), cj[2].get<double>()};
  }
  return canonical_palette(p);
}

}  // namespace

Palette load_palette(const std::string& path) {
  const nlohmann::json doc = load_json_file(path);
  check_schema(doc, "palette " + path);
  return parse_palette(doc.at("colors"), "palette " + path);
}

void save_palette(const Palette& palette, const std::string& path) {
  nlohmann::json doc;
  doc["schema_version"] = kSchemaMajor;
  doc["colors"] = dump_palette(palette);
  save_json_file(doc, path);
}

TemplateLibrary load_templates(const std::string& path) {
  const nlohmann::json doc = load_json_file(path);
  check_schema(doc, "templates " + path);
  TemplateLibrary library;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& ej : doc.at("entries")) {
    TemplateEntry entry;
    entry.house_id = ej.at("house_id").get<std::string>();
    entry.room_type = ej.at("room_type").get<std::string>();
    if (!seen.insert({entry.house_id, entry.room_type}).second) {
      throw IntegrityError("templates " + path + ": duplicate entry (" + entry.house_id + ", " +
                           entry.room_type + ")");
    }
    entry.palette = parse_palette(ej.at("palette"), "template (" + entry.house_id + ", " +
                                                        entry.room_type + ")");
    library.entries.push_back(std::move(entry));
  }
  return library;
}

void save_templates(const TemplateLibrary& library, const std::string& path) {
  nlohmann::json doc;
  doc["schema_version"] = kSchemaMajor;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& entry : library.entries) {
    entries.push_back({{"house_id", entry.house_id},
                       {"room_type", entry.room_type},
                       {"palette", dump_palette(entry.palette)}});
  }
  doc["entries"] = std::move(entries);
  save_json_file(doc, path);
}

}  // namespace roomrec
