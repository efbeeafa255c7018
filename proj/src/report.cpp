#include "roomrec/report.hpp"

#include <cmath>
#include <sstream>

#include "roomrec/json_io.hpp"
#include "roomrec/palette.hpp"
#include "roomrec/png_io.hpp"

namespace roomrec {
namespace {

std::string base64_encode(const std::vector<std::uint8_t>& data) {
  static const char* alphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((data.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < data.size(); i += 3) {
    std::uint32_t chunk = data[i] << 16;
    if (i + 1 < data.size()) chunk |= data[i + 1] << 8;
    if (i + 2 < data.size()) chunk |= data[i + 2];
    out.push_back(alphabet[(chunk >> 18) & 63]);
    out.push_back(alphabet[(chunk >> 12) & 63]);
    out.push_back(i + 1 < data.size() ? alphabet[(chunk >> 6) & 63] : '=');
    out.push_back(i + 2 < data.size() ? alphabet[chunk & 63] : '=');
  }
  return out;
}

void hsv_to_rgb(const HsvColor& c, std::uint8_t& r8, std::uint8_t& g8, std::uint8_t& b8) {
  const double h = c.h * 6.0;
  const int sector = static_cast<int>(std::floor(h)) % 6;
  const double f = h - std::floor(h);
  const double p = c.v * (1.0 - c.s);
  const double q = c.v * (1.0 - c.s * f);
  const double t = c.v * (1.0 - c.s * (1.0 - f));
  double r = 0.0, g = 0.0, b = 0.0;
  switch (sector) {
    case 0: r = c.v; g = t; b = p; break;
    case 1: r = q; g = c.v; b = p; break;
    case 2: r = p; g = c.v; b = t; break;
    case 3: r = p; g = q; b = c.v; break;
    case 4: r = t; g = p; b = c.v; break;
    default: r = c.v; g = p; b = q; break;
  }
  r8 = static_cast<std::uint8_t>(std::lround(r * 255.0));
  g8 = static_cast<std::uint8_t>(std::lround(g * 255.0));
  b8 = static_cast<std::uint8_t>(std::lround(b * 255.0));
}

// 5-color swatch strip as an inline PNG data URI.
std::string swatch_data_uri(const nlohmann::json& palette) {
  constexpr std::size_t kSwatch = 24;
  RgbImage image;
  image.width = kSwatch * 5;
  image.height = kSwatch;
  image.pixels.resize(image.width * image.height * 3);
  for (std::size_t slot = 0; slot < 5; ++slot) {
    const HsvColor c{palette[slot][0].get<double>(), palette[slot][1].get<double>(),
                     palette[slot][2].get<double>()};
    std::uint8_t r, g, b;
    hsv_to_rgb(c, r, g, b);
    for (std::size_t y = 0; y < kSwatch; ++y) {
      for (std::size_t x = 0; x < kSwatch; ++x) {
        const std::size_t i = (y * image.width + slot * kSwatch + x) * 3;
        image.pixels[i] = r;
        image.pixels[i + 1] = g;
        image.pixels[i + 2] = b;
      }
    }
  }
  return "data:image/png;base64," + base64_encode(encode_png(image));
}

std::string escape_html(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string render_selection_report(const std::string& selection_path) {
  const nlohmann::json doc = load_json_file(selection_path);
  check_schema(doc, "selection " + selection_path);
  if (!doc.contains("rooms") || !doc.contains("cost")) {
    throw ParseError("selection " + selection_path + ": missing rooms/cost sections");
  }

  std::ostringstream html;
  html << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">"
       << "<title>Selection report</title>"
       << "<style>body{font-family:sans-serif;margin:2em}table{border-collapse:collapse}"
       << "td,th{border:1px solid #999;padding:4px 8px}h2{margin-top:1.5em}</style>"
       << "</head><body>\n<h1>Selection report</h1>\n";
  const auto& cost = doc["cost"];
  html << "<p>Total cost " << cost["total"].get<double>() << " (occupation "
       << cost["occupation"].get<double>() << ", grouping " << cost["grouping"].get<double>()
       << ", style " << cost["style"].get<double>() << ")</p>\n";

  for (const auto& room : doc["rooms"]) {
    html << "<h2>" << escape_html(room["room_id"].get<std::string>()) << "</h2>\n";
    html << "<p>occupation " << room["g1"].get<double>() << " (prior "
         << room["delta"].get<double>() << " &plusmn; " << room["sigma"].get<double>()
         << "), palette distance " << room["palette_distance"].get<double>() << "</p>\n";
    html << "<p>target palette <img src=\"" << swatch_data_uri(room["target_palette"])
         << "\" alt=\"target palette\">";
    if (room.contains("room_palette")) {
      html << " achieved <img src=\"" << swatch_data_uri(room["room_palette"])
           << "\" alt=\"room palette\">";
    }
    html << "</p>\n";
    const auto& objects = room["objects"];
    if (objects.empty()) {
      html << "<p>no objects</p>\n";
      continue;
    }
    html << "<table><tr><th>template</th><th>category</th><th>materials</th></tr>\n";
    for (const auto& o : objects) {
      html << "<tr><td>" << escape_html(o["template_id"].get<std::string>()) << "</td><td>"
           << escape_html(o["category"].get<std::string>()) << "</td><td>";
      bool first = true;
      for (const auto& [part, material] : o["materials"].items()) {
        if (!first) html << ", ";
        first = false;
        html << escape_html(part) << ": " << escape_html(material.get<std::string>());
      }
      html << "</td></tr>\n";
    }
    html << "</table>\n";
  }
  html << "</body></html>\n";
  return html.str();
}

}  // namespace roomrec
