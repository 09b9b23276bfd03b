#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include "hypembed/errors.hpp"
#include "hypembed/io.hpp"

namespace hypembed {

namespace {

constexpr std::array<const char*, 10> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
};

std::string fixed3(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.3f", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const Dataset& y, const SvgOptions& options) {
  if (y.dim() != 2) {
    throw DataError("SVG rendering needs 2-D points, got dim " + std::to_string(y.dim()));
  }
  y.validate();
  const double half = kSvgSize / 2.0;

  // Unit-disk coordinates map to pixels by x * 300 + 300, y flipped.
  double scale = 1.0;
  if (!options.draw_boundary) {
    double extent = 0.0;
    for (double v : y.points.data()) extent = std::max(extent, std::abs(v));
    if (extent > 0.0) scale = 0.95 / extent;
  }

  std::map<std::string, const char*> colors;
  if (y.has_labels()) {
    for (const std::string& l : y.labels) colors.emplace(l, nullptr);
    std::size_t idx = 0;
    for (auto& [label, color] : colors) color = kPalette[idx++ % kPalette.size()];
  }

  const std::string size = std::to_string(kSvgSize);
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + size +
         "\" height=\"" + size + "\" viewBox=\"0 0 " + size + " " + size + "\">\n";
  if (!options.title.empty()) out += "<title>" + escape_xml(options.title) + "</title>\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + size + "\" height=\"" + size +
         "\" fill=\"#ffffff\"/>\n";
  if (options.draw_boundary) {
    out += "<circle cx=\"" + fixed3(half) + "\" cy=\"" + fixed3(half) + "\" r=\"" +
           fixed3(half) + "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double cx = y.points(i, 0) * scale * half + half;
    const double cy = half - y.points(i, 1) * scale * half;
    const char* fill = y.has_labels() ? colors.at(y.labels[i]) : kPalette[0];
    out += "<circle cx=\"" + fixed3(cx) + "\" cy=\"" + fixed3(cy) + "\" r=\"" +
           fixed3(kSvgPointRadius) + "\" fill=\"" + fill + "\"";
    if (y.has_labels()) out += " data-label=\"" + escape_xml(y.labels[i]) + "\"";
    out += "/>\n";
  }
  out += "</svg>\n";
  return out;
}

void write_svg(const Dataset& y, const std::filesystem::path& path, const SvgOptions& options) {
  write_text_file(path, render_svg(y, options));
}

}  // namespace hypembed
