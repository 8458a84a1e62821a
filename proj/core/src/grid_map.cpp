#include "mobman/grid_map.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mobman/error.hpp"
#include "mobman/world_config.hpp"

namespace mobman {

void WorldConfig::validate() const {
  if (!(max_velocity > 0.0) || !(wheel_radius > 0.0) || !(lx > 0.0) || !(ly > 0.0)) {
    throw std::invalid_argument("WorldConfig: max_velocity, wheel_radius, lx, ly must be > 0");
  }
}

GridMap::GridMap(int width, int height, double resolution, CellState fill)
    : width_(width), height_(height), resolution_(resolution) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("GridMap: width and height must be positive");
  }
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw std::invalid_argument("GridMap: resolution must be positive");
  }
  cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

std::optional<Cell> GridMap::world_to_cell(Point2 p) const {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    return std::nullopt;
  }
  const double fc = std::floor(p.x / resolution_);
  const double fr = std::floor(p.y / resolution_);
  if (fc < 0.0 || fr < 0.0 || fc >= width_ || fr >= height_) {
    return std::nullopt;
  }
  return Cell{static_cast<int>(fc), static_cast<int>(fr)};
}

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) {
    throw std::runtime_error("format_double: conversion failed");
  }
  return std::string(buf, end);
}

namespace {

char to_char(CellState s) {
  switch (s) {
    case CellState::Free:
      return '.';
    case CellState::Occupied:
      return '#';
    case CellState::Unknown:
      return '?';
  }
  return '?';
}

// Splits on '\n' and records where each line starts. A single trailing
// newline does not produce an extra empty line.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

template <class T>
T parse_number(std::string_view token, int line, int column, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(std::string("invalid ") + what + " '" + std::string(token) + "'", line,
                     column);
  }
  return value;
}

}  // namespace

GridMap load_map(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) {
    throw ParseError("empty input, expected P_GRID header", 1, 1);
  }

  // Header: exactly four single-space separated tokens.
  const std::string_view header = lines[0];
  std::vector<std::pair<std::string_view, int>> tokens;
  std::size_t pos = 0;
  while (pos <= header.size()) {
    const std::size_t sp = header.find(' ', pos);
    const std::size_t end = sp == std::string_view::npos ? header.size() : sp;
    tokens.emplace_back(header.substr(pos, end - pos), static_cast<int>(pos) + 1);
    if (sp == std::string_view::npos) {
      break;
    }
    pos = sp + 1;
  }
  if (tokens.size() != 4 || tokens[0].first != "P_GRID") {
    throw ParseError("expected 'P_GRID <width> <height> <resolution_m>'", 1, 1);
  }
  const int width = parse_number<int>(tokens[1].first, 1, tokens[1].second, "width");
  const int height = parse_number<int>(tokens[2].first, 1, tokens[2].second, "height");
  const double resolution =
      parse_number<double>(tokens[3].first, 1, tokens[3].second, "resolution");
  if (width <= 0) {
    throw ParseError("width must be positive", 1, tokens[1].second);
  }
  if (height <= 0) {
    throw ParseError("height must be positive", 1, tokens[2].second);
  }
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw ParseError("resolution must be positive", 1, tokens[3].second);
  }

  if (lines.size() - 1 != static_cast<std::size_t>(height)) {
    throw ParseError("expected " + std::to_string(height) + " grid rows, found " +
                         std::to_string(lines.size() - 1),
                     static_cast<int>(lines.size()), 1);
  }

  GridMap map(width, height, resolution);
  for (int i = 0; i < height; ++i) {
    const int line_no = i + 2;
    const std::string_view row_text = lines[static_cast<std::size_t>(i) + 1];
    if (row_text.size() != static_cast<std::size_t>(width)) {
      throw ParseError("row has " + std::to_string(row_text.size()) + " cells, expected " +
                           std::to_string(width),
                       line_no, static_cast<int>(std::min(row_text.size(),
                                                          static_cast<std::size_t>(width))) +
                                    1);
    }
    // Top text row holds the highest row index.
    const int row = height - 1 - i;
    for (int col = 0; col < width; ++col) {
      CellState s{};
      switch (row_text[static_cast<std::size_t>(col)]) {
        case '.':
          s = CellState::Free;
          break;
        case '#':
          s = CellState::Occupied;
          break;
        case '?':
          s = CellState::Unknown;
          break;
        default:
          throw ParseError(std::string("unexpected character '") +
                               row_text[static_cast<std::size_t>(col)] + "'",
                           line_no, col + 1);
      }
      map.set({col, row}, s);
    }
  }
  return map;
}

std::string save_map(const GridMap& map) {
  std::string out = "P_GRID " + std::to_string(map.width()) + " " +
                    std::to_string(map.height()) + " " + format_double(map.resolution()) + "\n";
  out.reserve(out.size() + map.size() + static_cast<std::size_t>(map.height()));
  for (int row = map.height() - 1; row >= 0; --row) {
    for (int col = 0; col < map.width(); ++col) {
      out.push_back(to_char(map.at({col, row})));
    }
    out.push_back('\n');
  }
  return out;
}

GridMap read_map_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("map not found " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_map(ss.str());
}

void write_map_file(const std::filesystem::path& path, const GridMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out << save_map(map);
}

}  // namespace mobman
