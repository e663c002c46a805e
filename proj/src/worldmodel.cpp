#include "covpath/worldmodel.hpp"

#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <vector>

#include "covpath/errors.hpp"
#include "covpath/kernels.hpp"

namespace covpath {

WorldMap::WorldMap(MaskGrid obstacles, double resolution, Vec2 origin)
    : cells_(std::move(obstacles)), resolution_(resolution), origin_(origin) {
  if (cells_.width() <= 0 || cells_.height() <= 0) throw GeometryError("map has zero size");
  if (!(resolution_ > 0.0) || !std::isfinite(resolution_)) throw GeometryError("resolution must be positive");
  for (auto& v : cells_.raw()) v = v ? 1 : 0;
  const int w = cells_.width(), h = cells_.height();
  for (int x = 0; x < w; ++x) {
    cells_(x, 0) = 1;
    cells_(x, h - 1) = 1;
  }
  for (int y = 0; y < h; ++y) {
    cells_(0, y) = 1;
    cells_(w - 1, y) = 1;
  }
}

bool WorldMap::contains(Vec2 p) const {
  const double lx = p.x - origin_.x, ly = p.y - origin_.y;
  return lx >= 0.0 && ly >= 0.0 && lx < metric_width() && ly < metric_height();
}

Cell WorldMap::cell_at(Vec2 p) const {
  return {static_cast<int>(std::floor((p.x - origin_.x) / resolution_)),
          static_cast<int>(std::floor((p.y - origin_.y) / resolution_))};
}

Vec2 WorldMap::cell_center(Cell c) const {
  return {origin_.x + (c.x + 0.5) * resolution_, origin_.y + (c.y + 0.5) * resolution_};
}

std::size_t WorldMap::free_cell_count() const { return cells_.size() - count_set(cells_); }

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view next_line(std::string_view text, std::size_t& pos, bool& had_newline) {
  const std::size_t nl = text.find('\n', pos);
  std::string_view line;
  if (nl == std::string_view::npos) {
    line = text.substr(pos);
    pos = text.size();
    had_newline = false;
  } else {
    line = text.substr(pos, nl - pos);
    pos = nl + 1;
    had_newline = true;
  }
  return line;
}

template <class T>
T parse_number(std::string_view tok, const char* what) {
  T v{};
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ParseError(std::string("bad ") + what + " '" + std::string(tok) + "'");
  return v;
}

}  // namespace

WorldMap load_map(std::string_view text) {
  std::size_t pos = 0;
  bool nl = false;
  const std::string_view header = next_line(text, pos, nl);
  if (!nl) throw ParseError("missing header line");

  std::vector<std::string_view> tok;
  std::size_t i = 0;
  while (i < header.size()) {
    const std::size_t sp = header.find(' ', i);
    const std::size_t end = sp == std::string_view::npos ? header.size() : sp;
    if (end == i) throw ParseError("header must use single spaces");
    tok.push_back(header.substr(i, end - i));
    i = end + 1;
    if (sp != std::string_view::npos && i == header.size()) throw ParseError("trailing space in header");
  }
  if (tok.size() != 5 || tok[0] != "covpath-map" || tok[1] != "v1")
    throw ParseError("header must be 'covpath-map v1 <width> <height> <resolution_m>'");
  const int width = parse_number<int>(tok[2], "width");
  const int height = parse_number<int>(tok[3], "height");
  const double resolution = parse_number<double>(tok[4], "resolution");
  if (width <= 0 || height <= 0) throw GeometryError("map has zero size");
  if (!(resolution > 0.0)) throw GeometryError("resolution must be positive");

  MaskGrid cells(width, height, 0);
  for (int row = 0; row < height; ++row) {
    if (pos >= text.size()) throw ParseError("expected " + std::to_string(height) + " rows, got " + std::to_string(row));
    const std::string_view line = next_line(text, pos, nl);
    if (static_cast<int>(line.size()) != width)
      throw ParseError("row " + std::to_string(row) + " has " + std::to_string(line.size()) + " characters, expected " +
                       std::to_string(width));
    const int y = height - 1 - row;
    for (int x = 0; x < width; ++x) {
      const char c = line[static_cast<std::size_t>(x)];
      if (c == '#') {
        cells(x, y) = 1;
      } else if (c != '.') {
        throw ParseError("unknown character '" + std::string(1, c) + "' in row " + std::to_string(row));
      }
    }
  }
  if (pos < text.size()) throw ParseError("trailing content after last row");
  return WorldMap(std::move(cells), resolution);
}

std::string save_map(const WorldMap& map) {
  std::string out = "covpath-map v1 " + std::to_string(map.width()) + " " + std::to_string(map.height()) + " " +
                    format_double(map.resolution()) + "\n";
  out.reserve(out.size() + static_cast<std::size_t>(map.height()) * (static_cast<std::size_t>(map.width()) + 1));
  for (int y = map.height() - 1; y >= 0; --y) {
    for (int x = 0; x < map.width(); ++x) out.push_back(map.is_obstacle(x, y) ? '#' : '.');
    out.push_back('\n');
  }
  return out;
}

WorldMap load_map_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_map(ss.str());
}

void save_map_file(const WorldMap& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << save_map(map);
}

bool collides(const WorldMap& map, Vec2 p, double radius) {
  const double res = map.resolution();
  const double lx = p.x - map.origin().x, ly = p.y - map.origin().y;
  if (lx - radius < 0.0 || ly - radius < 0.0 || lx + radius > map.metric_width() || ly + radius > map.metric_height())
    return true;
  const int x0 = static_cast<int>(std::floor((lx - radius) / res));
  const int x1 = static_cast<int>(std::floor((lx + radius) / res));
  const int y0 = static_cast<int>(std::floor((ly - radius) / res));
  const int y1 = static_cast<int>(std::floor((ly + radius) / res));
  const double r2 = radius * radius - 1e-12;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (!map.is_obstacle(x, y)) continue;
      const double dx = std::max({x * res - lx, 0.0, lx - (x + 1) * res});
      const double dy = std::max({y * res - ly, 0.0, ly - (y + 1) * res});
      if (dx * dx + dy * dy < r2) return true;
    }
  }
  return false;
}

int radius_in_cells(double radius, double resolution) {
  return static_cast<int>(std::ceil(radius / resolution - 1e-9));
}

MaskGrid traversable_mask(const MaskGrid& obstacles, double radius, double resolution) {
  const Grid<double> d2 = kernels::squared_edt(obstacles);
  const double rc = radius_in_cells(radius, resolution) + 0.5;
  const double limit = rc * rc;
  MaskGrid out(obstacles.width(), obstacles.height(), 0);
  const auto& src = d2.raw();
  auto& dst = out.raw();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = (obstacles.raw()[i] == 0 && src[i] >= limit) ? 1 : 0;
  return out;
}

MaskGrid traversable_mask(const WorldMap& map, double radius) {
  return traversable_mask(map.obstacles(), radius, map.resolution());
}

namespace {

void flood_fill_4(const MaskGrid& passable, std::deque<Cell>& frontier, MaskGrid& visited) {
  constexpr int dx[4] = {1, -1, 0, 0};
  constexpr int dy[4] = {0, 0, 1, -1};
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop_front();
    for (int k = 0; k < 4; ++k) {
      const int nx = c.x + dx[k], ny = c.y + dy[k];
      if (!passable.in_bounds(nx, ny) || !passable(nx, ny) || visited(nx, ny)) continue;
      visited(nx, ny) = 1;
      frontier.push_back({nx, ny});
    }
  }
}

}  // namespace

FreeSpaceIndex reachable_free_space(const WorldMap& map, const Pose& start, double agent_radius) {
  const MaskGrid passable = traversable_mask(map, agent_radius);
  const Cell s = map.cell_at(start.position());
  if (!passable.in_bounds(s) || !passable[s])
    throw StartInObstacle("start cell (" + std::to_string(s.x) + "," + std::to_string(s.y) +
                          ") lacks clearance for radius " + format_double(agent_radius));
  FreeSpaceIndex idx;
  idx.radius = agent_radius;
  idx.reachable_mask = MaskGrid(map.width(), map.height(), 0);
  idx.reachable_mask[s] = 1;
  std::deque<Cell> q{s};
  flood_fill_4(passable, q, idx.reachable_mask);
  idx.reachable_area = double(count_set(idx.reachable_mask)) * map.cell_area();
  return idx;
}

CoverageDomain coverage_domain(const WorldMap& map, const FreeSpaceIndex& index, double coverage_radius) {
  MaskGrid free_cells(map.width(), map.height(), 0);
  for (std::size_t i = 0; i < free_cells.size(); ++i) free_cells.raw()[i] = map.obstacles().raw()[i] ? 0 : 1;

  MaskGrid component(map.width(), map.height(), 0);
  std::deque<Cell> q;
  for (std::size_t i = 0; i < component.size(); ++i) {
    if (index.reachable_mask.raw()[i]) {
      component.raw()[i] = 1;
      q.push_back(component.cell_of(i));
    }
  }
  flood_fill_4(free_cells, q, component);

  const Grid<double> d2 = kernels::squared_edt(index.reachable_mask);
  const double rc = coverage_radius / map.resolution();
  const double limit = rc * rc + 1e-9;
  CoverageDomain dom;
  dom.mask = MaskGrid(map.width(), map.height(), 0);
  for (std::size_t i = 0; i < dom.mask.size(); ++i) {
    if (component.raw()[i] && d2.raw()[i] <= limit) {
      dom.mask.raw()[i] = 1;
      ++dom.cells;
    }
  }
  dom.area = double(dom.cells) * map.cell_area();
  return dom;
}

}  // namespace covpath
