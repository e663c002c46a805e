#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "covpath/geometry.hpp"
#include "covpath/grid.hpp"

namespace covpath {

// Default grid resolution: the finest observation scale (m/cell).
inline constexpr double kDefaultResolution = 0.0375;

// Ground-truth occupancy grid. Immutable once built; the border frame is
// always obstacle.
class WorldMap {
 public:
  WorldMap() = default;
  // Closes the border frame. Throws GeometryError on a zero-size grid or a
  // non-positive resolution.
  WorldMap(MaskGrid obstacles, double resolution, Vec2 origin = {});

  int width() const { return cells_.width(); }
  int height() const { return cells_.height(); }
  double resolution() const { return resolution_; }
  Vec2 origin() const { return origin_; }
  double metric_width() const { return width() * resolution_; }
  double metric_height() const { return height() * resolution_; }

  const MaskGrid& obstacles() const { return cells_; }
  bool is_obstacle(int x, int y) const { return !cells_.in_bounds(x, y) || cells_(x, y) != 0; }
  bool is_obstacle(Cell c) const { return is_obstacle(c.x, c.y); }

  bool contains(Vec2 p) const;
  Cell cell_at(Vec2 p) const;
  Vec2 cell_center(Cell c) const;

  std::size_t free_cell_count() const;
  double cell_area() const { return resolution_ * resolution_; }

  friend bool operator==(const WorldMap&, const WorldMap&) = default;

 private:
  MaskGrid cells_;
  double resolution_ = kDefaultResolution;
  Vec2 origin_;
};

// Map text format: header `covpath-map v1 <width> <height> <resolution_m>`
// then `height` rows of `width` characters ('#' obstacle, '.' free), top row
// first, each terminated by a single '\n'.
WorldMap load_map(std::string_view text);
std::string save_map(const WorldMap& map);
WorldMap load_map_file(const std::filesystem::path& path);
void save_map_file(const WorldMap& map, const std::filesystem::path& path);

// Shortest round-trip decimal form used for the header resolution field.
std::string format_double(double v);

// True if a disc of `radius` at `p` overlaps any obstacle cell or leaves the
// map.
bool collides(const WorldMap& map, Vec2 p, double radius);

// Radius rounded up to whole cells.
int radius_in_cells(double radius, double resolution);

// Cells whose centre keeps at least `radius` (rounded up to whole cells) from
// every obstacle cell: centre-to-centre distance >= r_cells + 1/2.
MaskGrid traversable_mask(const WorldMap& map, double radius);
MaskGrid traversable_mask(const MaskGrid& obstacles, double radius, double resolution);

struct FreeSpaceIndex {
  MaskGrid reachable_mask;     // agent-centre cells reachable from the start
  double reachable_area = 0.0; // m^2
  double radius = 0.0;
};

// 4-connected flood fill over traversable cells from the start pose's cell.
// Throws StartInObstacle if that cell is not traversable.
FreeSpaceIndex reachable_free_space(const WorldMap& map, const Pose& start, double agent_radius);

// Free cells that a disc of `coverage_radius` centred somewhere in the
// reachable set can sweep, restricted to the free component the reachable set
// lives in. This is the coverage denominator.
struct CoverageDomain {
  MaskGrid mask;
  double area = 0.0;
  std::size_t cells = 0;
};
CoverageDomain coverage_domain(const WorldMap& map, const FreeSpaceIndex& index, double coverage_radius);

}  // namespace covpath
