#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "covpath/geometry.hpp"
#include "covpath/task.hpp"
#include "covpath/worldmodel.hpp"

namespace covpath {

struct MapGenParams {
  Task task = Task::Mowing;
  double side_min = 2.4, side_max = 7.5;      // m
  double p_floorplan = 0.7;
  double p_obstacles = 0.7;
  double room_min = 1.5, room_max = 4.8;      // m
  double wall_min = 0.075, wall_max = 0.3;    // m
  double door_min = 0.6, door_max = 1.2;      // m
  double p_wall = 0.9;
  double obstacle_radius = 0.25;              // m
  double obstacle_density = 0.25;             // per m^2
  double min_clearance = 0.6;                 // m, obstacle-obstacle and obstacle-wall gap
  double resolution = kDefaultResolution;
  double agent_radius = 0.15;                 // for the connectivity check
  int max_attempts = 64;

  static MapGenParams for_task(Task t);
};

enum class WallAxis { Vertical, Horizontal };

struct Door {
  WallAxis axis = WallAxis::Vertical;
  int wall = 0;        // index into the plan's wall list of that axis
  int segment = 0;     // room row (vertical walls) or column (horizontal walls)
  double start = 0.0;  // m along the wall
  double width = 0.0;  // m
  bool closed = false;
};

struct FloorPlan {
  double room_side = 0.0;
  double wall_thickness = 0.0;
  double door_width = 0.0;
  std::vector<double> lines;            // grid line positions (shared by both axes)
  std::vector<bool> vertical_placed;    // per line
  std::vector<bool> horizontal_placed;  // per line
  std::vector<Door> doors;
  WallAxis closed_axis = WallAxis::Vertical;

  int rooms_per_side() const { return static_cast<int>(lines.size()) + 1; }
  // Room graph reachability: rooms are grid cells, neighbours connect when the
  // wall between them is absent or has an open door.
  bool rooms_connected() const;
};

struct Disc {
  Vec2 center;
  double radius = 0.0;
};

struct GeneratedMap {
  WorldMap map;
  std::uint64_t seed = 0;
  double side = 0.0;
  bool has_floorplan = false;
  FloorPlan plan;
  std::vector<Disc> obstacles;
  int attempted_obstacles = 0;
  int attempts = 1;  // whole-map resamples needed for connectivity
};

// Square area, optional floor plan, optional disc obstacles; resampled until
// all traversable space is one 4-connected component.
GeneratedMap generate_map(std::uint64_t seed, const MapGenParams& params);

// Builds a floor plan for a square of the given side and rasterizes it into
// `obstacles` (cell size params.resolution, origin at 0).
FloorPlan generate_floorplan(std::mt19937_64& rng, const MapGenParams& params, double side, MaskGrid& obstacles);

// Poisson(area * density) attempts; a disc is dropped when its gap to any
// accepted disc or obstacle cell is below min_clearance. Accepted discs are
// rasterized into `obstacles`. Returns the accepted discs.
std::vector<Disc> scatter_obstacles(std::mt19937_64& rng, const MapGenParams& params, double side,
                                    MaskGrid& obstacles, int* attempted = nullptr);

// Gap between a disc and the nearest obstacle cell (square) in `obstacles`.
double disc_gap_to_cells(const Disc& d, const MaskGrid& obstacles, double resolution, double search);

// True if all traversable cells form one 4-connected component.
bool traversable_space_connected(const WorldMap& map, double agent_radius);

// --- curriculum -----------------------------------------------------------

struct LevelSpec {
  int level = 1;
  std::vector<int> tiers;
  bool random_maps = false;
  double goal_coverage = 0.9;
};

std::vector<LevelSpec> curriculum_levels(Task task);

struct FixedMapEntry {
  std::string id;
  int tier = 0;
};

struct CurriculumProgress {
  int level = 1;
  std::set<std::string> completed_fixed;
  bool completed_random_floorplan = false;
  bool completed_random_obstacles = false;
};

// Level in effect after applying the completion record; advances (and clears
// the record) when every fixed map of the level's tiers reached the goal and,
// on random-map levels, one floor-plan map and one obstacle map were also
// completed.
LevelSpec curriculum_next(CurriculumProgress& progress, Task task, const std::vector<FixedMapEntry>& catalog);

enum class MapSource { Fixed, Random };
// 50/50 on random-map levels, always fixed otherwise.
MapSource choose_map_source(std::mt19937_64& rng, const LevelSpec& level);

// Fixed-map catalog: `tiers.json` next to the map files,
// {"maps": [{"id": "...", "file": "...", "tier": n}, ...]}.
std::vector<FixedMapEntry> load_catalog(const std::filesystem::path& tiers_json);

}  // namespace covpath
