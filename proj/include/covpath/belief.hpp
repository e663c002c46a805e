#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "covpath/geometry.hpp"
#include "covpath/grid.hpp"
#include "covpath/lidar.hpp"
#include "covpath/worldmodel.hpp"

namespace covpath {

enum class Knowledge : std::uint8_t { Unknown = 0, Free = 1, Obstacle = 2 };

// What the agent has built so far, aligned 1:1 with the world grid.
class BeliefState {
 public:
  BeliefState() = default;
  BeliefState(int width, int height, double resolution, Vec2 origin = {});
  static BeliefState like(const WorldMap& map) {
    return BeliefState(map.width(), map.height(), map.resolution(), map.origin());
  }

  int width() const { return covered_.width(); }
  int height() const { return covered_.height(); }
  double resolution() const { return resolution_; }
  Vec2 origin() const { return origin_; }
  double cell_area() const { return resolution_ * resolution_; }

  Knowledge knowledge(int x, int y) const;
  const MaskGrid& known() const { return known_; }
  const MaskGrid& obstacles() const { return obstacle_; }
  const MaskGrid& covered() const { return covered_; }

  std::size_t covered_cells() const { return covered_cells_; }
  double covered_area() const { return double(covered_cells_) * cell_area(); }
  int steps_since_new_coverage() const { return steps_since_new_; }

  Cell cell_at(Vec2 p) const;
  Vec2 cell_center(Cell c) const;

  void mark_free(Cell c);
  void mark_obstacle(Cell c);
  // Returns true if the cell was newly covered.
  bool mark_covered(Cell c);
  void note_step(bool new_coverage) { steps_since_new_ = new_coverage ? 0 : steps_since_new_ + 1; }

  friend bool operator==(const BeliefState&, const BeliefState&) = default;

 private:
  MaskGrid known_;
  MaskGrid obstacle_;
  MaskGrid covered_;
  std::size_t covered_cells_ = 0;
  int steps_since_new_ = 0;
  double resolution_ = kDefaultResolution;
  Vec2 origin_;
};

// Marks the cells each ray crosses as free and the cell it ends in as an
// obstacle when the ray reported a hit. Known obstacles are never cleared.
void integrate_scan(BeliefState& belief, const Pose& pose, const LidarScan& scan, const LidarConfig& cfg);

struct CoverageConfig {
  double radius = 0.15;        // coverage radius d
  double fov = kTwoPi;         // angular extent around the heading
  bool line_of_sight = false;  // exploration: covered means sensed

  static CoverageConfig mowing(double d) { return {d, kTwoPi, false}; }
  static CoverageConfig exploration(double d, double fov) { return {d, fov, true}; }
};

// Covers every not-yet-covered cell whose centre lies within `radius` of one
// of the sweep poses, inside the field of view and, when line_of_sight is set,
// visible from the pose through `world`. Obstacle cells (ground truth or
// believed) are never covered. Updates steps_since_new_coverage and returns
// the newly covered area in m^2.
double update_coverage(BeliefState& belief, std::span<const Pose> sweep, const CoverageConfig& cfg,
                       const WorldMap& world);

MaskGrid frontier_cells(const BeliefState& belief);

// Debug/golden format: header `covpath-belief v1 <w> <h> <res>`, then h rows
// of the obstacle layer ('#' obstacle, '.' free, '?' unknown) and h rows of
// the coverage layer ('c' covered, '.' not), top row first.
std::string save_belief(const BeliefState& belief);
BeliefState load_belief(std::string_view text);

}  // namespace covpath
