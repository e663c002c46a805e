#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "covpath/action.hpp"
#include "covpath/belief.hpp"
#include "covpath/geometry.hpp"
#include "covpath/lidar.hpp"

namespace covpath {

struct MultiScaleConfig {
  int scales = 4;               // m
  int scale_factor = 4;         // s
  int grid = 32;                // pixels per side
  double finest_resolution = kDefaultResolution;  // m/pixel at scale 0

  // Pixel edge at scale i (0-based) in metres.
  double pixel_size(int i) const;
  // Side length d_i of the square crop at scale i.
  double side_length(int i) const { return pixel_size(i) * grid; }
  // Block factor (world cells per pixel edge) at scale i.
  int block_factor(int i) const;
  void validate() const;
};

// Policy input. Map layers are stored scale-major, each grid row-major with
// row 0 at the top (ahead of the agent).
struct MultiScaleObservation {
  static constexpr std::int32_t kDumpVersion = 1;

  int scales = 0;
  int grid = 0;
  std::vector<float> coverage;   // M_c
  std::vector<float> obstacles;  // M_o: free 0, unknown 0.5, obstacle 1
  std::vector<float> frontier;   // M_f
  std::vector<float> lidar;      // S, ranges / max_range
  std::vector<float> history;    // k actions, (a_v, a_w) pairs oldest first

  int history_length() const { return static_cast<int>(history.size() / 2); }
  float at(const std::vector<float>& layer, int scale, int row, int col) const {
    return layer[(static_cast<std::size_t>(scale) * grid + row) * grid + col];
  }

  // [M_c scales, M_o scales, M_f scales, S, history]
  std::vector<float> flatten() const;
  // 5 little-endian int32 (m, grid, n_rays, k, version) then the flattened
  // values as little-endian float32.
  std::string dump() const;
  static MultiScaleObservation from_dump(std::string_view bytes);

  friend bool operator==(const MultiScaleObservation&, const MultiScaleObservation&) = default;
};

// World-aligned pooled layers for every scale; the egocentric crops sample
// these at each pixel's rotated centre.
struct ScalePyramid {
  std::vector<Grid<float>> coverage;
  std::vector<Grid<float>> obstacles;
  std::vector<MaskGrid> frontier;
};

ScalePyramid build_pyramid(const BeliefState& belief, const MaskGrid& frontier, const MultiScaleConfig& cfg);

MultiScaleObservation build_observation(const BeliefState& belief, const Pose& pose, const LidarScan& scan,
                                        const MultiScaleConfig& cfg, const ActionHistory& history);

// As above with a precomputed frontier mask.
MultiScaleObservation build_observation(const BeliefState& belief, const MaskGrid& frontier, const Pose& pose,
                                        const LidarScan& scan, const MultiScaleConfig& cfg,
                                        const ActionHistory& history);

// Coarse cell = 1 iff any fine frontier cell in its factor x factor block.
MaskGrid downscale_frontier(const MaskGrid& fine, int factor);

}  // namespace covpath
