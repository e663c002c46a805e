#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "covpath/geometry.hpp"
#include "covpath/worldmodel.hpp"

namespace covpath {

struct LidarConfig {
  int n_rays = 24;
  double fov = kPi;         // radians, (0, 2*pi]
  double max_range = 3.5;   // metres

  // Table presets.
  static LidarConfig omni_exploration() { return {20, kTwoPi, 7.0}; }
  static LidarConfig non_omni_exploration() { return {24, kPi, 3.5}; }
  static LidarConfig mowing() { return {24, kPi, 3.5}; }
  static LidarConfig real_mowing() { return {24, kTwoPi, 3.5}; }

  bool full_circle() const { return fov >= kTwoPi - 1e-12; }
  // Ray angle relative to the heading.
  double ray_offset(int i) const;
  void validate() const;
};

struct LidarScan {
  std::vector<double> ranges;       // metres, in [0, max_range]
  std::vector<std::uint8_t> hits;   // 1: obstacle hit, 0: max-range miss
  double max_range = 0.0;
};

// Ranges are measured to the entry point of the first obstacle cell along
// each ray. Throws PoseOutsideMap.
LidarScan cast_rays(const WorldMap& map, const Pose& pose, const LidarConfig& cfg);

struct NoiseConfig {
  double sigma_position = 0.0;  // m, per axis
  double sigma_heading = 0.0;   // rad
  double sigma_lidar = 0.0;     // m, per ray
  std::uint64_t seed = 0;

  bool any() const { return sigma_position > 0 || sigma_heading > 0 || sigma_lidar > 0; }
};

struct Perceived {
  Pose pose;
  LidarScan scan;
};

// Independent zero-mean Gaussian noise on x, y, heading and each hit range;
// noisy ranges are clipped to [0, max_range]. Misses have no return to
// perturb and stay at max_range.
Perceived perturb(const Pose& pose, const LidarScan& scan, const NoiseConfig& noise, std::mt19937_64& rng);

}  // namespace covpath
