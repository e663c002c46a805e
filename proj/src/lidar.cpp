#include "covpath/lidar.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "covpath/errors.hpp"
#include "covpath/raytrace.hpp"

namespace covpath {

double LidarConfig::ray_offset(int i) const {
  if (full_circle()) return i * kTwoPi / n_rays;
  if (n_rays == 1) return 0.0;
  return -fov / 2.0 + i * fov / (n_rays - 1);
}

void LidarConfig::validate() const {
  if (n_rays < 1) throw std::invalid_argument("lidar needs at least one ray");
  if (!(fov > 0.0) || fov > kTwoPi + 1e-12) throw std::invalid_argument("lidar fov must be in (0, 2pi]");
  if (!(max_range > 0.0)) throw std::invalid_argument("lidar max_range must be positive");
}

LidarScan cast_rays(const WorldMap& map, const Pose& pose, const LidarConfig& cfg) {
  if (!map.contains(pose.position()))
    throw PoseOutsideMap("(" + format_double(pose.x) + ", " + format_double(pose.y) + ")");
  LidarScan scan;
  scan.max_range = cfg.max_range;
  scan.ranges.assign(static_cast<std::size_t>(cfg.n_rays), cfg.max_range);
  scan.hits.assign(static_cast<std::size_t>(cfg.n_rays), 0);
  for (int i = 0; i < cfg.n_rays; ++i) {
    const double a = pose.heading + cfg.ray_offset(i);
    const Vec2 dir{std::cos(a), std::sin(a)};
    auto& range = scan.ranges[static_cast<std::size_t>(i)];
    auto& hit = scan.hits[static_cast<std::size_t>(i)];
    traverse_ray(map.origin(), map.resolution(), pose.position(), dir, cfg.max_range,
                 [&](Cell c, double t_entry, double) {
                   if (map.is_obstacle(c)) {
                     range = std::min(t_entry, cfg.max_range);
                     hit = 1;
                     return false;
                   }
                   return true;
                 });
  }
  return scan;
}

Perceived perturb(const Pose& pose, const LidarScan& scan, const NoiseConfig& noise, std::mt19937_64& rng) {
  Perceived out{pose, scan};
  std::normal_distribution<double> unit(0.0, 1.0);
  if (noise.sigma_position > 0.0) {
    out.pose.x += noise.sigma_position * unit(rng);
    out.pose.y += noise.sigma_position * unit(rng);
  }
  if (noise.sigma_heading > 0.0) out.pose.heading = wrap_angle(pose.heading + noise.sigma_heading * unit(rng));
  if (noise.sigma_lidar > 0.0) {
    for (std::size_t i = 0; i < out.scan.ranges.size(); ++i) {
      if (!out.scan.hits[i]) continue;
      const double r = out.scan.ranges[i] + noise.sigma_lidar * unit(rng);
      out.scan.ranges[i] = std::clamp(r, 0.0, scan.max_range);
    }
  }
  return out;
}

}  // namespace covpath
