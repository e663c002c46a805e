#include "covpath/obsbuilder.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "covpath/errors.hpp"
#include "covpath/kernels.hpp"

namespace covpath {

double MultiScaleConfig::pixel_size(int i) const { return finest_resolution * std::pow(double(scale_factor), i); }

int MultiScaleConfig::block_factor(int i) const {
  int f = 1;
  for (int k = 0; k < i; ++k) f *= scale_factor;
  return f;
}

void MultiScaleConfig::validate() const {
  if (scales < 1 || scale_factor < 1 || grid < 1 || !(finest_resolution > 0.0))
    throw std::invalid_argument("invalid multi-scale configuration");
}

MaskGrid downscale_frontier(const MaskGrid& fine, int factor) {
  if (factor < 1) throw std::invalid_argument("downscale factor must be >= 1");
  if (factor == 1) return fine;
  return kernels::block_or_pool(fine, factor);
}

ScalePyramid build_pyramid(const BeliefState& belief, const MaskGrid& frontier, const MultiScaleConfig& cfg) {
  ScalePyramid p;
  Grid<float> cov(belief.width(), belief.height(), 0.0f);
  Grid<float> obs(belief.width(), belief.height(), 0.5f);
  for (std::size_t i = 0; i < cov.size(); ++i) {
    cov.raw()[i] = belief.covered().raw()[i] ? 1.0f : 0.0f;
    if (belief.obstacles().raw()[i]) {
      obs.raw()[i] = 1.0f;
    } else if (belief.known().raw()[i]) {
      obs.raw()[i] = 0.0f;
    }
  }
  for (int i = 0; i < cfg.scales; ++i) {
    const int f = cfg.block_factor(i);
    if (f == 1) {
      p.coverage.push_back(cov);
      p.obstacles.push_back(obs);
      p.frontier.push_back(frontier);
    } else {
      p.coverage.push_back(kernels::block_mean_pool(cov, f, 0.0f));
      p.obstacles.push_back(kernels::block_mean_pool(obs, f, 1.0f));
      p.frontier.push_back(downscale_frontier(frontier, f));
    }
  }
  return p;
}

MultiScaleObservation build_observation(const BeliefState& belief, const Pose& pose, const LidarScan& scan,
                                        const MultiScaleConfig& cfg, const ActionHistory& history) {
  return build_observation(belief, frontier_cells(belief), pose, scan, cfg, history);
}

MultiScaleObservation build_observation(const BeliefState& belief, const MaskGrid& frontier, const Pose& pose,
                                        const LidarScan& scan, const MultiScaleConfig& cfg,
                                        const ActionHistory& history) {
  cfg.validate();
  if (std::abs(belief.resolution() - cfg.finest_resolution) > 1e-12)
    throw GeometryError("belief resolution must equal the finest observation resolution");
  const ScalePyramid pyr = build_pyramid(belief, frontier, cfg);

  MultiScaleObservation o;
  o.scales = cfg.scales;
  o.grid = cfg.grid;
  const std::size_t layer = static_cast<std::size_t>(cfg.scales) * cfg.grid * cfg.grid;
  o.coverage.assign(layer, 0.0f);
  o.obstacles.assign(layer, 1.0f);
  o.frontier.assign(layer, 0.0f);

  const Vec2 fwd{std::cos(pose.heading), std::sin(pose.heading)};
  const Vec2 right{fwd.y, -fwd.x};
  const double half = cfg.grid / 2.0 - 0.5;
  for (int s = 0; s < cfg.scales; ++s) {
    const double ps = cfg.pixel_size(s);
    const double block = belief.resolution() * cfg.block_factor(s);
    const auto& cov = pyr.coverage[static_cast<std::size_t>(s)];
    const auto& obs = pyr.obstacles[static_cast<std::size_t>(s)];
    const auto& fr = pyr.frontier[static_cast<std::size_t>(s)];
    for (int row = 0; row < cfg.grid; ++row) {
      for (int col = 0; col < cfg.grid; ++col) {
        const Vec2 pt = pose.position() + fwd * ((half - row) * ps) + right * ((col - half) * ps);
        const int bx = static_cast<int>(std::floor((pt.x - belief.origin().x) / block));
        const int by = static_cast<int>(std::floor((pt.y - belief.origin().y) / block));
        if (!cov.in_bounds(bx, by)) continue;
        const std::size_t idx = (static_cast<std::size_t>(s) * cfg.grid + row) * cfg.grid + col;
        o.coverage[idx] = cov(bx, by);
        o.obstacles[idx] = obs(bx, by);
        o.frontier[idx] = fr(bx, by) ? 1.0f : 0.0f;
      }
    }
  }

  o.lidar.resize(scan.ranges.size());
  for (std::size_t i = 0; i < scan.ranges.size(); ++i)
    o.lidar[i] = static_cast<float>(std::clamp(scan.ranges[i] / scan.max_range, 0.0, 1.0));
  for (const Action& a : history.items()) {
    o.history.push_back(static_cast<float>(a.a_v));
    o.history.push_back(static_cast<float>(a.a_w));
  }
  return o;
}

std::vector<float> MultiScaleObservation::flatten() const {
  std::vector<float> out;
  out.reserve(coverage.size() * 3 + lidar.size() + history.size());
  out.insert(out.end(), coverage.begin(), coverage.end());
  out.insert(out.end(), obstacles.begin(), obstacles.end());
  out.insert(out.end(), frontier.begin(), frontier.end());
  out.insert(out.end(), lidar.begin(), lidar.end());
  out.insert(out.end(), history.begin(), history.end());
  return out;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

std::uint32_t get_u32(std::string_view in, std::size_t off) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= std::uint32_t(static_cast<unsigned char>(in[off + b])) << (8 * b);
  return v;
}

}  // namespace

std::string MultiScaleObservation::dump() const {
  std::string out;
  const auto flat = flatten();
  out.reserve(20 + flat.size() * 4);
  put_u32(out, static_cast<std::uint32_t>(scales));
  put_u32(out, static_cast<std::uint32_t>(grid));
  put_u32(out, static_cast<std::uint32_t>(lidar.size()));
  put_u32(out, static_cast<std::uint32_t>(history_length()));
  put_u32(out, static_cast<std::uint32_t>(kDumpVersion));
  for (float f : flat) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, sizeof bits);
    put_u32(out, bits);
  }
  return out;
}

MultiScaleObservation MultiScaleObservation::from_dump(std::string_view bytes) {
  if (bytes.size() < 20) throw ParseError("observation dump shorter than its header");
  MultiScaleObservation o;
  o.scales = static_cast<int>(get_u32(bytes, 0));
  o.grid = static_cast<int>(get_u32(bytes, 4));
  const std::size_t n_rays = get_u32(bytes, 8);
  const std::size_t k = get_u32(bytes, 12);
  if (get_u32(bytes, 16) != static_cast<std::uint32_t>(kDumpVersion)) throw ParseError("unsupported dump version");
  const std::size_t layer = static_cast<std::size_t>(o.scales) * o.grid * o.grid;
  const std::size_t total = 3 * layer + n_rays + 2 * k;
  if (bytes.size() != 20 + 4 * total) throw ParseError("observation dump size mismatch");
  std::vector<float> flat(total);
  for (std::size_t i = 0; i < total; ++i) {
    const std::uint32_t bits = get_u32(bytes, 20 + 4 * i);
    std::memcpy(&flat[i], &bits, sizeof bits);
  }
  auto it = flat.begin();
  auto take = [&](std::vector<float>& dst, std::size_t n) {
    dst.assign(it, it + static_cast<std::ptrdiff_t>(n));
    it += static_cast<std::ptrdiff_t>(n);
  };
  take(o.coverage, layer);
  take(o.obstacles, layer);
  take(o.frontier, layer);
  take(o.lidar, n_rays);
  take(o.history, 2 * k);
  return o;
}

}  // namespace covpath
