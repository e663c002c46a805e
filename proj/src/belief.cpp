#include "covpath/belief.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "covpath/errors.hpp"
#include "covpath/kernels.hpp"
#include "covpath/raytrace.hpp"

namespace covpath {

BeliefState::BeliefState(int width, int height, double resolution, Vec2 origin)
    : known_(width, height, 0), obstacle_(width, height, 0), covered_(width, height, 0),
      resolution_(resolution), origin_(origin) {
  if (width <= 0 || height <= 0) throw GeometryError("belief has zero size");
}

Knowledge BeliefState::knowledge(int x, int y) const {
  if (obstacle_(x, y)) return Knowledge::Obstacle;
  return known_(x, y) ? Knowledge::Free : Knowledge::Unknown;
}

Cell BeliefState::cell_at(Vec2 p) const {
  return {static_cast<int>(std::floor((p.x - origin_.x) / resolution_)),
          static_cast<int>(std::floor((p.y - origin_.y) / resolution_))};
}

Vec2 BeliefState::cell_center(Cell c) const {
  return {origin_.x + (c.x + 0.5) * resolution_, origin_.y + (c.y + 0.5) * resolution_};
}

void BeliefState::mark_free(Cell c) {
  if (!known_.in_bounds(c)) return;
  known_[c] = 1;
}

void BeliefState::mark_obstacle(Cell c) {
  if (!known_.in_bounds(c)) return;
  known_[c] = 1;
  obstacle_[c] = 1;
}

bool BeliefState::mark_covered(Cell c) {
  if (!covered_.in_bounds(c) || covered_[c] || obstacle_[c]) return false;
  covered_[c] = 1;
  ++covered_cells_;
  return true;
}

void integrate_scan(BeliefState& belief, const Pose& pose, const LidarScan& scan, const LidarConfig& cfg) {
  const double res = belief.resolution();
  for (int i = 0; i < static_cast<int>(scan.ranges.size()); ++i) {
    const double a = pose.heading + cfg.ray_offset(i);
    const Vec2 dir{std::cos(a), std::sin(a)};
    const double range = scan.ranges[static_cast<std::size_t>(i)];
    const bool hit = scan.hits[static_cast<std::size_t>(i)] != 0;
    Cell hit_cell{-1, -1};
    if (hit) {
      // nudge past the boundary so the endpoint lands inside the hit cell
      hit_cell = belief.cell_at(pose.position() + dir * (range + 1e-6 * res));
    }
    traverse_ray(belief.origin(), res, pose.position(), dir, range, [&](Cell c, double t_entry, double) {
      if (t_entry >= range - 1e-9 || c == hit_cell) return false;
      if (belief.known().in_bounds(c) && belief.knowledge(c.x, c.y) != Knowledge::Obstacle) belief.mark_free(c);
      return true;
    });
    if (hit) belief.mark_obstacle(hit_cell);
  }
}

namespace {

bool within_fov(Vec2 d, double heading, double fov) {
  if (fov >= kTwoPi - 1e-12) return true;
  if (d.x == 0.0 && d.y == 0.0) return true;
  return std::abs(wrap_angle(std::atan2(d.y, d.x) - heading)) <= fov / 2.0 + 1e-9;
}

std::size_t cover_disc(BeliefState& belief, const Pose& pose, const CoverageConfig& cfg, const WorldMap& world) {
  const double res = belief.resolution();
  const Vec2 p = pose.position();
  const Cell lo = belief.cell_at({p.x - cfg.radius, p.y - cfg.radius});
  const Cell hi = belief.cell_at({p.x + cfg.radius, p.y + cfg.radius});
  const double r2 = cfg.radius * cfg.radius + 1e-9 * res;
  std::size_t added = 0;
  for (int y = std::max(lo.y, 0); y <= std::min(hi.y, belief.height() - 1); ++y) {
    for (int x = std::max(lo.x, 0); x <= std::min(hi.x, belief.width() - 1); ++x) {
      if (belief.covered()(x, y) || world.is_obstacle(x, y)) continue;
      const Vec2 d = belief.cell_center({x, y}) - p;
      if (d.x * d.x + d.y * d.y > r2) continue;
      if (!within_fov(d, pose.heading, cfg.fov)) continue;
      added += belief.mark_covered({x, y});
    }
  }
  return added;
}

std::size_t cover_visible(BeliefState& belief, const Pose& pose, const CoverageConfig& cfg, const WorldMap& world) {
  const double res = belief.resolution();
  const Vec2 p = pose.position();
  const bool full = cfg.fov >= kTwoPi - 1e-12;
  // angular spacing keeps adjacent fan rays under 2/3 of a cell apart at the
  // coverage radius
  const int n = std::max(64, static_cast<int>(std::ceil(cfg.fov * cfg.radius / res * 1.5)));
  const double r2 = cfg.radius * cfg.radius + 1e-9 * res;
  std::size_t added = 0;
  for (int j = 0; j < n; ++j) {
    const double a = full ? pose.heading + j * kTwoPi / n : pose.heading - cfg.fov / 2.0 + j * cfg.fov / (n - 1);
    const Vec2 dir{std::cos(a), std::sin(a)};
    traverse_ray(belief.origin(), res, p, dir, cfg.radius + res, [&](Cell c, double, double) {
      if (world.is_obstacle(c)) return false;
      if (belief.covered()[c]) return true;
      const Vec2 d = belief.cell_center(c) - p;
      if (d.x * d.x + d.y * d.y <= r2 && within_fov(d, pose.heading, cfg.fov)) added += belief.mark_covered(c);
      return true;
    });
  }
  return added;
}

}  // namespace

double update_coverage(BeliefState& belief, std::span<const Pose> sweep, const CoverageConfig& cfg,
                       const WorldMap& world) {
  std::size_t added = 0;
  for (const Pose& pose : sweep)
    added += cfg.line_of_sight ? cover_visible(belief, pose, cfg, world) : cover_disc(belief, pose, cfg, world);
  belief.note_step(added > 0);
  return double(added) * belief.cell_area();
}

MaskGrid frontier_cells(const BeliefState& belief) {
  return kernels::frontier_mask(belief.covered(), belief.obstacles());
}

std::string save_belief(const BeliefState& belief) {
  std::ostringstream out;
  out << "covpath-belief v1 " << belief.width() << ' ' << belief.height() << ' ' << format_double(belief.resolution())
      << '\n';
  for (int y = belief.height() - 1; y >= 0; --y) {
    for (int x = 0; x < belief.width(); ++x) {
      switch (belief.knowledge(x, y)) {
        case Knowledge::Obstacle: out << '#'; break;
        case Knowledge::Free: out << '.'; break;
        case Knowledge::Unknown: out << '?'; break;
      }
    }
    out << '\n';
  }
  for (int y = belief.height() - 1; y >= 0; --y) {
    for (int x = 0; x < belief.width(); ++x) out << (belief.covered()(x, y) ? 'c' : '.');
    out << '\n';
  }
  return out.str();
}

BeliefState load_belief(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) throw ParseError("belief rows must end with a newline");
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (lines.empty()) throw ParseError("empty belief document");
  std::istringstream hdr{std::string(lines[0])};
  std::string magic, version;
  int w = 0, h = 0;
  double res = 0.0;
  if (!(hdr >> magic >> version >> w >> h >> res) || magic != "covpath-belief" || version != "v1")
    throw ParseError("bad belief header");
  if (w <= 0 || h <= 0) throw GeometryError("belief has zero size");
  if (lines.size() != static_cast<std::size_t>(2 * h + 1)) throw ParseError("belief row count mismatch");
  BeliefState b(w, h, res);
  for (int row = 0; row < h; ++row) {
    const auto obs = lines[static_cast<std::size_t>(1 + row)];
    const auto cov = lines[static_cast<std::size_t>(1 + h + row)];
    if (static_cast<int>(obs.size()) != w || static_cast<int>(cov.size()) != w) throw ParseError("ragged belief row");
    const int y = h - 1 - row;
    for (int x = 0; x < w; ++x) {
      const char o = obs[static_cast<std::size_t>(x)];
      if (o == '#') b.mark_obstacle({x, y});
      else if (o == '.') b.mark_free({x, y});
      else if (o != '?') throw ParseError("unknown belief character");
      const char c = cov[static_cast<std::size_t>(x)];
      if (c == 'c') b.mark_covered({x, y});
      else if (c != '.') throw ParseError("unknown coverage character");
    }
  }
  return b;
}

}  // namespace covpath
