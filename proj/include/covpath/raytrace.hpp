#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "covpath/geometry.hpp"
#include "covpath/grid.hpp"

namespace covpath {

// Amanatides-Woo traversal of the cells crossed by the ray p + t*dir,
// t in [0, max_t], on a grid with the given origin and cell size. `visit` is
// called as visit(Cell, t_entry, t_exit) in order; return false to stop.
// `dir` must be a unit vector. Cells outside [0,w)x[0,h) are still visited,
// the caller decides what out-of-bounds means.
template <class Visit>
void traverse_ray(Vec2 origin, double res, Vec2 p, Vec2 dir, double max_t, Visit&& visit) {
  const double lx = (p.x - origin.x) / res;
  const double ly = (p.y - origin.y) / res;
  int cx = static_cast<int>(std::floor(lx));
  int cy = static_cast<int>(std::floor(ly));
  const int step_x = dir.x > 0 ? 1 : (dir.x < 0 ? -1 : 0);
  const int step_y = dir.y > 0 ? 1 : (dir.y < 0 ? -1 : 0);
  constexpr double inf = std::numeric_limits<double>::infinity();
  // t (in metres) to the next vertical / horizontal cell boundary
  double t_next_x = step_x == 0 ? inf : ((step_x > 0 ? (cx + 1 - lx) : (lx - cx)) * res) / std::abs(dir.x);
  double t_next_y = step_y == 0 ? inf : ((step_y > 0 ? (cy + 1 - ly) : (ly - cy)) * res) / std::abs(dir.y);
  const double dt_x = step_x == 0 ? inf : res / std::abs(dir.x);
  const double dt_y = step_y == 0 ? inf : res / std::abs(dir.y);
  double t = 0.0;
  while (t <= max_t) {
    const double t_exit = std::min({t_next_x, t_next_y, max_t});
    if (!visit(Cell{cx, cy}, t, t_exit)) return;
    if (t_exit >= max_t) return;
    if (t_next_x < t_next_y) {
      t = t_next_x;
      t_next_x += dt_x;
      cx += step_x;
    } else {
      t = t_next_y;
      t_next_y += dt_y;
      cy += step_y;
    }
  }
}

}  // namespace covpath
