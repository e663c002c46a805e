#pragma once

// Slow, obviously-correct reference implementations the library is checked
// against. Nothing here calls library algorithms; only plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "covpath/geometry.hpp"
#include "covpath/grid.hpp"
#include "covpath/worldmodel.hpp"

namespace oracle {

using covpath::Cell;
using covpath::Grid;
using covpath::MaskGrid;
using covpath::Vec2;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Isotropic TV as a double loop straight from the definition: a term for
// every (i, j) where both x[i+1][j] and x[i][j+1] exist.
template <class T>
double total_variation(const Grid<T>& g) {
  const int w = g.width(), h = g.height();
  std::vector<std::vector<double>> x(static_cast<std::size_t>(w), std::vector<double>(static_cast<std::size_t>(h)));
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < h; ++j) x[i][j] = static_cast<double>(g(i, j));
  double v = 0.0;
  for (int i = 0; i + 1 < w; ++i)
    for (int j = 0; j + 1 < h; ++j) {
      const double a = std::abs(x[i + 1][j] - x[i][j]);
      const double b = std::abs(x[i][j + 1] - x[i][j]);
      v += std::sqrt(a * a + b * b);
    }
  return v;
}

// O(n * seeds) squared distance transform.
inline Grid<double> squared_edt(const MaskGrid& seeds) {
  std::vector<Cell> pts;
  for (int y = 0; y < seeds.height(); ++y)
    for (int x = 0; x < seeds.width(); ++x)
      if (seeds(x, y)) pts.push_back({x, y});
  Grid<double> out(seeds.width(), seeds.height(), kInf);
  for (int y = 0; y < seeds.height(); ++y)
    for (int x = 0; x < seeds.width(); ++x)
      for (const Cell& p : pts) {
        const double dx = x - p.x, dy = y - p.y;
        out(x, y) = std::min(out(x, y), dx * dx + dy * dy);
      }
  return out;
}

// OR over each factor x factor block, partial blocks at the far edge included.
inline MaskGrid block_or(const MaskGrid& fine, int factor) {
  const int w = (fine.width() + factor - 1) / factor;
  const int h = (fine.height() + factor - 1) / factor;
  MaskGrid out(w, h, 0);
  for (int y = 0; y < fine.height(); ++y)
    for (int x = 0; x < fine.width(); ++x)
      if (fine(x, y)) out(x / factor, y / factor) = 1;
  return out;
}

// Frontier points by definition: not covered, not a known obstacle, some
// 8-neighbour covered.
inline MaskGrid frontier(const MaskGrid& covered, const MaskGrid& obstacle) {
  MaskGrid out(covered.width(), covered.height(), 0);
  for (int y = 0; y < covered.height(); ++y)
    for (int x = 0; x < covered.width(); ++x) {
      if (covered(x, y) || obstacle(x, y)) continue;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if ((dx || dy) && covered.in_bounds(x + dx, y + dy) && covered(x + dx, y + dy)) out(x, y) = 1;
    }
  return out;
}

// Range to the first obstacle cell (or the map edge) by sampling the ray
// every `step` metres.
inline double dense_range(const covpath::WorldMap& map, Vec2 p, double angle, double max_range, double step = 1e-4) {
  const Vec2 dir{std::cos(angle), std::sin(angle)};
  const double res = map.resolution();
  for (double t = 0.0; t <= max_range; t += step) {
    const Vec2 q = p + dir * t;
    const int cx = static_cast<int>(std::floor((q.x - map.origin().x) / res));
    const int cy = static_cast<int>(std::floor((q.y - map.origin().y) / res));
    if (map.is_obstacle(cx, cy)) return t;
  }
  return max_range;
}

// Cells whose centre is at least r_cells + 1/2 from every obstacle cell
// centre, by stamping a disc around each obstacle cell that borders free
// space (interior obstacle cells are always covered by their neighbours).
inline MaskGrid traversable(const MaskGrid& obstacles, double radius, double res) {
  const int rc = static_cast<int>(std::ceil(radius / res - 1e-9));
  const double lim = rc + 0.5;
  const int k = static_cast<int>(std::ceil(lim));
  MaskGrid out(obstacles.width(), obstacles.height(), 1);
  for (int y = 0; y < obstacles.height(); ++y)
    for (int x = 0; x < obstacles.width(); ++x) {
      if (!obstacles(x, y)) continue;
      out(x, y) = 0;
      bool border = false;
      for (int d = 0; d < 4 && !border; ++d) {
        const int nx = x + (d == 0) - (d == 1), ny = y + (d == 2) - (d == 3);
        border = obstacles.in_bounds(nx, ny) && !obstacles(nx, ny);
      }
      if (!border) continue;
      for (int dy = -k; dy <= k; ++dy)
        for (int dx = -k; dx <= k; ++dx)
          if (dx * dx + dy * dy < lim * lim - 1e-9 && out.in_bounds(x + dx, y + dy)) out(x + dx, y + dy) = 0;
    }
  return out;
}

// Number of 4-connected components of the set cells.
inline int components(const MaskGrid& m) {
  MaskGrid seen(m.width(), m.height(), 0);
  int n = 0;
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      if (!m(x, y) || seen(x, y)) continue;
      ++n;
      std::deque<Cell> q{{x, y}};
      seen(x, y) = 1;
      while (!q.empty()) {
        const Cell c = q.front();
        q.pop_front();
        const Cell nb[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
        for (const Cell& b : nb)
          if (m.in_bounds(b) && m[b] && !seen[b]) {
            seen[b] = 1;
            q.push_back(b);
          }
      }
    }
  return n;
}

// Shortest 8-connected path costs (no corner cutting) by relaxing every edge
// until nothing changes.
inline Grid<double> path_costs(const MaskGrid& passable, Cell src) {
  Grid<double> d(passable.width(), passable.height(), kInf);
  if (!passable.in_bounds(src) || !passable[src]) return d;
  d[src] = 0.0;
  auto open = [&](int x, int y) { return passable.in_bounds(x, y) && passable(x, y); };
  for (bool changed = true; changed;) {
    changed = false;
    for (int y = 0; y < passable.height(); ++y)
      for (int x = 0; x < passable.width(); ++x) {
        if (!open(x, y) || d(x, y) == kInf) continue;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if (!(dx || dy) || !open(x + dx, y + dy)) continue;
            if (dx && dy && (!open(x + dx, y) || !open(x, y + dy))) continue;
            const double c = d(x, y) + ((dx && dy) ? std::sqrt(2.0) : 1.0);
            if (c < d(x + dx, y + dy) - 1e-12) {
              d(x + dx, y + dy) = c;
              changed = true;
            }
          }
      }
  }
  return d;
}

// Cheapest open path from `start` through all nodes, by enumerating every
// permutation of the rest.
template <class Cost>
double best_open_tour(int n, int start, Cost&& cost) {
  std::vector<int> rest;
  for (int i = 0; i < n; ++i)
    if (i != start) rest.push_back(i);
  double best = kInf;
  do {
    double c = 0.0;
    int prev = start;
    for (int v : rest) {
      c += cost(prev, v);
      prev = v;
    }
    best = std::min(best, c);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

// Closed-form constant-twist motion.
inline covpath::Pose unicycle(const covpath::Pose& p, double v, double w, double t) {
  if (w == 0.0) return {p.x + v * t * std::cos(p.heading), p.y + v * t * std::sin(p.heading), p.heading};
  const double th = p.heading + w * t;
  return {p.x + v / w * (std::sin(th) - std::sin(p.heading)), p.y - v / w * (std::cos(th) - std::cos(p.heading)), th};
}

// Random binary grid with blob structure: a few random discs on noise.
inline MaskGrid blobs(std::mt19937_64& rng, int w, int h, int n, double p_noise) {
  MaskGrid g(w, h, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    const double cx = u(rng) * w, cy = u(rng) * h, r = 1.0 + u(rng) * std::min(w, h) / 4.0;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if ((x + 0.5 - cx) * (x + 0.5 - cx) + (y + 0.5 - cy) * (y + 0.5 - cy) <= r * r) g(x, y) = 1;
  }
  for (auto& v : g.raw())
    if (u(rng) < p_noise) v = !v;
  return g;
}

}  // namespace oracle
