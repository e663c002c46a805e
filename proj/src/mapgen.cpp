#include "covpath/mapgen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "covpath/errors.hpp"

namespace covpath {

MapGenParams MapGenParams::for_task(Task t) {
  MapGenParams p;
  p.task = t;
  if (t == Task::Exploration) {
    p.side_min = 9.6;
    p.side_max = 15.0;
  }
  return p;
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

void draw_border(MaskGrid& g) {
  for (int x = 0; x < g.width(); ++x) g(x, 0) = g(x, g.height() - 1) = 1;
  for (int y = 0; y < g.height(); ++y) g(0, y) = g(g.width() - 1, y) = 1;
}

// Cells whose centre lies in [lo, hi] along one axis.
std::pair<int, int> cell_span(double lo, double hi, double res, int n) {
  const int a = std::max(0, static_cast<int>(std::ceil(lo / res - 0.5 - 1e-9)));
  const int b = std::min(n - 1, static_cast<int>(std::floor(hi / res - 0.5 + 1e-9)));
  return {a, b};
}

}  // namespace

bool FloorPlan::rooms_connected() const {
  const int n = rooms_per_side();
  auto id = [n](int i, int j) { return j * n + i; };
  std::vector<int> parent(static_cast<std::size_t>(n * n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
    return a;
  };
  auto unite = [&](int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); };

  const int lines_n = static_cast<int>(lines.size());
  for (int k = 0; k < lines_n; ++k) {
    for (int j = 0; j < n; ++j) {
      if (!vertical_placed[static_cast<std::size_t>(k)]) unite(id(k, j), id(k + 1, j));
      if (!horizontal_placed[static_cast<std::size_t>(k)]) unite(id(j, k), id(j, k + 1));
    }
  }
  for (const Door& d : doors) {
    if (d.closed) continue;
    if (d.axis == WallAxis::Vertical) {
      unite(id(d.wall, d.segment), id(d.wall + 1, d.segment));
    } else {
      unite(id(d.segment, d.wall), id(d.segment, d.wall + 1));
    }
  }
  const int root = find(0);
  for (int r = 1; r < n * n; ++r)
    if (find(r) != root) return false;
  return true;
}

FloorPlan generate_floorplan(std::mt19937_64& rng, const MapGenParams& params, double side, MaskGrid& obstacles) {
  FloorPlan plan;
  plan.room_side = uniform(rng, params.room_min, params.room_max);
  plan.wall_thickness = uniform(rng, params.wall_min, params.wall_max);
  plan.door_width = uniform(rng, params.door_min, params.door_max);
  // rooms tile from the origin; a partial room at the far edge is kept only if
  // it is at least a minimum-size room wide
  for (int k = 1; side - k * plan.room_side >= params.room_min; ++k) plan.lines.push_back(k * plan.room_side);
  for (std::size_t k = 0; k < plan.lines.size(); ++k) plan.vertical_placed.push_back(coin(rng, params.p_wall));
  for (std::size_t k = 0; k < plan.lines.size(); ++k) plan.horizontal_placed.push_back(coin(rng, params.p_wall));

  const double res = params.resolution;
  const double half_wall = plan.wall_thickness / 2.0;
  std::vector<double> bounds{0.0};
  bounds.insert(bounds.end(), plan.lines.begin(), plan.lines.end());
  bounds.push_back(side);
  const int segments = static_cast<int>(bounds.size()) - 1;
  for (int axis = 0; axis < 2; ++axis) {
    const auto& placed = axis == 0 ? plan.vertical_placed : plan.horizontal_placed;
    for (int k = 0; k < static_cast<int>(plan.lines.size()); ++k) {
      if (!placed[static_cast<std::size_t>(k)]) continue;
      for (int j = 0; j < segments; ++j) {
        const double lo = bounds[static_cast<std::size_t>(j)] + (j == 0 ? res : half_wall);
        const double hi = bounds[static_cast<std::size_t>(j) + 1] - (j == segments - 1 ? res : half_wall);
        const double room = std::max(0.0, hi - lo - plan.door_width);
        Door d;
        d.axis = axis == 0 ? WallAxis::Vertical : WallAxis::Horizontal;
        d.wall = k;
        d.segment = j;
        d.width = plan.door_width;
        d.start = lo + uniform(rng, 0.0, 1.0) * room;
        plan.doors.push_back(d);
      }
    }
  }

  // close one opening per spanning wall of one axis, never both
  auto close_axis = [&](WallAxis axis) {
    for (auto& d : plan.doors) d.closed = false;
    for (int k = 0; k < static_cast<int>(plan.lines.size()); ++k) {
      std::vector<std::size_t> candidates;
      for (std::size_t i = 0; i < plan.doors.size(); ++i)
        if (plan.doors[i].axis == axis && plan.doors[i].wall == k) candidates.push_back(i);
      if (candidates.empty()) continue;
      const auto pick = std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng);
      plan.doors[candidates[pick]].closed = true;
    }
  };
  const WallAxis first = coin(rng, 0.5) ? WallAxis::Vertical : WallAxis::Horizontal;
  const WallAxis second = first == WallAxis::Vertical ? WallAxis::Horizontal : WallAxis::Vertical;
  bool ok = false;
  for (WallAxis axis : {first, second}) {
    for (int attempt = 0; attempt < 16 && !ok; ++attempt) {
      close_axis(axis);
      plan.closed_axis = axis;
      ok = plan.rooms_connected();
    }
    if (ok) break;
  }
  if (!ok)
    for (auto& d : plan.doors) d.closed = false;

  // rasterize
  const int n = obstacles.width();
  for (int k = 0; k < static_cast<int>(plan.lines.size()); ++k) {
    const auto band = cell_span(plan.lines[static_cast<std::size_t>(k)] - half_wall,
                                plan.lines[static_cast<std::size_t>(k)] + half_wall, res, n);
    if (plan.vertical_placed[static_cast<std::size_t>(k)])
      for (int x = band.first; x <= band.second; ++x)
        for (int y = 0; y < n; ++y) obstacles(x, y) = 1;
    if (plan.horizontal_placed[static_cast<std::size_t>(k)])
      for (int y = band.first; y <= band.second; ++y)
        for (int x = 0; x < n; ++x) obstacles(x, y) = 1;
  }
  for (const Door& d : plan.doors) {
    if (d.closed) continue;
    const double line = plan.lines[static_cast<std::size_t>(d.wall)];
    const auto across = cell_span(line - half_wall, line + half_wall, res, n);
    const auto along = cell_span(d.start, d.start + d.width, res, n);
    for (int a = across.first; a <= across.second; ++a)
      for (int b = along.first; b <= along.second; ++b) {
        if (d.axis == WallAxis::Vertical) {
          obstacles(a, b) = 0;
        } else {
          obstacles(b, a) = 0;
        }
      }
  }
  // crossing walls may have been opened by a door band; keep the border shut
  draw_border(obstacles);
  return plan;
}

double disc_gap_to_cells(const Disc& d, const MaskGrid& obstacles, double resolution, double search) {
  const double reach = d.radius + search;
  const int x0 = static_cast<int>(std::floor((d.center.x - reach) / resolution));
  const int x1 = static_cast<int>(std::floor((d.center.x + reach) / resolution));
  const int y0 = static_cast<int>(std::floor((d.center.y - reach) / resolution));
  const int y1 = static_cast<int>(std::floor((d.center.y + reach) / resolution));
  double best = std::numeric_limits<double>::infinity();
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const bool occupied = !obstacles.in_bounds(x, y) || obstacles(x, y);
      if (!occupied) continue;
      const double dx = std::max({x * resolution - d.center.x, 0.0, d.center.x - (x + 1) * resolution});
      const double dy = std::max({y * resolution - d.center.y, 0.0, d.center.y - (y + 1) * resolution});
      best = std::min(best, std::hypot(dx, dy) - d.radius);
    }
  return best;
}

std::vector<Disc> scatter_obstacles(std::mt19937_64& rng, const MapGenParams& params, double side,
                                    MaskGrid& obstacles, int* attempted) {
  const MaskGrid walls = obstacles;
  const double res = params.resolution;
  const int count = std::poisson_distribution<int>(side * side * params.obstacle_density)(rng);
  if (attempted) *attempted = count;
  std::vector<Disc> accepted;
  for (int i = 0; i < count; ++i) {
    Disc d{{uniform(rng, 0.0, side), uniform(rng, 0.0, side)}, params.obstacle_radius};
    bool keep = disc_gap_to_cells(d, walls, res, params.min_clearance + res) >= params.min_clearance;
    for (const Disc& o : accepted) {
      if (!keep) break;
      keep = distance(d.center, o.center) - d.radius - o.radius >= params.min_clearance;
    }
    if (keep) accepted.push_back(d);
  }
  for (const Disc& d : accepted) {
    const auto xs = cell_span(d.center.x - d.radius, d.center.x + d.radius, res, obstacles.width());
    const auto ys = cell_span(d.center.y - d.radius, d.center.y + d.radius, res, obstacles.height());
    for (int y = ys.first; y <= ys.second; ++y)
      for (int x = xs.first; x <= xs.second; ++x) {
        const Vec2 c{(x + 0.5) * res, (y + 0.5) * res};
        if (distance(c, d.center) <= d.radius) obstacles(x, y) = 1;
      }
  }
  return accepted;
}

bool traversable_space_connected(const WorldMap& map, double agent_radius) {
  const MaskGrid pass = traversable_mask(map, agent_radius);
  const std::size_t total = count_set(pass);
  if (total == 0) return false;
  std::size_t start = 0;
  while (!pass.raw()[start]) ++start;
  MaskGrid seen(pass.width(), pass.height(), 0);
  std::deque<Cell> q{pass.cell_of(start)};
  seen[q.front()] = 1;
  std::size_t reached = 1;
  constexpr int dx[4] = {1, -1, 0, 0};
  constexpr int dy[4] = {0, 0, 1, -1};
  while (!q.empty()) {
    const Cell c = q.front();
    q.pop_front();
    for (int k = 0; k < 4; ++k) {
      const Cell nb{c.x + dx[k], c.y + dy[k]};
      if (!pass.in_bounds(nb) || !pass[nb] || seen[nb]) continue;
      seen[nb] = 1;
      ++reached;
      q.push_back(nb);
    }
  }
  return reached == total;
}

GeneratedMap generate_map(std::uint64_t seed, const MapGenParams& params) {
  std::mt19937_64 rng(seed);
  for (int attempt = 1;; ++attempt) {
    GeneratedMap g;
    g.seed = seed;
    g.attempts = attempt;
    g.side = uniform(rng, params.side_min, params.side_max);
    const int n = std::max(3, static_cast<int>(std::lround(g.side / params.resolution)));
    MaskGrid cells(n, n, 0);
    draw_border(cells);
    g.has_floorplan = coin(rng, params.p_floorplan);
    if (g.has_floorplan) g.plan = generate_floorplan(rng, params, g.side, cells);
    if (coin(rng, params.p_obstacles)) g.obstacles = scatter_obstacles(rng, params, g.side, cells, &g.attempted_obstacles);
    g.map = WorldMap(std::move(cells), params.resolution);
    if (traversable_space_connected(g.map, params.agent_radius) || attempt >= params.max_attempts) {
      if (attempt >= params.max_attempts && !traversable_space_connected(g.map, params.agent_radius))
        throw GeometryError("map generator could not produce a connected map");
      return g;
    }
  }
}

// --- curriculum -----------------------------------------------------------

std::vector<LevelSpec> curriculum_levels(Task task) {
  if (task == Task::Mowing) {
    return {
        {1, {0}, false, 0.90},       {2, {0, 1}, false, 0.90},       {3, {0, 1}, false, 0.95},
        {4, {0, 1, 2}, false, 0.95}, {5, {0, 1, 2}, false, 0.97},    {6, {0, 1, 2}, false, 0.99},
        {7, {0, 1, 2, 3}, false, 0.99}, {8, {0, 1, 2, 3}, true, 0.99},
    };
  }
  return {
      {1, {1, 2}, false, 0.90},       {2, {1, 2, 4}, false, 0.90},       {3, {1, 2, 4}, false, 0.95},
      {4, {1, 2, 4}, false, 0.97},    {5, {1, 2, 4}, false, 0.99},       {6, {1, 2, 3, 4}, false, 0.99},
      {7, {1, 2, 3, 4}, true, 0.99},  {8, {1, 2, 3, 4, 5}, true, 0.99},
  };
}

LevelSpec curriculum_next(CurriculumProgress& progress, Task task, const std::vector<FixedMapEntry>& catalog) {
  const auto levels = curriculum_levels(task);
  progress.level = std::clamp(progress.level, 1, static_cast<int>(levels.size()));
  const LevelSpec& cur = levels[static_cast<std::size_t>(progress.level) - 1];
  if (progress.level == static_cast<int>(levels.size())) return cur;

  bool done = true;
  for (const auto& m : catalog) {
    const bool in_level = std::find(cur.tiers.begin(), cur.tiers.end(), m.tier) != cur.tiers.end();
    if (in_level && !progress.completed_fixed.contains(m.id)) {
      done = false;
      break;
    }
  }
  if (cur.random_maps) done = done && progress.completed_random_floorplan && progress.completed_random_obstacles;
  if (!done) return cur;

  progress.level += 1;
  progress.completed_fixed.clear();
  progress.completed_random_floorplan = false;
  progress.completed_random_obstacles = false;
  return levels[static_cast<std::size_t>(progress.level) - 1];
}

MapSource choose_map_source(std::mt19937_64& rng, const LevelSpec& level) {
  if (!level.random_maps) return MapSource::Fixed;
  return coin(rng, 0.5) ? MapSource::Random : MapSource::Fixed;
}

std::vector<FixedMapEntry> load_catalog(const std::filesystem::path& tiers_json) {
  std::ifstream in(tiers_json);
  if (!in) throw ParseError("cannot open " + tiers_json.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  std::vector<FixedMapEntry> out;
  for (const auto& m : j.at("maps")) out.push_back({m.at("id").get<std::string>(), m.at("tier").get<int>()});
  return out;
}

}  // namespace covpath
