#include "covpath/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace covpath {

// --- tracker ------------------------------------------------------------------

void WaypointTracker::set_path(std::vector<Vec2> waypoints, std::optional<Vec2> face) {
  path_ = std::move(waypoints);
  next_ = 0;
  face_ = face;
  best_dist_ = std::numeric_limits<double>::infinity();
  stalled_ = 0;
  detour_end_ = 0;
}

void WaypointTracker::advance() {
  ++next_;
  best_dist_ = std::numeric_limits<double>::infinity();
  stalled_ = 0;
}

void WaypointTracker::skip_reached(const Pose& pose) {
  while (next_ < path_.size() && distance(pose.position(), path_[next_]) <= cfg_.arrive_tolerance) advance();
  if (next_ >= path_.size() && face_) {
    const Vec2 d = *face_ - pose.position();
    if (std::abs(wrap_angle(std::atan2(d.y, d.x) - pose.heading)) <= cfg_.heading_tolerance) face_.reset();
  }
}

Action WaypointTracker::command(const Pose& pose, const DynamicsConfig& dyn) {
  const double dt = dyn.dt;
  auto turn = [&](double e) { return Action(0.0, std::clamp(e / dt, -dyn.w_max, dyn.w_max) / dyn.w_max); };

  skip_reached(pose);
  if (next_ >= path_.size()) {
    if (!face_) return {};
    const Vec2 d = *face_ - pose.position();
    return turn(wrap_angle(std::atan2(d.y, d.x) - pose.heading));
  }

  const Vec2 d = path_[next_] - pose.position();
  const double dist = d.norm();
  const double e = wrap_angle(std::atan2(d.y, d.x) - pose.heading);
  if (std::abs(e) > cfg_.heading_tolerance) return turn(e);

  if (dist < best_dist_ - 1e-4) {
    best_dist_ = dist;
    stalled_ = 0;
  } else if (++stalled_ > cfg_.stall_steps) {
    std::vector<Vec2> via;
    if (stall_handler_ && next_ >= detour_end_) via = stall_handler_(pose, path_[next_]);
    if (via.empty()) {
      advance();
    } else {
      path_.insert(path_.begin() + static_cast<std::ptrdiff_t>(next_), via.begin(), via.end());
      detour_end_ = next_ + via.size() + 1;
      best_dist_ = std::numeric_limits<double>::infinity();
      stalled_ = 0;
    }
    return command(pose, dyn);
  }
  // arc through the waypoint: curvature 2 sin(e) / dist, length dist e / sin(e)
  const double arc = std::abs(e) < 1e-9 ? dist : dist * e / std::sin(e);
  double v = std::min(dyn.v_max, arc / dt);
  double w = v * 2.0 * std::sin(e) / dist;
  if (std::abs(w) > dyn.w_max) {
    v *= dyn.w_max / std::abs(w);
    w = std::copysign(dyn.w_max, w);
  }
  return Action(v / dyn.v_max, w / dyn.w_max);
}

// --- shared helpers -------------------------------------------------------------

MaskGrid passable_component(const MaskGrid& obstacles, double radius, double resolution, Cell from) {
  const MaskGrid trav = traversable_mask(obstacles, radius, resolution);
  MaskGrid out(trav.width(), trav.height(), 0);
  const auto seed = nearest_passable(trav, from, 8);
  if (!seed) return out;
  std::deque<Cell> q{*seed};
  out[*seed] = 1;
  constexpr int dx[4] = {1, -1, 0, 0};
  constexpr int dy[4] = {0, 0, 1, -1};
  while (!q.empty()) {
    const Cell c = q.front();
    q.pop_front();
    for (int k = 0; k < 4; ++k) {
      const Cell n{c.x + dx[k], c.y + dy[k]};
      if (!trav.in_bounds(n) || !trav[n] || out[n]) continue;
      out[n] = 1;
      q.push_back(n);
    }
  }
  return out;
}

namespace {

Cell robot_cell(const MaskGrid& passable, const BeliefState& b, const Pose& p) {
  const Cell c = b.cell_at(p.position());
  return nearest_passable(passable, c, 8).value_or(c);
}

std::vector<Cell> to_cells(const WorldMap& map, std::span<const Vec2> pts) {
  std::vector<Cell> out;
  out.reserve(pts.size());
  for (const Vec2& p : pts) out.push_back(map.cell_at(p));
  return out;
}

// Drives from cells.back() through every target in order: one A* leg per
// target, each leg shortcut on its own so the targets stay waypoints.
// Appends the leg cells to `cells` and the waypoints to `waypoints`.
void append_legs(std::vector<Cell>& cells, std::vector<Vec2>& waypoints, const WorldMap& world,
                 const MaskGrid& passable, std::span<const Cell> targets, double radius, OpCounter& ops) {
  for (const Cell& t : targets) {
    const auto leg = astar(passable, cells.back(), t, &ops);
    if (!leg) continue;
    cells.insert(cells.end(), leg->cells.begin() + 1, leg->cells.end());
    const std::vector<Vec2> pts = shortcut(world, leg->cells, radius, &ops);
    waypoints.insert(waypoints.end(), pts.begin() + 1, pts.end());
  }
}

std::vector<Cell> tour(const MaskGrid& passable, Cell start, std::span<const Cell> targets, double res,
                       const TspCostConfig& cfg, OpCounter& ops) {
  if (targets.empty()) return {};
  std::vector<Cell> pts{start};
  pts.insert(pts.end(), targets.begin(), targets.end());
  const CostMatrix costs = tsp_costs(passable, pts, res, cfg, &ops);
  const std::vector<int> order = tsp_order(costs, 0, &ops);
  std::vector<Cell> out;
  for (std::size_t i = 1; i < order.size(); ++i) out.push_back(pts[static_cast<std::size_t>(order[i])]);
  return out;
}

double cover_radius_cells(const Episode& ep) { return ep.config().coverage.radius / ep.world().resolution(); }

// Lane spacing and grid-node spacing keep one cell of overlap so tracking
// error does not open gaps exactly at the coverage radius.
double lane_spacing(const Episode& ep) { return 2.0 * ep.config().coverage.radius - ep.world().resolution(); }
double node_spacing(const Episode& ep) { return lane_spacing(ep) / std::numbers::sqrt2; }

}  // namespace

void PlannedController::charge(const OpCounter& ops, double dt) {
  const double s = double(ops.ops) * cfg_.op_seconds;
  charged_ += s;
  debt_ += s;
  const int steps = static_cast<int>(std::floor(debt_ / dt + 1e-9));
  busy_steps_ += steps;
  debt_ = std::max(0.0, debt_ - steps * dt);
}

// --- offline ------------------------------------------------------------------

void OfflinePathController::reset(const Episode& ep) {
  const WorldMap& world = ep.world();
  const double r = ep.config().dynamics.agent_radius;
  const double rc = cover_radius_cells(ep);
  const MaskGrid& passable = ep.free_space().reachable_mask;
  reset_charge();
  OpCounter ops;
  const Cell start = robot_cell(passable, ep.belief(), ep.perceived_pose());

  targets_ = primary_targets(ep, passable, start, ops);
  cells_ = {start};
  std::vector<Vec2> waypoints{world.cell_center(start)};
  append_legs(cells_, waypoints, world, passable, targets_, r, ops);

  // cells the primary path misses (near obstacles, partial decomposition
  // cells) get extra disc targets toured from the end of the path
  MaskGrid remaining = ep.domain().mask;
  // half a cell short of the true radius, for the same tracking error
  const MaskGrid swept = sweep_mask(world.width(), world.height(), to_cells(world, waypoints), rc - 0.5);
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining.raw()[i] &= !swept.raw()[i];
  const CoverTargets extra = greedy_cover(passable, remaining, rc, &ops);
  if (!extra.targets.empty()) {
    const std::vector<Cell> order = tour(passable, cells_.back(), extra.targets, world.resolution(), cfg_.tsp, ops);
    append_legs(cells_, waypoints, world, passable, order, r, ops);
    targets_.insert(targets_.end(), order.begin(), order.end());
  }
  tracker_.set_path(std::move(waypoints));
  charge(ops, ep.config().dt());

  // pinned against an obstacle off the planned line: route around it
  tracker_.on_stall([this, &ep](const Pose& pose, Vec2 target) {
    const WorldMap& w = ep.world();
    const MaskGrid& pass = ep.free_space().reachable_mask;
    OpCounter detour_ops;
    const Cell from = robot_cell(pass, ep.belief(), pose);
    const Cell to = nearest_passable(pass, w.cell_at(target), 8).value_or(from);
    const auto leg = astar(pass, from, to, &detour_ops);
    std::vector<Vec2> via;
    if (leg) {
      via = shortcut(w, leg->cells, ep.config().dynamics.agent_radius, &detour_ops);
      via.pop_back();
    }
    charge(detour_ops, ep.config().dt());
    return via;
  });
}

Action OfflinePathController::act(const Episode& ep) {
  if (busy()) return {};
  return tracker_.command(ep.perceived_pose(), ep.config().dynamics);
}

std::vector<Cell> TspOfflineController::primary_targets(const Episode& ep, const MaskGrid& passable, Cell start,
                                                        OpCounter& ops) {
  const CoverageGrid grid = build_coverage_grid(passable, node_spacing(ep), ep.world().resolution());
  return tour(passable, start, grid.nodes, ep.world().resolution(), cfg_.tsp, ops);
}

std::vector<Cell> BsaController::primary_targets(const Episode& ep, const MaskGrid& passable, Cell start,
                                                 OpCounter& ops) {
  const double res = ep.world().resolution();
  const CoverageGrid grid = build_coverage_grid(passable, lane_spacing(ep), res);
  if (grid.nodes.empty()) return {};
  const int gx = static_cast<int>(std::floor((start.x + 0.5) * res / grid.cell_side));
  const int gy = static_cast<int>(std::floor((start.y + 0.5) * res / grid.cell_side));
  int node = grid.node_at(gx, gy);
  if (node < 0) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
      const double d = std::hypot(double(grid.nodes[i].x - start.x), double(grid.nodes[i].y - start.y));
      if (d < best) {
        best = d;
        node = static_cast<int>(i);
      }
    }
  }
  const int dir = static_cast<int>(std::lround(ep.perceived_pose().heading / (kPi / 2.0)));
  const std::vector<int> seq = bsa_sequence(grid, passable, node, dir, &ops);
  std::vector<Cell> out;
  out.reserve(seq.size());
  for (int i : seq) out.push_back(grid.nodes[static_cast<std::size_t>(i)]);
  return out;
}

// --- online TSP ---------------------------------------------------------------

void TspOnlineController::reset(const Episode& ep) {
  reset_charge();
  queue_.clear();
  next_ = 0;
  replans_ = 0;
  finished_ = false;
  blacklist_.assign(ep.belief().covered().size(), 0);
  tracker_.clear();
  refresh_passable(ep);
}

void TspOnlineController::refresh_passable(const Episode& ep) {
  const BeliefState& b = ep.belief();
  obstacle_count_ = count_set(b.obstacles());
  passable_ = passable_component(b.obstacles(), ep.config().dynamics.agent_radius, b.resolution(),
                                 b.cell_at(ep.perceived_pose().position()));
}

bool TspOnlineController::target_useful(const Episode& ep, Cell t) const {
  const BeliefState& b = ep.belief();
  const double rc = cover_radius_cells(ep);
  const int r = static_cast<int>(std::floor(rc + 1e-9));
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      if (dx * dx + dy * dy > rc * rc + 1e-9) continue;
      const int x = t.x + dx, y = t.y + dy;
      if (b.known().in_bounds(x, y) && b.knowledge(x, y) == Knowledge::Free && !b.covered()(x, y)) return true;
    }
  return false;
}

void TspOnlineController::replan(const Episode& ep) {
  ++replans_;
  OpCounter ops;
  refresh_passable(ep);
  const BeliefState& b = ep.belief();
  const double rc = cover_radius_cells(ep);
  MaskGrid remaining(b.width(), b.height(), 0);
  for (int y = 0; y < b.height(); ++y)
    for (int x = 0; x < b.width(); ++x)
      remaining(x, y) = b.knowledge(x, y) == Knowledge::Free && !b.covered()(x, y);

  const CoverageGrid grid =
      build_coverage_grid(passable_, node_spacing(ep), b.resolution());
  std::vector<Cell> targets;
  const int ri = static_cast<int>(std::floor(rc + 1e-9));
  std::vector<Cell> disc;
  for (int dy = -ri; dy <= ri; ++dy)
    for (int dx = -ri; dx <= ri; ++dx)
      if (dx * dx + dy * dy <= rc * rc + 1e-9) disc.push_back({dx, dy});
  for (const Cell& n : grid.nodes) {
    if (blacklist_[passable_.index(n.x, n.y)]) continue;
    bool hit = false;
    for (const Cell& o : disc) {
      const int x = n.x + o.x, y = n.y + o.y;
      if (remaining.in_bounds(x, y) && remaining(x, y)) hit = true;
    }
    ops.add(static_cast<std::int64_t>(disc.size()));
    if (!hit) continue;
    targets.push_back(n);
    for (const Cell& o : disc) {
      const int x = n.x + o.x, y = n.y + o.y;
      if (remaining.in_bounds(x, y)) remaining(x, y) = 0;
    }
  }
  for (const Cell& t : greedy_cover(passable_, remaining, rc, &ops).targets)
    if (!blacklist_[passable_.index(t.x, t.y)]) targets.push_back(t);

  queue_.clear();
  next_ = 0;
  if (targets.empty()) {
    finished_ = true;
  } else {
    const Cell from = robot_cell(passable_, b, ep.perceived_pose());
    queue_ = tour(passable_, from, targets, b.resolution(), cfg_.tsp, ops);
  }
  charge(ops, ep.config().dt());
}

bool TspOnlineController::start_leg(const Episode& ep) {
  const BeliefState& b = ep.belief();
  OpCounter ops;
  bool started = false;
  while (next_ < queue_.size()) {
    const Cell t = queue_[next_++];
    if (blacklist_[passable_.index(t.x, t.y)] || !target_useful(ep, t)) continue;
    const Cell from = robot_cell(passable_, b, ep.perceived_pose());
    const auto path = astar(passable_, from, t, &ops);
    if (!path) {
      blacklist_[passable_.index(t.x, t.y)] = 1;
      continue;
    }
    const WorldMap believed(b.obstacles(), b.resolution(), b.origin());
    tracker_.set_path(shortcut(believed, path->cells, ep.config().dynamics.agent_radius, &ops));
    started = true;
    break;
  }
  charge(ops, ep.config().dt());
  return started;
}

Action TspOnlineController::act(const Episode& ep) {
  if (busy()) return {};
  if (finished_) return {};
  const BeliefState& b = ep.belief();
  if (count_set(b.obstacles()) != obstacle_count_) {
    refresh_passable(ep);
    // new obstacles may cut the leg being driven; re-plan that leg
    const WorldMap believed(b.obstacles(), b.resolution(), b.origin());
    const double r = ep.config().dynamics.agent_radius;
    Vec2 from = ep.perceived_pose().position();
    for (const Vec2& w : tracker_.remaining()) {
      if (!segment_clear(believed, from, w, r)) {
        tracker_.clear();
        if (next_ > 0) --next_;
        break;
      }
      from = w;
    }
  }
  tracker_.skip_reached(ep.perceived_pose());
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (!tracker_.done()) return tracker_.command(ep.perceived_pose(), ep.config().dynamics);
    if (start_leg(ep)) {
      if (busy()) return {};
      continue;
    }
    if (attempt > 0) break;
    replan(ep);
    if (finished_ || busy()) return {};
  }
  return tracker_.done() ? Action{} : tracker_.command(ep.perceived_pose(), ep.config().dynamics);
}

// --- frontier -------------------------------------------------------------------

void FrontierController::reset(const Episode& ep) {
  reset_charge();
  frontier_.reset();
  finished_ = false;
  blacklist_.assign(ep.belief().covered().size(), 0);
  tracker_.clear();
}

bool FrontierController::plan(const Episode& ep) {
  const BeliefState& b = ep.belief();
  OpCounter ops;
  const double r = ep.config().dynamics.agent_radius;
  const MaskGrid passable = passable_component(b.obstacles(), r, b.resolution(), b.cell_at(ep.perceived_pose().position()));
  MaskGrid frontier = frontier_cells(b);
  for (std::size_t i = 0; i < frontier.size(); ++i) frontier.raw()[i] &= !blacklist_[i];
  ops.add(static_cast<std::int64_t>(frontier.size()));
  const double reach = std::max(1.0, cfg_.frontier_reach * cover_radius_cells(ep));
  const Cell from = robot_cell(passable, b, ep.perceived_pose());
  const auto goal = nearest_frontier(passable, frontier, from, reach, &ops);
  bool ok = false;
  if (goal) {
    if (const auto path = astar(passable, from, goal->goal, &ops)) {
      const WorldMap believed(b.obstacles(), b.resolution(), b.origin());
      tracker_.set_path(shortcut(believed, path->cells, r, &ops), b.cell_center(goal->frontier));
      frontier_ = goal->frontier;
      ok = true;
    }
  }
  charge(ops, ep.config().dt());
  return ok;
}

Action FrontierController::act(const Episode& ep) {
  if (busy()) return {};
  if (finished_) return {};
  const BeliefState& b = ep.belief();
  if (frontier_ && b.covered()[*frontier_]) {
    frontier_.reset();
    tracker_.clear();
  }
  tracker_.skip_reached(ep.perceived_pose());
  if (tracker_.done()) {
    if (frontier_) {
      // arrived and facing it, still not covered: give up on that spot
      for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx) {
          const Cell c{frontier_->x + dx, frontier_->y + dy};
          if (b.covered().in_bounds(c)) blacklist_[b.covered().index(c.x, c.y)] = 1;
        }
      frontier_.reset();
    }
    if (!plan(ep)) {
      finished_ = true;
      return {};
    }
    if (busy()) return {};
  }
  return tracker_.command(ep.perceived_pose(), ep.config().dynamics);
}

// --- simple ---------------------------------------------------------------------

Action RandomController::act(const Episode&) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double v = u(rng_);
  return Action(v, u(rng_));
}

std::vector<std::string> controller_names() { return {"bsa", "tsp-offline", "tsp-online", "frontier", "random", "idle"}; }

std::unique_ptr<Controller> make_controller(std::string_view name, std::uint64_t seed, const PlannerConfig& cfg) {
  if (name == "bsa") return std::make_unique<BsaController>(cfg);
  if (name == "tsp-offline") return std::make_unique<TspOfflineController>(cfg);
  if (name == "tsp-online") return std::make_unique<TspOnlineController>(cfg);
  if (name == "frontier") return std::make_unique<FrontierController>(cfg);
  if (name == "random") return std::make_unique<RandomController>(seed);
  if (name == "idle") return std::make_unique<IdleController>();
  return nullptr;
}

}  // namespace covpath
