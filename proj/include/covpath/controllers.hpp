#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "covpath/action.hpp"
#include "covpath/episode.hpp"
#include "covpath/planners.hpp"

namespace covpath {

// Anything that picks actions for an episode: classical planners here, a
// learned policy behind the binding surface.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual std::string name() const = 0;
  // Called right after Episode::reset.
  virtual void reset(const Episode& ep) = 0;
  virtual Action act(const Episode& ep) = 0;
  // Planning time charged to the episode so far, s.
  virtual double charged_seconds() const { return 0.0; }
};

// Rotate-then-drive follower. Turns in place until the heading error is below
// the tolerance, then drives the arc that ends on the waypoint, saturated at
// v_max / w_max.
class WaypointTracker {
 public:
  struct Config {
    double heading_tolerance = 0.05;  // rad
    double arrive_tolerance = 0.01;   // m
    int stall_steps = 12;             // steps without progress before a waypoint is skipped
  };

  WaypointTracker() = default;
  explicit WaypointTracker(Config cfg) : cfg_(cfg) {}

  // Called once per waypoint when driving at it stalls; returns waypoints to
  // insert before it, or none to skip it.
  using StallHandler = std::function<std::vector<Vec2>(const Pose& pose, Vec2 target)>;
  void on_stall(StallHandler h) { stall_handler_ = std::move(h); }

  void set_path(std::vector<Vec2> waypoints, std::optional<Vec2> face = std::nullopt);
  void clear() { set_path({}); }
  bool done() const { return next_ >= path_.size() && !face_; }
  std::span<const Vec2> remaining() const { return std::span(path_).subspan(next_); }
  // Drops waypoints already within the arrival tolerance (and the final
  // facing once it holds), so done() is current before command() is asked.
  void skip_reached(const Pose& pose);
  Action command(const Pose& pose, const DynamicsConfig& dyn);

 private:
  void advance();

  Config cfg_;
  std::vector<Vec2> path_;
  std::size_t next_ = 0;
  std::optional<Vec2> face_;
  double best_dist_ = 0.0;
  int stalled_ = 0;
  StallHandler stall_handler_;
  std::size_t detour_end_ = 0;  // waypoints before this index came from a detour
};

struct PlannerConfig {
  double op_seconds = 1e-8;          // charged compute time per counted operation
  TspCostConfig tsp;
  WaypointTracker::Config tracker;
  double frontier_reach = 0.25;      // fraction of the coverage radius
};

// Base for planners that emit waypoints: handles compute charging (the robot
// holds still for the charged time, in whole decision steps; the fraction
// below one step carries over to the next charge) and tracking.
class PlannedController : public Controller {
 public:
  explicit PlannedController(PlannerConfig cfg) : cfg_(cfg), tracker_(cfg.tracker) {}
  double charged_seconds() const override { return charged_; }

 protected:
  void charge(const OpCounter& ops, double dt);
  bool busy() {
    if (busy_steps_ == 0) return false;
    --busy_steps_;
    return true;
  }

  PlannerConfig cfg_;
  WaypointTracker tracker_;
  double charged_ = 0.0;
  double debt_ = 0.0;  // charged seconds not yet spent holding still
  int busy_steps_ = 0;
  void reset_charge() {
    charged_ = debt_ = 0.0;
    busy_steps_ = 0;
  }
};

// Offline planners: plan once on the ground-truth map, then track.
class OfflinePathController : public PlannedController {
 public:
  using PlannedController::PlannedController;
  void reset(const Episode& ep) override;
  Action act(const Episode& ep) override;
  // Planned world-cell path (legs concatenated).
  const std::vector<Cell>& planned_cells() const { return cells_; }
  const std::vector<Cell>& targets() const { return targets_; }

 protected:
  // Ordered targets to visit from `start`.
  virtual std::vector<Cell> primary_targets(const Episode& ep, const MaskGrid& passable, Cell start,
                                            OpCounter& ops) = 0;

  std::vector<Cell> targets_;
  std::vector<Cell> cells_;
};

class BsaController : public OfflinePathController {
 public:
  using OfflinePathController::OfflinePathController;
  std::string name() const override { return "bsa"; }

 protected:
  std::vector<Cell> primary_targets(const Episode& ep, const MaskGrid& passable, Cell start, OpCounter& ops) override;
};

class TspOfflineController : public OfflinePathController {
 public:
  using OfflinePathController::OfflinePathController;
  std::string name() const override { return "tsp-offline"; }

 protected:
  std::vector<Cell> primary_targets(const Episode& ep, const MaskGrid& passable, Cell start, OpCounter& ops) override;
};

// Plans on the belief only: targets cover the known, not yet covered free
// cells; unknown cells count as free for paths. Replans when the plan runs
// out.
class TspOnlineController : public PlannedController {
 public:
  using PlannedController::PlannedController;
  std::string name() const override { return "tsp-online"; }
  void reset(const Episode& ep) override;
  Action act(const Episode& ep) override;
  int replans() const { return replans_; }

 private:
  void refresh_passable(const Episode& ep);
  void replan(const Episode& ep);
  bool start_leg(const Episode& ep);
  bool target_useful(const Episode& ep, Cell t) const;

  MaskGrid passable_;
  std::size_t obstacle_count_ = 0;
  std::vector<Cell> queue_;
  std::size_t next_ = 0;
  std::vector<std::uint8_t> blacklist_;
  int replans_ = 0;
  bool finished_ = false;
};

// Drives to the nearest frontier by path cost and faces it; replans when the
// frontier cell is covered or the path is done.
class FrontierController : public PlannedController {
 public:
  using PlannedController::PlannedController;
  std::string name() const override { return "frontier"; }
  void reset(const Episode& ep) override;
  Action act(const Episode& ep) override;

 private:
  bool plan(const Episode& ep);

  std::optional<Cell> frontier_;
  std::vector<std::uint8_t> blacklist_;
  bool finished_ = false;
};

class RandomController : public Controller {
 public:
  explicit RandomController(std::uint64_t seed) : rng_(seed) {}
  std::string name() const override { return "random"; }
  void reset(const Episode&) override {}
  Action act(const Episode&) override;

 private:
  std::mt19937_64 rng_;
};

class IdleController : public Controller {
 public:
  std::string name() const override { return "idle"; }
  void reset(const Episode&) override {}
  Action act(const Episode&) override { return {}; }
};

// "bsa", "tsp-offline", "tsp-online", "frontier", "random", "idle".
std::unique_ptr<Controller> make_controller(std::string_view name, std::uint64_t seed, const PlannerConfig& cfg = {});
std::vector<std::string> controller_names();

// Passable cells for an agent of `radius` over an obstacle mask, restricted
// to the 4-connected component of `from`.
MaskGrid passable_component(const MaskGrid& obstacles, double radius, double resolution, Cell from);

}  // namespace covpath
