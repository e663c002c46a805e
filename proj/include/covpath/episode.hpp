#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "covpath/action.hpp"
#include "covpath/belief.hpp"
#include "covpath/dynamics.hpp"
#include "covpath/lidar.hpp"
#include "covpath/mapgen.hpp"
#include "covpath/obsbuilder.hpp"
#include "covpath/reward.hpp"
#include "covpath/task.hpp"
#include "covpath/worldmodel.hpp"

namespace covpath {

struct EpisodeConfig {
  std::string preset = "mowing";
  Task task = Task::Mowing;
  // Map source: a fixed map when set, otherwise generated from map_seed.
  std::shared_ptr<const WorldMap> map;
  std::uint64_t map_seed = 0;
  MapGenParams mapgen = MapGenParams::for_task(Task::Mowing);

  LidarConfig lidar = LidarConfig::mowing();
  DynamicsConfig dynamics;
  RewardConfig reward = RewardConfig::mowing();
  NoiseConfig noise;
  MultiScaleConfig observation;
  CoverageConfig coverage = CoverageConfig::mowing(0.15);
  int history_length = 0;
  int max_steps = 10000;
  bool build_observations = true;
  std::optional<Pose> start;  // overrides the random start pose

  double dt() const { return dynamics.dt; }

  static EpisodeConfig omni_exploration();
  static EpisodeConfig non_omni_exploration();
  static EpisodeConfig mowing();
  static EpisodeConfig real_mowing();
  static std::optional<EpisodeConfig> from_preset(std::string_view name);
};

struct StepRecord {
  int step = 0;
  double t = 0.0;      // s
  Pose pose;           // true pose after the step
  Action action;
  double new_area = 0.0;  // m^2
  RewardBreakdown reward;
  bool collided = false;
  double coverage = 0.0;  // fraction of the coverage domain
  double distance = 0.0;  // m travelled during the step (not in trace files)
};

struct StepResult {
  RewardBreakdown reward;
  EpisodeStatus status = EpisodeStatus::Running;
  bool done = false;
  StepRecord record;
};

class Episode {
 public:
  explicit Episode(EpisodeConfig cfg);

  // Instantiates the world, places the agent, integrates the first scan.
  // Returns the t = 0 record (initial footprint coverage, no reward).
  StepRecord reset(std::uint64_t seed);
  // One decision step. Throws SteppingFinishedEpisode once done.
  StepResult step(const Action& a);

  const EpisodeConfig& config() const { return cfg_; }
  const WorldMap& world() const { return *world_; }
  std::shared_ptr<const WorldMap> world_ptr() const { return world_; }
  const BeliefState& belief() const { return belief_; }
  const DynamicsState& dynamics() const { return dyn_; }
  const Pose& true_pose() const { return dyn_.pose; }
  const Pose& perceived_pose() const { return perceived_.pose; }
  const LidarScan& scan() const { return perceived_.scan; }
  const FreeSpaceIndex& free_space() const { return free_; }
  const CoverageDomain& domain() const { return domain_; }
  const ActionHistory& history() const { return history_; }
  // Valid after reset/step when build_observations is set.
  const MultiScaleObservation& observation() const { return obs_; }

  int steps() const { return steps_; }
  double time() const { return steps_ * cfg_.dt(); }
  double coverage_fraction() const;
  double tv_metres() const { return tv_prev_; }
  EpisodeStatus status() const { return status_; }
  bool done() const { return done_; }
  std::uint64_t seed() const { return seed_; }

 private:
  void sense();
  void observe();

  EpisodeConfig cfg_;
  std::shared_ptr<const WorldMap> world_;
  FreeSpaceIndex free_;
  CoverageDomain domain_;
  BeliefState belief_;
  DynamicsState dyn_;
  Perceived perceived_;
  ActionHistory history_;
  MultiScaleObservation obs_;
  std::mt19937_64 rng_;
  std::uint64_t seed_ = 0;
  std::size_t covered_in_domain_ = 0;
  double tv_prev_ = 0.0;
  int steps_ = 0;
  EpisodeStatus status_ = EpisodeStatus::Running;
  bool done_ = true;
};

// Uniform traversable cell centre with a uniform heading.
Pose random_start(const WorldMap& map, double agent_radius, std::mt19937_64& rng);

// Binding surface for an external trainer: flat float observation buffers in
// the observation dump layout.
class EnvBinding {
 public:
  explicit EnvBinding(EpisodeConfig cfg);

  struct Output {
    std::string observation;  // dump bytes
    double reward = 0.0;
    bool terminated = false;  // goal reached
    bool truncated = false;   // no progress for tau steps or step cap
  };

  std::string reset(std::uint64_t seed);
  Output step(double a_v, double a_w);
  std::size_t observation_bytes() const;
  const Episode& episode() const { return ep_; }

 private:
  Episode ep_;
};

}  // namespace covpath
