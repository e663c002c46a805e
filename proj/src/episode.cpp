#include "covpath/episode.hpp"

#include <cmath>

#include "covpath/errors.hpp"
#include "covpath/kernels.hpp"

namespace covpath {

namespace {

EpisodeConfig base(std::string name, Task task, double agent_radius, double v_max) {
  EpisodeConfig c;
  c.preset = std::move(name);
  c.task = task;
  c.mapgen = MapGenParams::for_task(task);
  c.mapgen.agent_radius = agent_radius;
  c.dynamics = DynamicsConfig::first_order(v_max, 1.0, agent_radius, 0.5);
  c.reward = task == Task::Mowing ? RewardConfig::mowing() : RewardConfig::exploration();
  c.max_steps = 10 * c.reward.truncation_steps;
  return c;
}

}  // namespace

EpisodeConfig EpisodeConfig::omni_exploration() {
  EpisodeConfig c = base("omni-exploration", Task::Exploration, 0.08, 0.5);
  c.lidar = LidarConfig::omni_exploration();
  c.coverage = CoverageConfig::exploration(7.0, kTwoPi);
  return c;
}

EpisodeConfig EpisodeConfig::non_omni_exploration() {
  EpisodeConfig c = base("non-omni-exploration", Task::Exploration, 0.15, 0.26);
  c.lidar = LidarConfig::non_omni_exploration();
  c.coverage = CoverageConfig::exploration(3.5, kPi);
  return c;
}

EpisodeConfig EpisodeConfig::mowing() {
  EpisodeConfig c = base("mowing", Task::Mowing, 0.15, 0.26);
  c.lidar = LidarConfig::mowing();
  c.coverage = CoverageConfig::mowing(0.15);
  return c;
}

EpisodeConfig EpisodeConfig::real_mowing() {
  EpisodeConfig c = mowing();
  c.preset = "real-mowing";
  c.lidar = LidarConfig::real_mowing();
  c.dynamics = DynamicsConfig::higher_order(0.26, 1.0, 0.15, 0.5);
  c.history_length = 10;
  return c;
}

std::optional<EpisodeConfig> EpisodeConfig::from_preset(std::string_view name) {
  if (name == "omni-exploration") return omni_exploration();
  if (name == "non-omni-exploration" || name == "exploration") return non_omni_exploration();
  if (name == "mowing") return mowing();
  if (name == "real-mowing") return real_mowing();
  return std::nullopt;
}

Pose random_start(const WorldMap& map, double agent_radius, std::mt19937_64& rng) {
  const MaskGrid pass = traversable_mask(map, agent_radius);
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < pass.size(); ++i)
    if (pass.raw()[i]) cells.push_back(i);
  if (cells.empty()) throw GeometryError("map has no traversable cell for the agent");
  const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, cells.size() - 1)(rng);
  const double heading = std::uniform_real_distribution<double>(-kPi, kPi)(rng);
  const Vec2 c = map.cell_center(pass.cell_of(cells[pick]));
  return {c.x, c.y, heading};
}

Episode::Episode(EpisodeConfig cfg) : cfg_(std::move(cfg)), history_(cfg_.history_length) {
  cfg_.lidar.validate();
  if (cfg_.build_observations) cfg_.observation.validate();
  world_ = cfg_.map;
}

double Episode::coverage_fraction() const {
  if (domain_.cells == 0) return 0.0;
  return double(covered_in_domain_) / double(domain_.cells);
}

void Episode::sense() {
  const LidarScan scan = cast_rays(*world_, dyn_.pose, cfg_.lidar);
  if (cfg_.noise.any()) {
    perceived_ = perturb(dyn_.pose, scan, cfg_.noise, rng_);
  } else {
    perceived_ = {dyn_.pose, scan};
  }
  integrate_scan(belief_, perceived_.pose, perceived_.scan, cfg_.lidar);
}

void Episode::observe() {
  if (!cfg_.build_observations) return;
  obs_ = build_observation(belief_, perceived_.pose, perceived_.scan, cfg_.observation, history_);
}

namespace {

std::size_t count_covered_in(const MaskGrid& covered, const MaskGrid& domain) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < covered.size(); ++i) n += covered.raw()[i] && domain.raw()[i];
  return n;
}

// Poses along a dynamics step at which coverage is evaluated. Mowing uses
// every sub-step; sensing coverage is sampled whenever the pose moved 0.1 m
// or turned 0.25 rad, plus the final pose.
std::vector<Pose> coverage_sweep(const std::vector<Pose>& path, const CoverageConfig& cov) {
  if (path.size() <= 1) return path;
  if (!cov.line_of_sight) return {path.begin() + 1, path.end()};
  std::vector<Pose> out;
  Pose last = path.front();
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Pose& p = path[i];
    const bool final = i + 1 == path.size();
    const bool moved = distance(p.position(), last.position()) >= 0.1;
    if (final || moved || std::abs(wrap_angle(p.heading - last.heading)) >= 0.25) {
      out.push_back(p);
      last = p;
    }
  }
  return out;
}

}  // namespace

StepRecord Episode::reset(std::uint64_t seed) {
  seed_ = seed;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(cfg_.noise.seed), static_cast<std::uint32_t>(cfg_.noise.seed >> 32)};
  rng_.seed(seq);
  if (!world_) world_ = std::make_shared<const WorldMap>(generate_map(cfg_.map_seed, cfg_.mapgen).map);

  const double r = cfg_.dynamics.agent_radius;
  const Pose start = cfg_.start ? *cfg_.start : random_start(*world_, r, rng_);
  free_ = reachable_free_space(*world_, start, r);
  domain_ = coverage_domain(*world_, free_, cfg_.coverage.radius);

  belief_ = BeliefState::like(*world_);
  history_ = ActionHistory(cfg_.history_length);
  dyn_ = DynamicsState::at_rest(start);
  steps_ = 0;
  status_ = EpisodeStatus::Running;
  done_ = false;

  const Pose footprint[1] = {start};
  const double area = update_coverage(belief_, footprint, cfg_.coverage, *world_);
  covered_in_domain_ = count_covered_in(belief_.covered(), domain_.mask);
  tv_prev_ = kernels::total_variation(belief_.covered()) * world_->resolution();
  sense();
  observe();

  StepRecord rec;
  rec.pose = start;
  rec.new_area = area;
  rec.coverage = coverage_fraction();
  return rec;
}

StepResult Episode::step(const Action& a) {
  if (done_) throw SteppingFinishedEpisode();
  history_.push(a);
  const StepOutcome moved = covpath::step(dyn_, a, cfg_.dynamics, *world_);

  const std::vector<Pose> sweep = coverage_sweep(moved.path, cfg_.coverage);
  const double area = update_coverage(belief_, sweep, cfg_.coverage, *world_);
  covered_in_domain_ = count_covered_in(belief_.covered(), domain_.mask);
  sense();

  const double res = world_->resolution();
  const double tv_now = kernels::total_variation(belief_.covered()) * res;
  StepRewardInputs in;
  in.new_area = area;
  in.tv_now = tv_now;
  in.tv_prev = tv_prev_;
  in.covered_area = belief_.covered_area();
  in.cell_area = world_->cell_area();
  in.collided = moved.collided;
  in.agent_radius = cfg_.dynamics.agent_radius;
  in.v_max = cfg_.dynamics.v_max;
  in.dt = cfg_.dynamics.dt;
  StepResult out;
  out.reward = step_reward(in, cfg_.reward);
  tv_prev_ = tv_now;
  ++steps_;

  status_ = check_termination(coverage_fraction(), cfg_.reward, belief_.steps_since_new_coverage());
  if (status_ == EpisodeStatus::Running && steps_ >= cfg_.max_steps) status_ = EpisodeStatus::Truncated;
  done_ = status_ != EpisodeStatus::Running;
  observe();

  out.status = status_;
  out.done = done_;
  StepRecord& rec = out.record;
  rec.step = steps_;
  rec.t = time();
  rec.pose = dyn_.pose;
  rec.action = a;
  rec.new_area = area;
  rec.reward = out.reward;
  rec.collided = moved.collided;
  rec.coverage = coverage_fraction();
  rec.distance = moved.distance;
  return out;
}

EnvBinding::EnvBinding(EpisodeConfig cfg)
    : ep_([&] {
        cfg.build_observations = true;
        return std::move(cfg);
      }()) {}

std::string EnvBinding::reset(std::uint64_t seed) {
  ep_.reset(seed);
  return ep_.observation().dump();
}

EnvBinding::Output EnvBinding::step(double a_v, double a_w) {
  const StepResult r = ep_.step(Action(a_v, a_w));
  Output out;
  out.observation = ep_.observation().dump();
  out.reward = r.reward.total;
  out.terminated = r.status == EpisodeStatus::GoalReached;
  out.truncated = r.status == EpisodeStatus::Truncated;
  return out;
}

std::size_t EnvBinding::observation_bytes() const {
  const auto& c = ep_.config();
  const std::size_t floats = 3u * c.observation.scales * c.observation.grid * c.observation.grid +
                             static_cast<std::size_t>(c.lidar.n_rays) + 2u * c.history_length;
  return 5 * 4 + floats * 4;
}

}  // namespace covpath
