#include "covpath/reward.hpp"

#include <cmath>

#include "covpath/kernels.hpp"

namespace covpath {

double area_reward(double new_area, double agent_radius, double v_max, double dt, double lambda_area) {
  return lambda_area * new_area / (2.0 * agent_radius * v_max * dt);
}

double total_variation(const MaskGrid& x) { return kernels::total_variation(x); }
double total_variation(const Grid<float>& x) { return kernels::total_variation(x); }

double tv_global(double tv_metres, double covered_area, double cell_area, double lambda) {
  if (lambda == 0.0 || covered_area < cell_area * (1.0 - 1e-9)) return 0.0;
  return -lambda * tv_metres / std::sqrt(covered_area);
}

double tv_incremental(double tv_now, double tv_prev, double v_max, double dt, double lambda) {
  return -lambda * (tv_now - tv_prev) / (2.0 * v_max * dt);
}

RewardBreakdown step_reward(const StepRewardInputs& in, const RewardConfig& cfg) {
  RewardBreakdown r;
  r.area = area_reward(in.new_area, in.agent_radius, in.v_max, in.dt, cfg.lambda_area);
  r.tv_global = tv_global(in.tv_now, in.covered_area, in.cell_area, cfg.lambda_tv_global);
  r.tv_incremental = tv_incremental(in.tv_now, in.tv_prev, in.v_max, in.dt, cfg.lambda_tv_incremental);
  r.collision = in.collided ? cfg.collision : 0.0;
  r.constant = cfg.constant;
  r.total = r.area + r.tv_global + r.tv_incremental + r.collision + r.constant;
  return r;
}

const char* to_string(EpisodeStatus s) {
  switch (s) {
    case EpisodeStatus::Running: return "running";
    case EpisodeStatus::GoalReached: return "goal_reached";
    case EpisodeStatus::Truncated: return "truncated";
  }
  return "?";
}

EpisodeStatus check_termination(double coverage_fraction, const RewardConfig& cfg, int steps_since_new_coverage) {
  if (coverage_fraction >= cfg.goal_coverage) return EpisodeStatus::GoalReached;
  if (steps_since_new_coverage >= cfg.truncation_steps) return EpisodeStatus::Truncated;
  return EpisodeStatus::Running;
}

}  // namespace covpath
