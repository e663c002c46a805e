#pragma once

#include "covpath/grid.hpp"

namespace covpath {

struct RewardConfig {
  double lambda_area = 1.0;
  double lambda_tv_global = 0.0;
  double lambda_tv_incremental = 1.0;  // 1 for mowing, 0.2 for exploration
  double collision = -10.0;
  double constant = -0.1;
  int truncation_steps = 1000;         // tau
  double goal_coverage = 0.99;

  static RewardConfig mowing() { return {}; }
  static RewardConfig exploration() {
    RewardConfig c;
    c.lambda_tv_incremental = 0.2;
    return c;
  }
};

struct RewardBreakdown {
  double area = 0.0;
  double tv_global = 0.0;
  double tv_incremental = 0.0;
  double collision = 0.0;
  double constant = 0.0;
  double total = 0.0;
};

// lambda_area * A_new / (2 r v_max dt)
double area_reward(double new_area, double agent_radius, double v_max, double dt, double lambda_area);

// Isotropic TV in cell units; forward differences only where both forward
// neighbours exist, so constant grids give exactly 0.
double total_variation(const MaskGrid& x);
double total_variation(const Grid<float>& x);

// -lambda * V / sqrt(A_covered), V in metres; 0 below one covered cell.
double tv_global(double tv_metres, double covered_area, double cell_area, double lambda);

// -lambda * (V_t - V_prev) / (2 v_max dt), V in metres.
double tv_incremental(double tv_now, double tv_prev, double v_max, double dt, double lambda);

struct StepRewardInputs {
  double new_area = 0.0;      // m^2
  double tv_now = 0.0;        // metres
  double tv_prev = 0.0;       // metres
  double covered_area = 0.0;  // m^2
  double cell_area = 0.0;     // m^2
  bool collided = false;
  double agent_radius = 0.15;
  double v_max = 0.26;
  double dt = 0.5;
};

RewardBreakdown step_reward(const StepRewardInputs& in, const RewardConfig& cfg);

enum class EpisodeStatus { Running, GoalReached, Truncated };

const char* to_string(EpisodeStatus s);

EpisodeStatus check_termination(double coverage_fraction, const RewardConfig& cfg, int steps_since_new_coverage);

}  // namespace covpath
