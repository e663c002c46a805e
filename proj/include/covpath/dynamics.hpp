#pragma once

#include <deque>
#include <limits>
#include <vector>

#include "covpath/action.hpp"
#include "covpath/geometry.hpp"
#include "covpath/worldmodel.hpp"

namespace covpath {

inline constexpr double kUnlimited = std::numeric_limits<double>::infinity();

struct DynamicsConfig {
  double v_max = 0.26;          // m/s
  double w_max = 1.0;           // rad/s
  double a_lin_max = kUnlimited;  // m/s^2
  double a_ang_max = kUnlimited;  // rad/s^2
  double action_delay = 0.0;    // s
  double dt = 0.5;              // decision step, s
  double substep = 0.01;        // integration step, s
  double wheel_radius = 0.1225; // m
  double wheel_base = 0.465;    // m
  double agent_radius = 0.15;   // m

  // Instantaneous velocity changes, no delay.
  static DynamicsConfig first_order(double v_max, double w_max, double agent_radius, double dt = 0.5);
  // Acceleration limits and action delay of the physical mower platform.
  static DynamicsConfig higher_order(double v_max = 0.26, double w_max = 1.0, double agent_radius = 0.15,
                                     double dt = 0.5);

  bool is_first_order() const { return a_lin_max == kUnlimited && a_ang_max == kUnlimited && action_delay == 0.0; }
  int substeps() const;
};

struct Twist {
  double v = 0.0;
  double w = 0.0;
};

struct WheelSpeeds {
  double right = 0.0;  // rad/s
  double left = 0.0;
};

Twist denormalize(const Action& a, const DynamicsConfig& cfg);
WheelSpeeds wheel_speeds(double v, double w, double wheel_radius, double wheel_base);

// Exact constant-twist (unicycle arc) motion over `dt`.
Pose integrate_arc(const Pose& p, double v, double w, double dt);

struct PendingCommand {
  Twist command;
  double activation_time = 0.0;
};

struct DynamicsState {
  Pose pose;
  double v = 0.0;
  double w = 0.0;
  double time = 0.0;
  Twist active;                       // command currently being tracked
  std::deque<PendingCommand> pending; // issued but not yet active

  static DynamicsState at_rest(const Pose& p) {
    DynamicsState s;
    s.pose = p;
    return s;
  }
};

struct StepOutcome {
  bool collided = false;
  std::vector<Pose> path;  // start pose followed by every sub-step end pose
  double distance = 0.0;   // metres travelled
};

// Advances one decision step: queues `a` for activation after the action
// delay, integrates in sub-steps (velocities slew towards the active command
// within the acceleration limits, the pose follows exact arcs), and on contact
// bisects the sub-step to the contact point, zeroes linear velocity and keeps
// only the rotation for the rest of the sub-step.
StepOutcome step(DynamicsState& state, const Action& a, const DynamicsConfig& cfg, const WorldMap& world);

}  // namespace covpath
