#include "covpath/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace covpath {

DynamicsConfig DynamicsConfig::first_order(double v_max, double w_max, double agent_radius, double dt) {
  DynamicsConfig c;
  c.v_max = v_max;
  c.w_max = w_max;
  c.agent_radius = agent_radius;
  c.dt = dt;
  return c;
}

DynamicsConfig DynamicsConfig::higher_order(double v_max, double w_max, double agent_radius, double dt) {
  DynamicsConfig c = first_order(v_max, w_max, agent_radius, dt);
  c.a_lin_max = 0.5;
  c.a_ang_max = 2.0;
  c.action_delay = 0.05;
  return c;
}

int DynamicsConfig::substeps() const { return std::max(1, static_cast<int>(std::ceil(dt / substep - 1e-9))); }

Twist denormalize(const Action& a, const DynamicsConfig& cfg) { return {a.a_v * cfg.v_max, a.a_w * cfg.w_max}; }

WheelSpeeds wheel_speeds(double v, double w, double wheel_radius, double wheel_base) {
  const double lin = v / wheel_radius;
  const double ang = w * wheel_base / (2.0 * wheel_radius);
  return {lin + ang, lin - ang};
}

Pose integrate_arc(const Pose& p, double v, double w, double dt) {
  const double half = 0.5 * w * dt;
  // chord length v*dt*sin(h)/h along the mid-arc heading
  const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
  const double chord = v * dt * sinc;
  const double mid = p.heading + half;
  return Pose(p.x + chord * std::cos(mid), p.y + chord * std::sin(mid), p.heading + w * dt);
}

namespace {

double slew(double current, double target, double max_delta) {
  if (max_delta == kUnlimited) return target;
  return current + std::clamp(target - current, -max_delta, max_delta);
}

}  // namespace

StepOutcome step(DynamicsState& state, const Action& a, const DynamicsConfig& cfg, const WorldMap& world) {
  state.pending.push_back({denormalize(a, cfg), state.time + cfg.action_delay});

  StepOutcome out;
  out.path.reserve(static_cast<std::size_t>(cfg.substeps()) + 1);
  out.path.push_back(state.pose);
  const int n = cfg.substeps();
  const double h = cfg.dt / n;
  const double t0 = state.time;
  for (int k = 0; k < n; ++k) {
    const double tau = t0 + k * h;
    while (!state.pending.empty() && state.pending.front().activation_time <= tau + 1e-9) {
      state.active = state.pending.front().command;
      state.pending.pop_front();
    }
    state.v = std::clamp(slew(state.v, state.active.v, cfg.a_lin_max * h), -cfg.v_max, cfg.v_max);
    state.w = std::clamp(slew(state.w, state.active.w, cfg.a_ang_max * h), -cfg.w_max, cfg.w_max);

    const Pose start = state.pose;
    Pose next = integrate_arc(start, state.v, state.w, h);
    double travelled = std::abs(state.v) * h;
    if (state.v != 0.0 && collides(world, next.position(), cfg.agent_radius)) {
      out.collided = true;
      double lo = 0.0, hi = 1.0;
      if (collides(world, start.position(), cfg.agent_radius)) hi = 0.0;
      for (int it = 0; it < 40 && hi > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (collides(world, integrate_arc(start, state.v, state.w, mid * h).position(), cfg.agent_radius)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      const Pose contact = integrate_arc(start, state.v, state.w, lo * h);
      next = Pose(contact.x, contact.y, contact.heading + state.w * (1.0 - lo) * h);
      travelled = std::abs(state.v) * lo * h;
      state.v = 0.0;
    }
    out.distance += travelled;
    state.pose = next;
    out.path.push_back(next);
  }
  state.time = t0 + cfg.dt;
  return out;
}

}  // namespace covpath
