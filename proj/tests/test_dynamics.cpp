#include <doctest.h>

#include <cmath>
#include <random>

#include "covpath/dynamics.hpp"
#include "oracles.hpp"

using namespace covpath;

namespace {

WorldMap open_field() { return WorldMap(MaskGrid(400, 400, 0), kDefaultResolution); }

}  // namespace

TEST_CASE("action denormalization") {
  const DynamicsConfig c = DynamicsConfig::first_order(0.26, 1.0, 0.15);
  CHECK(denormalize(Action(0, 0), c).v == 0.0);
  CHECK(denormalize(Action(1, 0), c).v == doctest::Approx(0.26));
  const Twist t = denormalize(Action(-1, 1), c);
  CHECK(t.v == doctest::Approx(-0.26));
  CHECK(t.w == doctest::Approx(1.0));
  CHECK(Action(3.0, -2.0) == Action(1.0, -1.0));
}

TEST_CASE("wheel speeds") {
  const WheelSpeeds z = wheel_speeds(0, 0, 0.1225, 0.465);
  CHECK(z.right == 0.0);
  CHECK(z.left == 0.0);
  const WheelSpeeds s = wheel_speeds(0.26, 0, 0.1225, 0.465);
  CHECK(s.right == doctest::Approx(2.1224).epsilon(1e-4));
  CHECK(s.left == doctest::Approx(2.1224).epsilon(1e-4));
  const WheelSpeeds r = wheel_speeds(0, 1, 0.1225, 0.465);
  CHECK(r.right == doctest::Approx(1.8980).epsilon(1e-4));
  CHECK(r.left == doctest::Approx(-1.8980).epsilon(1e-4));
}

TEST_CASE("first-order straight step") {
  const WorldMap m = open_field();
  const DynamicsConfig c = DynamicsConfig::first_order(0.26, 1.0, 0.15);
  DynamicsState s = DynamicsState::at_rest(Pose(7.5, 7.5, 0.0));
  const StepOutcome o = step(s, Action(1, 0), c, m);
  CHECK(s.pose.x == doctest::Approx(7.63).epsilon(1e-12));
  CHECK(s.pose.y == doctest::Approx(7.5));
  CHECK(o.distance == doctest::Approx(0.13));
  CHECK_FALSE(o.collided);
  CHECK(o.path.size() == 51);
}

TEST_CASE("first-order pure rotation") {
  const WorldMap m = open_field();
  const DynamicsConfig c = DynamicsConfig::first_order(0.26, 1.0, 0.15);
  DynamicsState s = DynamicsState::at_rest(Pose(7.5, 7.5, 0.0));
  step(s, Action(0, 1), c, m);
  CHECK(s.pose.heading == doctest::Approx(0.5));
  CHECK(s.pose.x == 7.5);
  CHECK(s.pose.y == 7.5);
}

TEST_CASE("first-order arcs match the closed form") {
  const WorldMap m = open_field();
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int it = 0; it < 500; ++it) {
    DynamicsConfig c = DynamicsConfig::first_order(0.26, 1.0, 0.15, 0.05 + 0.95 * (u(rng) + 1) / 2);
    const Pose p0(7.5, 7.5, u(rng) * kPi);
    DynamicsState s = DynamicsState::at_rest(p0);
    const Action a(u(rng), u(rng));
    step(s, a, c, m);
    const Pose ref = oracle::unicycle(p0, a.a_v * c.v_max, a.a_w * c.w_max, c.dt);
    CHECK(distance(s.pose.position(), ref.position()) < 1e-6);
    CHECK(std::abs(wrap_angle(s.pose.heading - ref.heading)) < 1e-9);
  }
}

TEST_CASE("higher-order acceleration from rest") {
  const WorldMap m = open_field();
  DynamicsConfig c = DynamicsConfig::higher_order();
  c.action_delay = 0.0;
  DynamicsState s = DynamicsState::at_rest(Pose(7.5, 7.5, 0.0));
  step(s, Action(1, 0), c, m);
  CHECK(s.v == doctest::Approx(0.25));
}

TEST_CASE("action delay") {
  const WorldMap m = open_field();
  const DynamicsConfig c = DynamicsConfig::higher_order();
  DynamicsState s = DynamicsState::at_rest(Pose(7.5, 7.5, 0.0));
  const StepOutcome o = step(s, Action(1, 0), c, m);
  // sub-steps starting before 50 ms keep the robot in place
  for (int k = 1; k <= 5; ++k) CHECK(o.path[static_cast<std::size_t>(k)] == o.path[0]);
  CHECK(o.path[6].x > o.path[0].x);
}

TEST_CASE("collision stops translation at the contact point") {
  MaskGrid g(100, 100, 0);
  for (int y = 0; y < 100; ++y) g(60, y) = 1;  // face at x = 2.25
  const WorldMap m(g, kDefaultResolution);
  const DynamicsConfig c = DynamicsConfig::first_order(0.26, 1.0, 0.15);
  DynamicsState s = DynamicsState::at_rest(Pose(2.0, 1.8, 0.0));
  const StepOutcome o = step(s, Action(1, 0.2), c, m);
  CHECK(o.collided);
  CHECK(s.pose.x <= 2.1 + 1e-9);
  CHECK(s.pose.x > 2.09);
  CHECK_FALSE(collides(m, s.pose.position(), 0.15));
  CHECK(s.pose.heading == doctest::Approx(0.1));  // rotation continues
  CHECK(o.distance < 0.13);
}
