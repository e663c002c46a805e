#include <doctest.h>

#include <cmath>

#include "covpath/reward.hpp"
#include "oracles.hpp"

using namespace covpath;

namespace {

MaskGrid square(int n, int side) {
  MaskGrid g(n, n, 0);
  const int o = (n - side) / 2;
  for (int y = o; y < o + side; ++y)
    for (int x = o; x < o + side; ++x) g(x, y) = 1;
  return g;
}

MaskGrid disc(int n, double r) {
  MaskGrid g(n, n, 0);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      if (std::hypot(x + 0.5 - n / 2.0, y + 0.5 - n / 2.0) <= r) g(x, y) = 1;
  return g;
}

}  // namespace

TEST_CASE("area reward normalization") {
  CHECK(area_reward(0.0, 0.15, 0.26, 0.5, 1.0) == 0.0);
  CHECK(area_reward(0.039, 0.15, 0.26, 0.5, 1.0) == doctest::Approx(1.0));
  CHECK(area_reward(0.0195, 0.15, 0.26, 0.5, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("global TV reward") {
  CHECK(tv_global(3.0, 2.0, 0.01, 0.0) == 0.0);
  CHECK(tv_global(3.0, 4.0, 0.01, 1.0) == doctest::Approx(-1.5));
  // a compact patch has less boundary than a strip of the same area
  const MaskGrid sq = square(200, 40);
  MaskGrid strip(200, 200, 0);
  for (int y = 95; y < 103; ++y)
    for (int x = 0; x < 200; ++x) strip(x, y) = 1;
  CHECK(count_set(strip) == count_set(sq));
  CHECK(total_variation(sq) < total_variation(strip));
  CHECK(total_variation(disc(200, 40.0)) == doctest::Approx(oracle::total_variation(disc(200, 40.0))));
  // scaling a square 2x doubles V and sqrt(A): the reward stays put
  const double res = 0.0375;
  const MaskGrid a = square(200, 30), b = square(200, 60);
  const double ra = tv_global(total_variation(a) * res, count_set(a) * res * res, res * res, 1.0);
  const double rb = tv_global(total_variation(b) * res, count_set(b) * res * res, res * res, 1.0);
  CHECK(ra == doctest::Approx(rb).epsilon(0.05));
}

TEST_CASE("incremental TV reward") {
  CHECK(tv_incremental(1.0, 1.0, 0.26, 0.5, 1.0) == 0.0);
  CHECK(tv_incremental(2 * 0.26 * 0.5, 0.0, 0.26, 0.5, 1.0) == doctest::Approx(-1.0));
  MaskGrid g = square(20, 10);
  g(10, 10) = 0;
  const double before = total_variation(g);
  g(10, 10) = 1;
  CHECK(tv_incremental(total_variation(g), before, 0.26, 0.5, 1.0) > 0.0);
  CHECK(total_variation(g) == doctest::Approx(oracle::total_variation(g)));
}

TEST_CASE("step reward terms") {
  StepRewardInputs in;
  const RewardConfig cfg = RewardConfig::mowing();
  CHECK(step_reward(in, cfg).total == doctest::Approx(-0.1));
  in.collided = true;
  CHECK(step_reward(in, cfg).total == doctest::Approx(-10.1));
  in.collided = false;
  in.new_area = 2 * 0.15 * 0.26 * 0.5;
  CHECK(step_reward(in, cfg).total == doctest::Approx(0.9));
  CHECK(RewardConfig::exploration().lambda_tv_incremental == 0.2);
}

TEST_CASE("termination") {
  const RewardConfig cfg;
  CHECK(check_termination(0.99, cfg, 0) == EpisodeStatus::GoalReached);
  CHECK(check_termination(0.5, cfg, 1000) == EpisodeStatus::Truncated);
  CHECK(check_termination(0.5, cfg, 999) == EpisodeStatus::Running);
}
