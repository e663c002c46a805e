#include <doctest.h>

#include <cmath>
#include <random>

#include "covpath/belief.hpp"
#include "covpath/lidar.hpp"
#include "oracles.hpp"

using namespace covpath;

namespace {

WorldMap box(int w, int h) { return WorldMap(MaskGrid(w, h, 0), kDefaultResolution); }

}  // namespace

TEST_CASE("a single ray marks free cells and the hit cell") {
  MaskGrid g(100, 60, 0);
  for (int y = 0; y < 60; ++y) g(60, y) = 1;
  const WorldMap m(g, kDefaultResolution);
  const LidarConfig cfg{1, kPi, 3.5};
  const Pose p(60 * kDefaultResolution - 1.0, 1.0, 0.0);
  BeliefState b = BeliefState::like(m);
  integrate_scan(b, p, cast_rays(m, p, cfg), cfg);
  const Cell start = b.cell_at(p.position());
  CHECK(b.knowledge(60, start.y) == Knowledge::Obstacle);
  for (int x = start.x; x < 60; ++x) CHECK(b.knowledge(x, start.y) == Knowledge::Free);
  CHECK(b.knowledge(61, start.y) == Knowledge::Unknown);
}

TEST_CASE("integrating the same scan twice changes nothing") {
  std::mt19937_64 rng(31);
  const WorldMap m(oracle::blobs(rng, 90, 90, 4, 0.0), kDefaultResolution);
  const LidarConfig cfg{24, kTwoPi, 3.5};
  Pose p(1.7, 1.7, 0.4);
  if (m.is_obstacle(m.cell_at(p.position()))) p = Pose(0.1, 0.1, 0.0);
  BeliefState once = BeliefState::like(m);
  const LidarScan s = cast_rays(m, p, cfg);
  integrate_scan(once, p, s, cfg);
  BeliefState twice = once;
  integrate_scan(twice, p, s, cfg);
  CHECK(once == twice);
}

TEST_CASE("dense full scan of a small room knows the interior") {
  const WorldMap m = box(30, 30);
  const LidarConfig cfg{720, kTwoPi, 3.5};
  const Pose p(15 * kDefaultResolution, 15 * kDefaultResolution, 0.0);
  BeliefState b = BeliefState::like(m);
  integrate_scan(b, p, cast_rays(m, p, cfg), cfg);
  for (int y = 1; y < 29; ++y)
    for (int x = 1; x < 29; ++x) CHECK(b.knowledge(x, y) == Knowledge::Free);
}

TEST_CASE("stationary second sweep adds nothing") {
  const WorldMap m = box(60, 60);
  BeliefState b = BeliefState::like(m);
  const Pose p[1] = {Pose(1.1, 1.1, 0.0)};
  const auto cfg = CoverageConfig::mowing(0.15);
  CHECK(update_coverage(b, p, cfg, m) > 0.0);
  CHECK(update_coverage(b, p, cfg, m) == 0.0);
  CHECK(b.steps_since_new_coverage() == 1);
}

TEST_CASE("disc coverage marks exactly the cells within the radius") {
  const WorldMap m = box(60, 60);
  BeliefState b = BeliefState::like(m);
  const Pose p[1] = {Pose(1.1, 1.07, 0.0)};
  update_coverage(b, p, CoverageConfig::mowing(0.15), m);
  for (int y = 0; y < 60; ++y)
    for (int x = 0; x < 60; ++x) {
      const Vec2 c = m.cell_center({x, y});
      const bool in = distance(c, p[0].position()) <= 0.15 + 1e-9 && !m.is_obstacle(x, y);
      CHECK(bool(b.covered()(x, y)) == in);
    }
}

TEST_CASE("straight sweep area is bounded by the swath") {
  const WorldMap m = box(200, 200);
  BeliefState b = BeliefState::like(m);
  const auto cfg = CoverageConfig::mowing(0.15);
  const Pose start[1] = {Pose(2.0, 3.0, 0.0)};
  update_coverage(b, start, cfg, m);
  std::vector<Pose> sweep;
  for (int k = 1; k <= 50; ++k) sweep.emplace_back(2.0 + 0.13 * k / 50.0, 3.0, 0.0);
  const double a = update_coverage(b, sweep, cfg, m);
  const double slack = 2 * (2 * 0.15 + kDefaultResolution) * kDefaultResolution;
  CHECK(a <= 2 * 0.15 * 0.13 + slack);
  CHECK(a > 0.0);
}

TEST_CASE("sensing coverage is occluded by walls") {
  MaskGrid g(160, 100, 0);
  for (int y = 0; y < 100; ++y) g(80, y) = 1;
  const WorldMap m(g, kDefaultResolution);
  BeliefState b = BeliefState::like(m);
  const Pose p[1] = {Pose(2.5, 1.8, 0.0)};
  update_coverage(b, p, CoverageConfig::exploration(3.5, kTwoPi), m);
  for (int y = 0; y < 100; ++y)
    for (int x = 81; x < 160; ++x) CHECK_FALSE(b.covered()(x, y));
  CHECK(b.covered()(70, 48));
}

TEST_CASE("limited field of view") {
  const WorldMap m = box(200, 200);
  BeliefState b = BeliefState::like(m);
  const Pose p[1] = {Pose(3.75, 3.75, 0.0)};
  update_coverage(b, p, CoverageConfig::exploration(2.0, kPi), m);
  CHECK(b.covered()(140, 100));
  CHECK_FALSE(b.covered()(60, 100));
}

TEST_CASE("frontier of fully covered space is empty") {
  const WorldMap m = box(40, 40);
  BeliefState b = BeliefState::like(m);
  for (int y = 1; y < 39; ++y)
    for (int x = 1; x < 39; ++x) b.mark_covered({x, y});
  for (int i = 0; i < 40; ++i) {
    b.mark_obstacle({i, 0});
    b.mark_obstacle({i, 39});
    b.mark_obstacle({0, i});
    b.mark_obstacle({39, i});
  }
  CHECK(count_set(frontier_cells(b)) == 0);
}

TEST_CASE("covered half plane gives a one-cell frontier line") {
  BeliefState b(30, 20, kDefaultResolution);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 12; ++x) b.mark_covered({x, y});
  const MaskGrid f = frontier_cells(b);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 30; ++x) CHECK(bool(f(x, y)) == (x == 12));
}

TEST_CASE("belief text round trip") {
  BeliefState b(5, 4, 0.05);
  b.mark_free({1, 1});
  b.mark_obstacle({2, 3});
  b.mark_covered({1, 1});
  CHECK(load_belief(save_belief(b)).covered() == b.covered());
  CHECK(save_belief(load_belief(save_belief(b))) == save_belief(b));
}
