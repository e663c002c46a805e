#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "covpath/bench.hpp"
#include "covpath/errors.hpp"

using namespace covpath;

namespace {

StepRecord rec(double t, double coverage, Pose p = {}) {
  StepRecord r;
  r.t = t;
  r.coverage = coverage;
  r.pose = p;
  return r;
}

std::vector<MapEntry> small_maps(int n) {
  std::vector<MapEntry> out;
  const MapGenParams p = MapGenParams::for_task(Task::Mowing);
  for (int i = 0; i < n; ++i)
    out.push_back({"m" + std::to_string(i), std::make_shared<const WorldMap>(generate_map(100 + i, p).map)});
  return out;
}

SuiteConfig quick_suite() {
  SuiteConfig s;
  s.episode.build_observations = false;
  s.episode.max_steps = 40;
  s.controller = "random";
  s.seeds = 2;
  return s;
}

}  // namespace

TEST_CASE("time to coverage is interpolated") {
  const std::vector<StepRecord> r{rec(0, 0.1), rec(40, 0.8), rec(60, 1.0)};
  REQUIRE(time_to_fraction(r, 0.9).has_value());
  CHECK(*time_to_fraction(r, 0.9) == doctest::Approx(50.0));
  CHECK(*time_to_fraction(r, 0.05) == 0.0);
  const std::vector<StepRecord> still{rec(0, 0.1), rec(1, 0.1), rec(2, 0.1)};
  CHECK_FALSE(time_to_fraction(still, 0.9).has_value());
  const CoverageMetrics m = compute_metrics(still);
  CHECK_FALSE(m.t90.has_value());
  CHECK(m.path_length == 0.0);
  CHECK_FALSE(m.reached_goal);
}

TEST_CASE("path length and rotations of a spiral") {
  // r = b * phi for phi in [0, 6 pi]
  const double b = 0.1, end = 6 * kPi;
  std::vector<StepRecord> r;
  const int n = 20000;
  for (int k = 0; k <= n; ++k) {
    const double phi = end * k / n;
    r.push_back(rec(k * 0.5, 0.0, Pose(b * phi * std::cos(phi), b * phi * std::sin(phi), phi)));
  }
  const auto exact = [&](double p) { return b / 2 * (p * std::sqrt(1 + p * p) + std::asinh(p)); };
  const CoverageMetrics m = compute_metrics(r);
  CHECK(m.path_length == doctest::Approx(exact(end)).epsilon(0.005));
  CHECK(m.full_rotations == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("collision rates") {
  std::vector<StepRecord> r{rec(0, 0, Pose(0, 0, 0)), rec(30, 0, Pose(1, 0, 0)), rec(60, 0, Pose(2, 0, 0))};
  r[1].collided = r[2].collided = true;
  const CoverageMetrics m = compute_metrics(r);
  CHECK(m.collisions == 2);
  CHECK(m.collisions_per_minute == doctest::Approx(2.0));
  CHECK(m.collisions_per_meter == doctest::Approx(1.0));
}

TEST_CASE("trace CSV round trip") {
  std::vector<StepRecord> r{rec(0, 0.01, Pose(1, 2, 0.3)), rec(0.5, 0.02, Pose(1.1, 2, 0.35))};
  r[1].action = Action(0.7, -0.25);
  r[1].collided = true;
  r[1].reward.total = -10.1;
  std::stringstream s;
  write_trace_csv(s, r);
  const auto back = read_trace_csv(s);
  REQUIRE(back.size() == 2);
  CHECK(back[1].pose == r[1].pose);
  CHECK(back[1].action == r[1].action);
  CHECK(back[1].collided);
  CHECK(back[1].reward.total == -10.1);
  CHECK(back[0].coverage == 0.01);
  std::stringstream bad("t,x\n1,2\n");
  CHECK_THROWS_AS(read_trace_csv(bad), ParseError);
}

TEST_CASE("summary statistics") {
  const std::vector<double> v{1.0, 2.0, 3.0};
  const Stat s = summarize(v);
  CHECK(s.mean == 2.0);
  CHECK(s.std == doctest::Approx(1.0));
  CHECK(summarize(std::vector<double>{4.0}).std == 0.0);
}

TEST_CASE("one map, one seed") {
  SuiteConfig cfg = quick_suite();
  cfg.seeds = 1;
  const SuiteResult r = run_suite(small_maps(1), cfg);
  REQUIRE(r.runs.size() == 1);
  REQUIRE(r.per_map.size() == 1);
  CHECK(r.per_map[0].path_length.mean == r.runs[0].metrics.path_length);
  CHECK(r.per_map[0].path_length.std == 0.0);
  CHECK(r.total.path_length.mean == r.per_map[0].path_length.mean);
  CHECK(r.runs[0].steps == 40);
  CHECK_FALSE(r.all_reached);
}

TEST_CASE("totals are sums of per-map means; map order does not matter") {
  const SuiteConfig cfg = quick_suite();
  auto maps = small_maps(3);
  const SuiteResult a = run_suite(maps, cfg);
  double sum = 0.0;
  for (const MapAggregate& m : a.per_map) sum += m.path_length.mean;
  CHECK(a.total.path_length.mean == doctest::Approx(sum));
  CHECK(a.total.episodes == 6);
  CHECK_FALSE(a.total.t90.defined());

  std::reverse(maps.begin(), maps.end());
  const SuiteResult b = run_suite(maps, cfg);
  std::stringstream ea, eb, sa, sb;
  write_episodes_csv(ea, a);
  write_episodes_csv(eb, b);
  write_summary_csv(sa, a);
  write_summary_csv(sb, b);
  CHECK(ea.str() == eb.str());
  CHECK(sa.str() == sb.str());
}

TEST_CASE("episode seeds depend on map id and index only") {
  CHECK(episode_seed(1, "a", 0) == episode_seed(1, "a", 0));
  CHECK(episode_seed(1, "a", 0) != episode_seed(1, "a", 1));
  CHECK(episode_seed(1, "a", 0) != episode_seed(1, "b", 0));
  CHECK(episode_seed(1, "a", 0) != episode_seed(2, "a", 0));
}
