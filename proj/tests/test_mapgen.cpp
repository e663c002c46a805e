#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "covpath/mapgen.hpp"
#include "oracles.hpp"

using namespace covpath;

TEST_CASE("no interior walls when walls are never placed") {
  MapGenParams p;
  p.p_wall = 0.0;
  std::mt19937_64 rng(1);
  MaskGrid g(160, 160, 0);
  const FloorPlan plan = generate_floorplan(rng, p, 6.0, g);
  for (bool b : plan.vertical_placed) CHECK_FALSE(b);
  for (bool b : plan.horizontal_placed) CHECK_FALSE(b);
  for (int y = 1; y < 159; ++y)
    for (int x = 1; x < 159; ++x) CHECK(g(x, y) == 0);
}

TEST_CASE("floor plans keep rooms connected, doors in range") {
  const MapGenParams p;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    const double side = 2.4 + 5.1 * (seed % 10) / 9.0;
    const int n = static_cast<int>(std::ceil(side / p.resolution));
    MaskGrid g(n, n, 0);
    const FloorPlan plan = generate_floorplan(rng, p, side, g);
    CHECK(plan.rooms_connected());
    CHECK(plan.door_width >= 0.6);
    CHECK(plan.door_width <= 1.2);
    CHECK(plan.room_side >= 1.5);
    CHECK(plan.room_side <= 4.8);
  }
}

TEST_CASE("obstacle density: about one attempt per 4 m^2") {
  MapGenParams p;
  double attempts = 0;
  const int n = 4000;
  for (int seed = 0; seed < n; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    MaskGrid g(54, 54, 0);
    int a = 0;
    scatter_obstacles(rng, p, 2.0, g, &a);
    attempts += a;
  }
  CHECK(attempts / n == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("generated maps: connected, clear, in range, deterministic") {
  for (Task t : {Task::Mowing, Task::Exploration}) {
    const MapGenParams p = MapGenParams::for_task(t);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const GeneratedMap g = generate_map(seed, p);
      CHECK(g.side >= p.side_min);
      CHECK(g.side <= p.side_max);
      CHECK(oracle::components(oracle::traversable(g.map.obstacles(), p.agent_radius, p.resolution)) == 1);
      for (std::size_t i = 0; i < g.obstacles.size(); ++i)
        for (std::size_t j = i + 1; j < g.obstacles.size(); ++j) {
          const Disc& a = g.obstacles[i];
          const Disc& b = g.obstacles[j];
          CHECK(distance(a.center, b.center) - a.radius - b.radius >= 0.6 - 1e-9);
        }
      CHECK(generate_map(seed, p).map == g.map);
    }
  }
}

TEST_CASE("curriculum") {
  const auto levels = curriculum_levels(Task::Mowing);
  CHECK(levels[0].tiers == std::vector<int>{0});
  CHECK(levels[0].goal_coverage == 0.90);
  CHECK(levels.back().goal_coverage == 0.99);
  CHECK(levels[3].tiers == std::vector<int>{0, 1, 2});
  CHECK(levels[3].goal_coverage == 0.95);
  CHECK_FALSE(levels[6].random_maps);
  CHECK(levels[7].random_maps);
  const auto explore = curriculum_levels(Task::Exploration);
  CHECK(explore[0].tiers == std::vector<int>{1, 2});
  CHECK(explore[3].goal_coverage == 0.97);
  CHECK(explore[6].random_maps);
  CHECK(explore[7].tiers == std::vector<int>{1, 2, 3, 4, 5});

  const std::vector<FixedMapEntry> catalog{{"a", 0}, {"b", 0}, {"c", 1}};
  CurriculumProgress prog;
  CHECK(curriculum_next(prog, Task::Mowing, catalog).level == 1);
  prog.completed_fixed = {"a"};
  CHECK(curriculum_next(prog, Task::Mowing, catalog).level == 1);
  prog.completed_fixed = {"a", "b"};
  CHECK(curriculum_next(prog, Task::Mowing, catalog).level == 2);
  CHECK(prog.completed_fixed.empty());
}

TEST_CASE("fixed vs random map draws on random-map levels") {
  std::mt19937_64 rng(3);
  LevelSpec lv;
  lv.random_maps = true;
  int random = 0;
  for (int i = 0; i < 10000; ++i) random += choose_map_source(rng, lv) == MapSource::Random;
  CHECK(std::abs(random / 10000.0 - 0.5) <= 0.02);
  lv.random_maps = false;
  CHECK(choose_map_source(rng, lv) == MapSource::Fixed);
}

TEST_CASE("catalog file") {
  const auto path = std::filesystem::temp_directory_path() / "covpath_tiers_test.json";
  std::ofstream(path) << R"({"maps":[{"id":"t0_0","file":"t0_0.map","tier":0},{"id":"t2_1","file":"t2_1.map","tier":2}]})";
  const auto c = load_catalog(path);
  REQUIRE(c.size() == 2);
  CHECK(c[1].id == "t2_1");
  CHECK(c[1].tier == 2);
  std::filesystem::remove(path);
}

TEST_CASE("shipped catalogs load and keep their tiers") {
  for (const char* task : {"mowing", "exploration"}) {
    const std::filesystem::path dir = std::filesystem::path(COVPATH_MAPS_DIR) / task;
    const auto c = load_catalog(dir / "tiers.json");
    CHECK(c.size() >= 8);
    for (const FixedMapEntry& e : c) {
      const WorldMap m = load_map_file(dir / (e.id + ".map"));
      CHECK(m.resolution() == kDefaultResolution);
      CHECK(e.id.substr(0, 2) == "t" + std::to_string(e.tier));
    }
  }
}
