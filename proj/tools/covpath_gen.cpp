// covpath-gen: procedural maps and fixed-map catalogs.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "covpath/mapgen.hpp"
#include "covpath/worldmodel.hpp"

namespace fs = std::filesystem;
using namespace covpath;

namespace {

nlohmann::json describe(const GeneratedMap& g, const std::string& id, const std::string& file) {
  return {{"id", id},
          {"file", file},
          {"seed", g.seed},
          {"side", g.side},
          {"width", g.map.width()},
          {"height", g.map.height()},
          {"floorplan", g.has_floorplan},
          {"obstacles", g.obstacles.size()},
          {"attempts", g.attempts},
          {"free_cells", g.map.free_cell_count()}};
}

// Catalog tier from map features: mowing 0 empty, 1 obstacles, 2 floor plan,
// 3 both; exploration shifts by one and large floor-plan maps go to 5.
int tier_of(const GeneratedMap& g, Task task) {
  const int t = (g.has_floorplan ? 2 : 0) + (g.obstacles.empty() ? 0 : 1);
  if (task == Task::Mowing) return t;
  if (t == 3 && g.side > 12.0) return 5;
  return t + 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate coverage maps"};
  app.require_subcommand(1);

  std::string task_name = "mowing";
  std::uint64_t seed = 0;
  int count = 1;
  std::string out_dir = ".";
  auto* gen = app.add_subcommand("maps", "generate maps for consecutive seeds");
  gen->add_option("--task", task_name, "mowing | exploration")->check(CLI::IsMember({"mowing", "exploration"}));
  gen->add_option("--seed", seed, "first seed");
  gen->add_option("--count", count, "number of maps")->check(CLI::PositiveNumber);
  gen->add_option("--out-dir", out_dir, "output directory");

  int per_tier = 2;
  auto* cat = app.add_subcommand("catalog", "fixed-map catalog with tiers.json");
  cat->add_option("--task", task_name, "mowing | exploration")->check(CLI::IsMember({"mowing", "exploration"}));
  cat->add_option("--seed", seed, "first seed tried");
  cat->add_option("--per-tier", per_tier, "maps per tier")->check(CLI::PositiveNumber);
  cat->add_option("--out-dir", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);
  const Task task = *parse_task(task_name);
  const MapGenParams params = MapGenParams::for_task(task);
  fs::create_directories(out_dir);

  if (*gen) {
    std::ofstream manifest(fs::path(out_dir) / "manifest.jsonl");
    for (int i = 0; i < count; ++i) {
      const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
      const GeneratedMap g = generate_map(s, params);
      const std::string id = task_name + "_" + std::to_string(s);
      save_map_file(g.map, fs::path(out_dir) / (id + ".map"));
      manifest << describe(g, id, id + ".map").dump() << '\n';
    }
    std::cout << "wrote " << count << " maps to " << out_dir << '\n';
    return 0;
  }

  const int tiers = task == Task::Mowing ? 4 : 5;
  const int first_tier = task == Task::Mowing ? 0 : 1;
  std::map<int, int> have;
  nlohmann::json doc;
  doc["task"] = task_name;
  doc["maps"] = nlohmann::json::array();
  int placed = 0;
  for (std::uint64_t s = seed; placed < tiers * per_tier && s < seed + 100000; ++s) {
    const GeneratedMap g = generate_map(s, params);
    const int t = tier_of(g, task);
    if (t < first_tier || t >= first_tier + tiers || have[t] >= per_tier) continue;
    const std::string id = "t" + std::to_string(t) + "_" + std::to_string(have[t]);
    save_map_file(g.map, fs::path(out_dir) / (id + ".map"));
    nlohmann::json entry = describe(g, id, id + ".map");
    entry["tier"] = t;
    doc["maps"].push_back(entry);
    ++have[t];
    ++placed;
  }
  std::ofstream(fs::path(out_dir) / "tiers.json") << doc.dump(2) << '\n';
  std::cout << "catalog of " << placed << " maps in " << out_dir << '\n';
  return placed == tiers * per_tier ? 0 : 1;
}
