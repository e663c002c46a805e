#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "covpath/controllers.hpp"
#include "covpath/episode.hpp"

namespace covpath {

struct CoverageMetrics {
  std::optional<double> t90;  // s, interpolated
  std::optional<double> t99;
  double path_length = 0.0;       // m
  double full_rotations = 0.0;    // sum |d heading| / 2 pi
  int collisions = 0;
  double collisions_per_minute = 0.0;
  double collisions_per_meter = 0.0;
  double duration = 0.0;          // s
  double final_coverage = 0.0;
  bool reached_goal = false;
};

// Sim time at which coverage first reaches `fraction`, linearly interpolated
// between the two records that straddle it.
std::optional<double> time_to_fraction(std::span<const StepRecord> records, double fraction);

CoverageMetrics compute_metrics(std::span<const StepRecord> records, double goal = 0.99);

// --- traces -----------------------------------------------------------------------

void write_trace_csv(std::ostream& out, std::span<const StepRecord> records);
std::vector<StepRecord> read_trace_csv(std::istream& in);

// --- suites -----------------------------------------------------------------------

struct MapEntry {
  std::string id;
  std::shared_ptr<const WorldMap> map;
};

// All *.map files in a directory, sorted by file name; id = file stem.
std::vector<MapEntry> load_map_dir(const std::filesystem::path& dir);

struct EpisodeRun {
  std::string map_id;
  int seed_index = 0;
  std::uint64_t seed = 0;
  CoverageMetrics metrics;
  int steps = 0;
  EpisodeStatus status = EpisodeStatus::Running;
  double charged_seconds = 0.0;
  std::vector<StepRecord> trace;  // kept only when requested
};

EpisodeRun run_episode(const EpisodeConfig& cfg, Controller& controller, std::uint64_t seed, bool keep_trace = false);

struct SuiteConfig {
  EpisodeConfig episode = EpisodeConfig::mowing();
  std::string controller = "bsa";
  PlannerConfig planner;
  int seeds = 1;
  std::uint64_t base_seed = 0;
  int jobs = 1;
  bool keep_traces = false;
};

struct Stat {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
  int n = 0;         // defined values
  bool defined() const { return n > 0; }
};
Stat summarize(std::span<const double> values);

struct MapAggregate {
  std::string map_id;
  int episodes = 0;
  int reached = 0;
  Stat t90, t99, path_length, rotations, collisions_per_minute, collisions_per_meter;
};

struct SuiteResult {
  std::vector<EpisodeRun> runs;         // ordered by (map id, seed index)
  std::vector<MapAggregate> per_map;    // ordered by map id
  MapAggregate total;                   // sums of the per-map means
  bool all_reached = true;
};

// Per-episode seed from the suite seed, the map id and the seed index; does
// not depend on the order maps are listed in.
std::uint64_t episode_seed(std::uint64_t base, const std::string& map_id, int seed_index);

SuiteResult run_suite(std::vector<MapEntry> maps, const SuiteConfig& cfg);

void write_episodes_csv(std::ostream& out, const SuiteResult& r);
void write_summary_csv(std::ostream& out, const SuiteResult& r);

}  // namespace covpath
