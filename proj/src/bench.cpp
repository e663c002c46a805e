#include "covpath/bench.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "covpath/errors.hpp"

namespace covpath {

std::optional<double> time_to_fraction(std::span<const StepRecord> records, double fraction) {
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (records[k].coverage < fraction) continue;
    if (k == 0) return records[0].t;
    const StepRecord& a = records[k - 1];
    const StepRecord& b = records[k];
    return a.t + (fraction - a.coverage) / (b.coverage - a.coverage) * (b.t - a.t);
  }
  return std::nullopt;
}

CoverageMetrics compute_metrics(std::span<const StepRecord> records, double goal) {
  CoverageMetrics m;
  if (records.empty()) return m;
  m.t90 = time_to_fraction(records, 0.90);
  m.t99 = time_to_fraction(records, 0.99);
  for (std::size_t k = 1; k < records.size(); ++k) {
    const Pose& a = records[k - 1].pose;
    const Pose& b = records[k].pose;
    m.path_length += std::hypot(b.x - a.x, b.y - a.y);
    m.full_rotations += std::abs(wrap_angle(b.heading - a.heading)) / kTwoPi;
  }
  for (const StepRecord& r : records) m.collisions += r.collided;
  m.duration = records.back().t - records.front().t;
  m.collisions_per_minute = m.duration > 0 ? m.collisions / (m.duration / 60.0) : 0.0;
  m.collisions_per_meter = m.path_length > 0 ? m.collisions / m.path_length : 0.0;
  m.final_coverage = records.back().coverage;
  m.reached_goal = m.final_coverage >= goal;
  return m;
}

// --- traces -----------------------------------------------------------------------

namespace {

constexpr const char* kTraceHeader =
    "t,x,y,heading,a_v,a_w,A_new,r_area,r_tv_g,r_tv_i,r_coll,r_const,r_total,collided,coverage";

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }
std::string stat_mean(const Stat& s) { return s.defined() ? format_double(s.mean) : "NA"; }
std::string stat_std(const Stat& s) { return s.defined() ? format_double(s.std) : "NA"; }

}  // namespace

void write_trace_csv(std::ostream& out, std::span<const StepRecord> records) {
  out << kTraceHeader << '\n';
  for (const StepRecord& r : records) {
    out << format_double(r.t) << ',' << format_double(r.pose.x) << ',' << format_double(r.pose.y) << ','
        << format_double(r.pose.heading) << ',' << format_double(r.action.a_v) << ',' << format_double(r.action.a_w)
        << ',' << format_double(r.new_area) << ',' << format_double(r.reward.area) << ','
        << format_double(r.reward.tv_global) << ',' << format_double(r.reward.tv_incremental) << ','
        << format_double(r.reward.collision) << ',' << format_double(r.reward.constant) << ','
        << format_double(r.reward.total) << ',' << (r.collided ? 1 : 0) << ',' << format_double(r.coverage) << '\n';
  }
}

std::vector<StepRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) throw ParseError("trace header mismatch");
  std::vector<StepRecord> out;
  int step = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(field, &used));
        if (used != field.size()) throw ParseError("bad trace number: " + field);
      } catch (const std::logic_error&) {
        throw ParseError("bad trace number: " + field);
      }
    }
    if (v.size() != 15) throw ParseError("trace row needs 15 fields");
    StepRecord r;
    r.step = step++;
    r.t = v[0];
    r.pose = Pose(v[1], v[2], v[3]);
    r.action = Action(v[4], v[5]);
    r.new_area = v[6];
    r.reward = {v[7], v[8], v[9], v[10], v[11], v[12]};
    r.collided = v[13] != 0.0;
    r.coverage = v[14];
    out.push_back(r);
  }
  return out;
}

// --- suites -----------------------------------------------------------------------

std::vector<MapEntry> load_map_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".map") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<MapEntry> out;
  for (const auto& f : files) out.push_back({f.stem().string(), std::make_shared<const WorldMap>(load_map_file(f))});
  return out;
}

EpisodeRun run_episode(const EpisodeConfig& cfg, Controller& controller, std::uint64_t seed, bool keep_trace) {
  Episode ep(cfg);
  std::vector<StepRecord> records{ep.reset(seed)};
  controller.reset(ep);
  while (!ep.done()) records.push_back(ep.step(controller.act(ep)).record);
  EpisodeRun run;
  run.seed = seed;
  run.metrics = compute_metrics(records, cfg.reward.goal_coverage);
  run.steps = ep.steps();
  run.status = ep.status();
  run.charged_seconds = controller.charged_seconds();
  if (keep_trace) run.trace = std::move(records);
  return run;
}

Stat summarize(std::span<const double> values) {
  Stat s;
  s.n = static_cast<int>(values.size());
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.n;
  if (s.n > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(sq / (s.n - 1));
  }
  return s;
}

std::uint64_t episode_seed(std::uint64_t base, const std::string& map_id, int seed_index) {
  // FNV-1a over the id, then a splitmix64 finalizer
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : map_id) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::uint64_t z = base ^ h ^ (static_cast<std::uint64_t>(seed_index) * 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

MapAggregate aggregate(const std::string& id, std::span<const EpisodeRun> runs) {
  MapAggregate a;
  a.map_id = id;
  a.episodes = static_cast<int>(runs.size());
  std::vector<double> t90, t99, path, rot, cpm, cpmeter;
  for (const EpisodeRun& r : runs) {
    a.reached += r.metrics.reached_goal;
    if (r.metrics.t90) t90.push_back(*r.metrics.t90);
    if (r.metrics.t99) t99.push_back(*r.metrics.t99);
    path.push_back(r.metrics.path_length);
    rot.push_back(r.metrics.full_rotations);
    cpm.push_back(r.metrics.collisions_per_minute);
    cpmeter.push_back(r.metrics.collisions_per_meter);
  }
  a.t90 = summarize(t90);
  a.t99 = summarize(t99);
  a.path_length = summarize(path);
  a.rotations = summarize(rot);
  a.collisions_per_minute = summarize(cpm);
  a.collisions_per_meter = summarize(cpmeter);
  return a;
}

void add_mean(Stat& total, const Stat& s, bool& defined) {
  if (!s.defined()) defined = false;
  total.mean += s.mean;
  total.n += s.n;
}

}  // namespace

SuiteResult run_suite(std::vector<MapEntry> maps, const SuiteConfig& cfg) {
  std::sort(maps.begin(), maps.end(), [](const MapEntry& a, const MapEntry& b) { return a.id < b.id; });
  const int seeds = std::max(1, cfg.seeds);
  const int n = static_cast<int>(maps.size()) * seeds;
  SuiteResult out;
  out.runs.resize(static_cast<std::size_t>(n));
  std::vector<std::string> errors(static_cast<std::size_t>(n));

#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, cfg.jobs))
  for (int k = 0; k < n; ++k) {
    const MapEntry& m = maps[static_cast<std::size_t>(k / seeds)];
    const int si = k % seeds;
    try {
      EpisodeConfig ec = cfg.episode;
      ec.map = m.map;
      const std::uint64_t seed = episode_seed(cfg.base_seed, m.id, si);
      auto controller = make_controller(cfg.controller, seed, cfg.planner);
      if (!controller) throw std::invalid_argument("unknown controller " + cfg.controller);
      EpisodeRun run = run_episode(ec, *controller, seed, cfg.keep_traces);
      run.map_id = m.id;
      run.seed_index = si;
      out.runs[static_cast<std::size_t>(k)] = std::move(run);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(k)] = m.id + ": " + e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);

  bool t90_ok = true, t99_ok = true;
  out.total.map_id = "Total";
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto first = out.runs.begin() + static_cast<std::ptrdiff_t>(i) * seeds;
    const MapAggregate a = aggregate(maps[i].id, std::span<const EpisodeRun>(&*first, static_cast<std::size_t>(seeds)));
    out.total.episodes += a.episodes;
    out.total.reached += a.reached;
    add_mean(out.total.t90, a.t90, t90_ok);
    add_mean(out.total.t99, a.t99, t99_ok);
    bool unused = true;
    add_mean(out.total.path_length, a.path_length, unused);
    add_mean(out.total.rotations, a.rotations, unused);
    add_mean(out.total.collisions_per_minute, a.collisions_per_minute, unused);
    add_mean(out.total.collisions_per_meter, a.collisions_per_meter, unused);
    out.per_map.push_back(a);
  }
  if (!t90_ok) out.total.t90.n = 0;
  if (!t99_ok) out.total.t99.n = 0;
  for (const EpisodeRun& r : out.runs) out.all_reached = out.all_reached && r.metrics.reached_goal;
  return out;
}

void write_episodes_csv(std::ostream& out, const SuiteResult& r) {
  out << "map,seed_index,seed,status,steps,T90,T99,path_length,full_rotations,collisions,collisions_per_minute,"
         "collisions_per_meter,final_coverage,reached_goal,charged_seconds\n";
  for (const EpisodeRun& e : r.runs) {
    const CoverageMetrics& m = e.metrics;
    out << e.map_id << ',' << e.seed_index << ',' << e.seed << ',' << to_string(e.status) << ',' << e.steps << ','
        << opt(m.t90) << ',' << opt(m.t99) << ',' << format_double(m.path_length) << ','
        << format_double(m.full_rotations) << ',' << m.collisions << ',' << format_double(m.collisions_per_minute)
        << ',' << format_double(m.collisions_per_meter) << ',' << format_double(m.final_coverage) << ','
        << (m.reached_goal ? 1 : 0) << ',' << format_double(e.charged_seconds) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const SuiteResult& r) {
  out << "map,episodes,reached,T90_mean,T90_std,T99_mean,T99_std,path_length_mean,path_length_std,rotations_mean,"
         "rotations_std,collisions_per_minute_mean,collisions_per_meter_mean\n";
  auto row = [&](const MapAggregate& a, bool total) {
    out << a.map_id << ',' << a.episodes << ',' << a.reached << ',' << stat_mean(a.t90) << ','
        << (total ? "NA" : stat_std(a.t90)) << ',' << stat_mean(a.t99) << ',' << (total ? "NA" : stat_std(a.t99))
        << ',' << stat_mean(a.path_length) << ',' << (total ? "NA" : stat_std(a.path_length)) << ','
        << stat_mean(a.rotations) << ',' << (total ? "NA" : stat_std(a.rotations)) << ','
        << stat_mean(a.collisions_per_minute) << ',' << stat_mean(a.collisions_per_meter) << '\n';
  };
  for (const MapAggregate& a : r.per_map) row(a, false);
  row(r.total, true);
}

}  // namespace covpath
