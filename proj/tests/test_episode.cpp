#include <doctest.h>

#include <cstring>

#include "covpath/controllers.hpp"
#include "covpath/episode.hpp"
#include "covpath/errors.hpp"

using namespace covpath;

TEST_CASE("presets") {
  for (const char* name : {"mowing", "real-mowing", "omni-exploration", "non-omni-exploration"}) {
    const auto c = EpisodeConfig::from_preset(name);
    REQUIRE(c.has_value());
    CHECK(c->max_steps == 10 * c->reward.truncation_steps);
  }
  CHECK_FALSE(EpisodeConfig::from_preset("swimming").has_value());
  CHECK(EpisodeConfig::omni_exploration().dynamics.v_max == 0.5);
  CHECK(EpisodeConfig::real_mowing().history_length == 10);
  CHECK_FALSE(EpisodeConfig::real_mowing().dynamics.is_first_order());
}

TEST_CASE("reset is deterministic in the seed") {
  EpisodeConfig cfg = EpisodeConfig::mowing();
  cfg.map_seed = 4;
  Episode a(cfg), b(cfg);
  a.reset(77);
  b.reset(77);
  CHECK(a.true_pose() == b.true_pose());
  CHECK(a.observation().dump() == b.observation().dump());
  b.reset(78);
  CHECK_FALSE(a.true_pose() == b.true_pose());
}

TEST_CASE("initial footprint counts as coverage") {
  EpisodeConfig cfg = EpisodeConfig::mowing();
  cfg.build_observations = false;
  Episode ep(cfg);
  const StepRecord r = ep.reset(1);
  CHECK(r.t == 0.0);
  CHECK(r.new_area > 0.0);
  CHECK(r.coverage > 0.0);
  CHECK(r.reward.total == 0.0);
}

TEST_CASE("an idle agent is truncated after tau steps") {
  EpisodeConfig cfg = EpisodeConfig::mowing();
  cfg.build_observations = false;
  Episode ep(cfg);
  ep.reset(2);
  IdleController idle;
  idle.reset(ep);
  StepResult r;
  while (!ep.done()) r = ep.step(idle.act(ep));
  CHECK(ep.steps() == cfg.reward.truncation_steps);
  CHECK(ep.status() == EpisodeStatus::Truncated);
  CHECK(r.reward.total == doctest::Approx(-0.1));
  CHECK_THROWS_AS(ep.step(Action(1, 0)), SteppingFinishedEpisode);
}

TEST_CASE("start inside an obstacle") {
  EpisodeConfig cfg = EpisodeConfig::mowing();
  cfg.start = Pose(0.01, 0.01, 0.0);
  Episode ep(cfg);
  CHECK_THROWS_AS(ep.reset(0), StartInObstacle);
}

TEST_CASE("binding surface") {
  EnvBinding env(EpisodeConfig::real_mowing());
  const std::string first = env.reset(9);
  CHECK(first.size() == env.observation_bytes());
  std::int32_t header[5];
  std::memcpy(header, first.data(), sizeof header);
  CHECK(header[0] == env.episode().config().observation.scales);
  CHECK(header[1] == env.episode().config().observation.grid);
  CHECK(header[3] == 10);
  const EnvBinding::Output o = env.step(0.5, -0.5);
  CHECK(o.observation.size() == first.size());
  CHECK_FALSE(o.terminated);
  CHECK_FALSE(o.truncated);
  const MultiScaleObservation obs = MultiScaleObservation::from_dump(o.observation);
  CHECK(obs.history.back() == -0.5f);
}
