#include <doctest.h>

#include "cv2x/config.hpp"

using namespace cv2x;
using nlohmann::json;

TEST_CASE("defaults reproduce the reference setup") {
  ScenarioConfig c = validate_config(json::object());
  CHECK(c.num_resources == 100);
  CHECK(c.period_ms == 100.0);
  CHECK(c.sps_range == IntRange{5, 15});
  CHECK(c.keep_prob == doctest::Approx(0.8));
  CHECK(c.reselect_prob() == doctest::Approx(0.2));
  CHECK(c.sensing_window_periods == 10);
  CHECK(c.warmup_periods == 10);
  CHECK(c.candidate_min_fraction == doctest::Approx(0.2));
  CHECK(c.selection_policy == SelectionPolicy::sensing);
  CHECK(c.oneshot_selection_policy == SelectionPolicy::sensing);
  CHECK_FALSE(c.sense_any_energy);
  CHECK_FALSE(c.extra_co_decrement_on_keep);
  CHECK(c == ScenarioConfig{});
}

TEST_CASE("partial config fills defaults") {
  ScenarioConfig c = validate_config({{"num_targets", 5}, {"num_attackers", 5}});
  CHECK(c.num_targets == 5);
  CHECK(c.num_attackers == 5);
  CHECK(c.num_resources == 100);
  CHECK(c.sps_range == IntRange{5, 15});
  CHECK(c.keep_prob == doctest::Approx(0.8));
}

TEST_CASE("invariant violations name the field") {
  auto message = [](const json& raw) {
    try {
      validate_config(raw);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("<no error>");
  };
  CHECK(message({{"sps_range", {15, 5}}}) == "sps_range: lower bound exceeds upper");
  CHECK(message({{"num_targets", 0}}).rfind("num_targets:", 0) == 0);
  CHECK(message({{"oneshot_range", {0, 3}}}).rfind("oneshot_range:", 0) == 0);
  CHECK(message({{"keep_prob", 1.5}}).rfind("keep_prob:", 0) == 0);
  CHECK(message({{"num_resources", 0}}).rfind("num_resources:", 0) == 0);
  CHECK(message({{"candidate_min_fraction", 0.0}}).rfind("candidate_min_fraction:", 0) == 0);
  CHECK(message({{"warmup_periods", 5}}).rfind("warmup_periods:", 0) == 0);
  CHECK(message({{"sensing_window_periods", 0}}).rfind("sensing_window_periods:", 0) == 0);
  CHECK(message({{"attacker_interval", 0}}).rfind("attacker_interval:", 0) == 0);
  CHECK(message({{"num_attackers", -1}}).rfind("num_attackers:", 0) == 0);
  CHECK(message({{"bogus", 1}}).rfind("bogus:", 0) == 0);
  CHECK(message({{"selection_policy", "random"}}).rfind("selection_policy:", 0) == 0);
  CHECK(message({{"num_targets", "five"}}).rfind("num_targets:", 0) == 0);
}

TEST_CASE("attacker interval accepts a fixed value or a range") {
  CHECK(validate_config({{"attacker_interval", 7}}).attacker_interval == IntRange{7, 7});
  CHECK(validate_config({{"attacker_interval", {3, 9}}}).attacker_interval == IntRange{3, 9});
  CHECK(to_json(validate_config({{"attacker_interval", 7}}))["attacker_interval"] == 7);
}

TEST_CASE("serialize then parse round-trips field for field") {
  ScenarioConfig c;
  c.num_targets = 30;
  c.num_attackers = 30;
  c.oneshot_enabled = true;
  c.oneshot_range = {5, 15};
  c.keep_prob = 0.4;
  c.attacker_interval = {3, 3};
  c.selection_policy = SelectionPolicy::uniform;
  c.sense_any_energy = true;
  c.master_seed = 0xffffffffffffffffULL;
  c.sim_periods = 20'000'000;
  c.period_ms = 50.0;
  c.candidate_min_fraction = 0.35;
  CHECK(parse_config(to_json(c).dump()) == c);
  CHECK(parse_config(to_json(ScenarioConfig{}).dump()) == ScenarioConfig{});
}

TEST_CASE("--set values parse as JSON when possible") {
  CHECK(parse_override("num_targets=5") == json{{"num_targets", 5}});
  CHECK(parse_override("sps_range=[1,1]") == json{{"sps_range", {1, 1}}});
  CHECK(parse_override("selection_policy=uniform") == json{{"selection_policy", "uniform"}});
  CHECK(parse_override("oneshot_enabled=true") == json{{"oneshot_enabled", true}});
  CHECK_THROWS_AS(parse_override("novalue"), ConfigError);
  CHECK_THROWS_AS(parse_override("=3"), ConfigError);

  // overrides apply before validation: warmup and window can move together
  json overrides = parse_override("sensing_window_periods=20");
  overrides.update(parse_override("warmup_periods=20"));
  ScenarioConfig c = validate_config(overrides);
  CHECK(c.sensing_window_periods == 20);
  CHECK(c.warmup_periods == 20);
}

TEST_CASE("malformed config text is a config error") {
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1,2]"), ConfigError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/cfg.json"), ConfigError);
}
