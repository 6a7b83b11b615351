#include "cv2x/config.hpp"

#include <fstream>
#include <limits>
#include <type_traits>
#include <sstream>

using nlohmann::json;

namespace cv2x {

std::string_view to_string(SelectionPolicy policy) {
  return policy == SelectionPolicy::uniform ? "uniform" : "sensing";
}

SelectionPolicy parse_selection_policy(std::string_view text) {
  if (text == "uniform") return SelectionPolicy::uniform;
  if (text == "sensing") return SelectionPolicy::sensing;
  throw ConfigError("selection_policy: expected 'uniform' or 'sensing', got '" + std::string(text) + "'");
}

namespace {

[[noreturn]] void fail(std::string_view field, const std::string& what) {
  throw ConfigError(std::string(field) + ": " + what);
}

template <typename T>
T read_number(const json& v, std::string_view field) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) fail(field, "expected a boolean");
    return v.get<bool>();
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) fail(field, "expected a number");
    return v.get<T>();
  } else {
    if (!v.is_number_integer()) fail(field, "expected an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.is_number_unsigned()) return v.get<T>();
      if (v.get<std::int64_t>() < 0) fail(field, "must be non-negative");
      return static_cast<T>(v.get<std::int64_t>());
    } else {
      auto raw = v.get<std::int64_t>();
      if (raw < std::numeric_limits<T>::min() || raw > std::numeric_limits<T>::max())
        fail(field, "out of range");
      return static_cast<T>(raw);
    }
  }
}

IntRange read_range(const json& v, std::string_view field, bool allow_scalar) {
  if (allow_scalar && v.is_number_integer()) {
    int k = read_number<int>(v, field);
    return {k, k};
  }
  if (!v.is_array() || v.size() != 2) fail(field, "expected [lower, upper]");
  return {read_number<int>(v[0], field), read_number<int>(v[1], field)};
}

void check_range(const IntRange& r, std::string_view field) {
  if (r.lo <= 0) fail(field, "lower bound must be positive");
  if (r.lo > r.hi) fail(field, "lower bound exceeds upper");
}

}  // namespace

void check_invariants(const ScenarioConfig& c) {
  if (c.num_targets < 1) fail("num_targets", "must be at least 1");
  if (c.num_attackers < 0) fail("num_attackers", "must be non-negative");
  if (c.num_resources < 1) fail("num_resources", "must be at least 1");
  if (!(c.period_ms > 0.0)) fail("period_ms", "must be positive");
  check_range(c.sps_range, "sps_range");
  check_range(c.oneshot_range, "oneshot_range");
  if (!(c.keep_prob >= 0.0 && c.keep_prob <= 1.0)) fail("keep_prob", "must lie in [0, 1]");
  check_range(c.attacker_interval, "attacker_interval");
  if (c.sensing_window_periods < 1) fail("sensing_window_periods", "must be at least 1");
  if (!(c.candidate_min_fraction > 0.0 && c.candidate_min_fraction <= 1.0))
    fail("candidate_min_fraction", "must lie in (0, 1]");
  if (c.warmup_periods < c.sensing_window_periods)
    fail("warmup_periods", "must be at least sensing_window_periods");
  if (c.sim_periods <= c.warmup_periods) fail("sim_periods", "must exceed warmup_periods");
  if (c.replications < 1) fail("replications", "must be at least 1");
}

ScenarioConfig apply_overrides(const ScenarioConfig& base, const json& raw) {
  if (!raw.is_object()) throw ConfigError("config: expected a JSON object");
  ScenarioConfig c = base;
  for (const auto& [key, v] : raw.items()) {
    if (key == "num_targets") c.num_targets = read_number<int>(v, key);
    else if (key == "num_attackers") c.num_attackers = read_number<int>(v, key);
    else if (key == "num_resources") c.num_resources = read_number<int>(v, key);
    else if (key == "period_ms") c.period_ms = read_number<double>(v, key);
    else if (key == "sps_range") c.sps_range = read_range(v, key, false);
    else if (key == "oneshot_enabled") c.oneshot_enabled = read_number<bool>(v, key);
    else if (key == "oneshot_range") c.oneshot_range = read_range(v, key, false);
    else if (key == "keep_prob") c.keep_prob = read_number<double>(v, key);
    else if (key == "attacker_interval") c.attacker_interval = read_range(v, key, true);
    else if (key == "sensing_window_periods") c.sensing_window_periods = read_number<int>(v, key);
    else if (key == "selection_policy" || key == "oneshot_selection_policy") {
      if (!v.is_string()) fail(key, "expected 'uniform' or 'sensing'");
      auto p = parse_selection_policy(v.get<std::string>());
      (key == "selection_policy" ? c.selection_policy : c.oneshot_selection_policy) = p;
    } else if (key == "candidate_min_fraction") c.candidate_min_fraction = read_number<double>(v, key);
    else if (key == "sim_periods") c.sim_periods = read_number<std::int64_t>(v, key);
    else if (key == "warmup_periods") c.warmup_periods = read_number<std::int64_t>(v, key);
    else if (key == "master_seed") c.master_seed = read_number<std::uint64_t>(v, key);
    else if (key == "replications") c.replications = read_number<int>(v, key);
    else if (key == "sense_any_energy") c.sense_any_energy = read_number<bool>(v, key);
    else if (key == "extra_co_decrement_on_keep") c.extra_co_decrement_on_keep = read_number<bool>(v, key);
    else fail(key, "unknown configuration field");
  }
  check_invariants(c);
  return c;
}

ScenarioConfig validate_config(const json& raw) { return apply_overrides(ScenarioConfig{}, raw); }

json to_json(const ScenarioConfig& c) {
  json j;
  j["num_targets"] = c.num_targets;
  j["num_attackers"] = c.num_attackers;
  j["num_resources"] = c.num_resources;
  j["period_ms"] = c.period_ms;
  j["sps_range"] = {c.sps_range.lo, c.sps_range.hi};
  j["oneshot_enabled"] = c.oneshot_enabled;
  j["oneshot_range"] = {c.oneshot_range.lo, c.oneshot_range.hi};
  j["keep_prob"] = c.keep_prob;
  if (c.attacker_interval.lo == c.attacker_interval.hi)
    j["attacker_interval"] = c.attacker_interval.lo;
  else
    j["attacker_interval"] = {c.attacker_interval.lo, c.attacker_interval.hi};
  j["sensing_window_periods"] = c.sensing_window_periods;
  j["selection_policy"] = to_string(c.selection_policy);
  j["oneshot_selection_policy"] = to_string(c.oneshot_selection_policy);
  j["candidate_min_fraction"] = c.candidate_min_fraction;
  j["sim_periods"] = c.sim_periods;
  j["warmup_periods"] = c.warmup_periods;
  j["master_seed"] = c.master_seed;
  j["replications"] = c.replications;
  j["sense_any_energy"] = c.sense_any_energy;
  j["extra_co_decrement_on_keep"] = c.extra_co_decrement_on_keep;
  return j;
}

ScenarioConfig parse_config(std::string_view text) {
  json raw;
  try {
    raw = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return validate_config(raw);
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

json parse_override_value(std::string_view value) {
  try {
    return json::parse(value);
  } catch (const json::parse_error&) {
    return json(std::string(value));
  }
}

json parse_override(std::string_view assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("--set: expected key=value, got '" + std::string(assignment) + "'");
  json out = json::object();
  out[std::string(assignment.substr(0, eq))] = parse_override_value(assignment.substr(eq + 1));
  return out;
}

}  // namespace cv2x
