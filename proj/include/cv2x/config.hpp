#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace cv2x {

/// Raised when a scenario configuration is malformed or violates an invariant.
/// The message always starts with the offending field name.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed integer interval [lo, hi].
struct IntRange {
  int lo = 0;
  int hi = 0;

  int width() const { return hi - lo + 1; }
  bool contains(int v) const { return v >= lo && v <= hi; }
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

enum class SelectionPolicy { uniform, sensing };

std::string_view to_string(SelectionPolicy policy);
SelectionPolicy parse_selection_policy(std::string_view text);

/// Full parameterization of one simulated world. Defaults reproduce the
/// reference setup: 100 resources, 100 ms period, SPS counter in [5,15],
/// reselection probability 0.2.
struct ScenarioConfig {
  int num_targets = 5;
  int num_attackers = 0;
  int num_resources = 100;
  double period_ms = 100.0;
  IntRange sps_range{5, 15};
  bool oneshot_enabled = false;
  IntRange oneshot_range{2, 6};
  double keep_prob = 0.8;
  // A fixed hold of k periods is stored as [k, k].
  IntRange attacker_interval{5, 15};
  int sensing_window_periods = 10;
  SelectionPolicy selection_policy = SelectionPolicy::sensing;
  SelectionPolicy oneshot_selection_policy = SelectionPolicy::sensing;
  double candidate_min_fraction = 0.2;
  std::int64_t sim_periods = 1'000'000;
  std::int64_t warmup_periods = 10;
  std::uint64_t master_seed = 1;
  int replications = 4;
  // Ledger marks any target occupancy instead of decodable-only use.
  bool sense_any_energy = false;
  // Case (a) keep-branch applies a second C_o decrement.
  bool extra_co_decrement_on_keep = false;

  double reselect_prob() const { return 1.0 - keep_prob; }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws ConfigError naming the first violated field.
void check_invariants(const ScenarioConfig& cfg);

/// Builds a config from defaults overlaid with the keys present in `raw`,
/// then checks invariants. Unknown keys are rejected.
ScenarioConfig validate_config(const nlohmann::json& raw);

/// Overlays `overrides` onto an existing config and re-validates.
ScenarioConfig apply_overrides(const ScenarioConfig& base, const nlohmann::json& overrides);

nlohmann::json to_json(const ScenarioConfig& cfg);

/// Parses the text form of a config file (JSON object).
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config_file(const std::string& path);

/// Parses the right-hand side of a `--set key=value` pair. JSON literals are
/// taken as-is; anything else is treated as a bare string.
nlohmann::json parse_override_value(std::string_view value);

/// Splits "key=value" into a one-entry JSON object.
nlohmann::json parse_override(std::string_view assignment);

}  // namespace cv2x
